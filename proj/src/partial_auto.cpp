#include "simlab/partial_auto.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace simlab {

PartialAutomorphism PartialAutomorphism::from_pairs(
    std::shared_ptr<const FinStructure> ambient,
    const std::vector<std::pair<int, int>>& pairs) {
    PartialAutomorphism p(std::move(ambient));
    for (const auto& [a, b] : pairs) {
        if (a < 0 || a >= p.universe_size() || b < 0 || b >= p.universe_size())
            throw DomainError("partial automorphism: point out of range");
        if (p.img_[a] >= 0 && p.img_[a] != b)
            throw DomainError("partial automorphism: conflicting images");
        p.img_[a] = b;
    }
    return p;
}

PartialAutomorphism PartialAutomorphism::total(
    std::shared_ptr<const FinStructure> ambient, const Perm& perm) {
    PartialAutomorphism p(std::move(ambient));
    if (static_cast<int>(perm.size()) != p.universe_size())
        throw DomainError("total map: size mismatch");
    p.img_ = perm;
    return p;
}

int PartialAutomorphism::dom_size() const {
    int k = 0;
    for (int v : img_)
        if (v >= 0) ++k;
    return k;
}

int PartialAutomorphism::preimage(int b) const {
    for (int a = 0; a < universe_size(); ++a)
        if (img_[a] == b) return a;
    return -1;
}

std::vector<int> PartialAutomorphism::domain() const {
    std::vector<int> d;
    for (int a = 0; a < universe_size(); ++a)
        if (img_[a] >= 0) d.push_back(a);
    return d;
}

std::vector<int> PartialAutomorphism::range() const {
    std::vector<int> r;
    for (int a = 0; a < universe_size(); ++a)
        if (img_[a] >= 0) r.push_back(img_[a]);
    std::sort(r.begin(), r.end());
    return r;
}

std::vector<std::pair<int, int>> PartialAutomorphism::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < universe_size(); ++a)
        if (img_[a] >= 0) out.emplace_back(a, img_[a]);
    return out;
}

Perm PartialAutomorphism::as_perm() const {
    if (!is_total()) throw DomainError("as_perm: map is not total");
    return img_;
}

PartialAutomorphism PartialAutomorphism::inverted() const {
    PartialAutomorphism q(ambient_);
    for (int a = 0; a < universe_size(); ++a)
        if (img_[a] >= 0) q.img_[img_[a]] = a;
    return q;
}

PartialAutomorphism PartialAutomorphism::with_pair(int a, int b) const {
    PartialAutomorphism q = *this;
    q.img_[a] = b;
    return q;
}

PartialAutomorphism PartialAutomorphism::rebase(
    std::shared_ptr<const FinStructure> bigger) const {
    if (bigger->n < universe_size())
        throw DomainError("rebase: ambient shrank");
    PartialAutomorphism q(std::move(bigger));
    for (int a = 0; a < universe_size(); ++a) q.img_[a] = img_[a];
    return q;
}

bool PartialAutomorphism::operator==(const PartialAutomorphism& other) const {
    bool this_empty = !ambient_, other_empty = !other.ambient_;
    if (this_empty || other_empty) return this_empty == other_empty;
    return *ambient_ == *other.ambient_ && img_ == other.img_;
}

bool is_partial_automorphism(const PartialAutomorphism& p) {
    const FinStructure& s = p.ambient();
    std::vector<char> hit(s.n, 0);
    for (int a = 0; a < s.n; ++a) {
        int b = p.image(a);
        if (b < 0) continue;
        if (b >= s.n || hit[b]) return false;  // injective
        hit[b] = 1;
    }
    for (int a1 = 0; a1 < s.n; ++a1) {
        if (!p.defined_at(a1)) continue;
        for (int a2 = 0; a2 < s.n; ++a2) {
            if (a1 == a2 || !p.defined_at(a2)) continue;
            int b1 = p.image(a1), b2 = p.image(a2);
            if (s.has_pair(a1, a2) != s.has_pair(b1, b2)) return false;
            if (s.tag == ClassTag::OrderedRationalMetric &&
                s.dist[a1][a2] != s.dist[b1][b2])
                return false;
        }
    }
    return true;
}

bool pair_compatible(const PartialAutomorphism& p, int a, int b) {
    const FinStructure& s = p.ambient();
    if (a < 0 || a >= s.n || b < 0 || b >= s.n) return false;
    if (p.defined_at(a) || p.has_preimage(b)) return false;
    for (int x = 0; x < s.n; ++x) {
        if (!p.defined_at(x)) continue;
        int y = p.image(x);
        if (s.has_pair(a, x) != s.has_pair(b, y)) return false;
        if (s.has_pair(x, a) != s.has_pair(y, b)) return false;
        if (s.tag == ClassTag::OrderedRationalMetric && s.dist[a][x] != s.dist[b][y])
            return false;
    }
    return true;
}

PartialAutomorphism compose(const PartialAutomorphism& p,
                            const PartialAutomorphism& q) {
    if (!(p.ambient() == q.ambient()))
        throw DomainError("compose: ambient mismatch");
    PartialAutomorphism r(q.ambient_ptr());
    for (int a = 0; a < q.universe_size(); ++a) {
        int m = q.image(a);
        if (m >= 0 && p.defined_at(m)) r = r.with_pair(a, p.image(m));
    }
    return r;
}

bool extends(const PartialAutomorphism& p, const PartialAutomorphism& q) {
    if (!(p.ambient() == q.ambient())) return false;
    for (int a = 0; a < q.universe_size(); ++a)
        if (q.defined_at(a) && p.image(a) != q.image(a)) return false;
    return true;
}

PartialAutomorphism close_under_acl(const PartialAutomorphism& p) {
    if (p.ambient().tag != ClassTag::EqPairs) return p;
    const FinStructure& s = p.ambient();
    PartialAutomorphism q = p;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < s.n; ++a) {
            if (!q.defined_at(a)) continue;
            int b = q.image(a);
            int ap = s.partner(a), bp = s.partner(b);
            if (ap < 0 && bp < 0) continue;
            if (ap < 0 || bp < 0)
                throw DomainError(
                    "close_under_acl: ambient too small to contain the closure");
            if (q.defined_at(ap)) {
                if (q.image(ap) != bp)
                    throw DomainError("close_under_acl: partner images clash");
                continue;
            }
            if (q.has_preimage(bp))
                throw DomainError("close_under_acl: partner images clash");
            q = q.with_pair(ap, bp);
            changed = true;
        }
    }
    return q;
}

PartialAutomorphism one_point_extend(const PartialAutomorphism& p, int b, int c) {
    if (b < 0 || b >= p.universe_size() || c < 0 || c >= p.universe_size())
        throw DomainError("one_point_extend: point out of range");
    if (p.defined_at(b)) throw DomainError("one_point_extend: b already in domain");
    if (p.has_preimage(c)) throw DomainError("one_point_extend: c already in range");
    if (!pair_compatible(p, b, c))
        throw DomainError("one_point_extend: image incompatible with class axioms");
    return close_under_acl(p.with_pair(b, c));
}

OrbitResult orbit(const std::vector<PartialAutomorphism>& maps, int a,
                  int word_bound) {
    const int n = static_cast<int>(maps.size());
    if (a < 0 || (n > 0 && a >= maps[0].universe_size()))
        throw DomainError("orbit: point out of range");
    for (const auto& m : maps)
        if (!(m.ambient() == maps[0].ambient()))
            throw DomainError("orbit: ambient mismatch");

    // Walk reduced words by prepending letters: state = (value, last
    // prepended letter). Letters 0..n-1 are the maps, n..2n-1 their inverses.
    auto apply = [&](int letter, int v) -> int {
        return letter < n ? maps[letter].image(v) : maps[letter - n].preimage(v);
    };
    auto inverse_letter = [&](int letter) {
        return letter < n ? letter + n : letter - n;
    };

    std::set<int> points{a};
    std::set<std::pair<int, int>> seen;  // (value, last letter)
    std::deque<std::tuple<int, int, int>> queue;  // value, last letter, depth
    bool boundary = false;
    queue.emplace_back(a, -1, 0);
    while (!queue.empty()) {
        auto [v, last, depth] = queue.front();
        queue.pop_front();
        if (depth >= word_bound) continue;
        for (int letter = 0; letter < 2 * n; ++letter) {
            if (last >= 0 && letter == inverse_letter(last)) continue;
            int w = apply(letter, v);
            if (w < 0) {
                boundary = true;
                continue;
            }
            points.insert(w);
            if (seen.insert({w, letter}).second)
                queue.emplace_back(w, letter, depth + 1);
        }
    }
    return OrbitResult{std::vector<int>(points.begin(), points.end()), !boundary};
}

}  // namespace simlab

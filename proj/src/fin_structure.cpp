#include "simlab/fin_structure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "simlab/rng.hpp"

namespace simlab {

const char* class_tag_name(ClassTag tag) {
    switch (tag) {
        case ClassTag::Graph: return "graph";
        case ClassTag::LinearOrder: return "linear_order";
        case ClassTag::OrderedRationalMetric: return "ordered_rational_metric";
        case ClassTag::EqPairs: return "eq_pairs";
    }
    return "?";
}

std::optional<ClassTag> class_tag_from_name(const std::string& name) {
    if (name == "graph") return ClassTag::Graph;
    if (name == "linear_order") return ClassTag::LinearOrder;
    if (name == "ordered_rational_metric") return ClassTag::OrderedRationalMetric;
    if (name == "eq_pairs") return ClassTag::EqPairs;
    return std::nullopt;
}

bool class_is_ordered(ClassTag tag) {
    return tag == ClassTag::LinearOrder || tag == ClassTag::OrderedRationalMetric;
}

namespace {

bool symmetric_relation(ClassTag tag) {
    return tag == ClassTag::Graph || tag == ClassTag::EqPairs;
}

}  // namespace

FinStructure FinStructure::empty(ClassTag tag) {
    FinStructure s;
    s.tag = tag;
    return s;
}

FinStructure FinStructure::graph(int n, std::vector<std::pair<int, int>> edges) {
    FinStructure s;
    s.tag = ClassTag::Graph;
    s.n = n;
    s.rel = std::move(edges);
    s.normalize();
    return s;
}

FinStructure FinStructure::linear_order(int n) {
    FinStructure s;
    s.tag = ClassTag::LinearOrder;
    s.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s.rel.emplace_back(i, j);
    return s;
}

FinStructure FinStructure::linear_order_from_ranks(const std::vector<int>& rank) {
    FinStructure s;
    s.tag = ClassTag::LinearOrder;
    s.n = static_cast<int>(rank.size());
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            if (rank[i] < rank[j]) s.rel.emplace_back(i, j);
    s.normalize();
    return s;
}

FinStructure FinStructure::ordered_metric(int n, std::vector<std::vector<Rat>> d) {
    FinStructure s = linear_order(n);
    s.tag = ClassTag::OrderedRationalMetric;
    s.dist = std::move(d);
    return s;
}

FinStructure FinStructure::eq_pairs(int n, std::vector<std::pair<int, int>> pairs) {
    FinStructure s;
    s.tag = ClassTag::EqPairs;
    s.n = n;
    s.rel = std::move(pairs);
    s.normalize();
    return s;
}

void FinStructure::normalize() {
    if (symmetric_relation(tag)) {
        for (auto& [a, b] : rel)
            if (a > b) std::swap(a, b);
    }
    std::sort(rel.begin(), rel.end());
    rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
}

bool FinStructure::has_pair(int a, int b) const {
    std::pair<int, int> key{a, b};
    if (symmetric_relation(tag) && key.first > key.second)
        std::swap(key.first, key.second);
    return std::binary_search(rel.begin(), rel.end(), key);
}

bool FinStructure::less(int a, int b) const { return has_pair(a, b); }

std::vector<int> FinStructure::order_ranks() const {
    std::vector<int> rank(n, 0);
    for (const auto& [a, b] : rel) {
        (void)a;
        ++rank[b];
    }
    return rank;
}

std::vector<int> FinStructure::points_in_order() const {
    std::vector<int> rank = order_ranks();
    std::vector<int> pts(n);
    for (int i = 0; i < n; ++i) pts[rank[i]] = i;
    return pts;
}

int FinStructure::partner(int i) const {
    for (const auto& [a, b] : rel) {
        if (a == i) return b;
        if (b == i) return a;
    }
    return -1;
}

Rat FinStructure::diameter() const {
    Rat d = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dist[i][j] > d) d = dist[i][j];
    return d;
}

namespace {

bool pairs_in_range(const FinStructure& s) {
    for (const auto& [a, b] : s.rel)
        if (a < 0 || a >= s.n || b < 0 || b >= s.n) return false;
    return true;
}

bool valid_strict_total_order(const FinStructure& s) {
    for (const auto& [a, b] : s.rel)
        if (a == b) return false;
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j) {
            bool ij = s.has_pair(i, j), ji = s.has_pair(j, i);
            if (ij == ji) return false;  // totality + antisymmetry
        }
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            for (int k = 0; k < s.n; ++k)
                if (s.has_pair(i, j) && s.has_pair(j, k) && !s.has_pair(i, k))
                    return false;
    return true;
}

bool valid_metric(const FinStructure& s) {
    if (static_cast<int>(s.dist.size()) != s.n) return false;
    for (const auto& row : s.dist)
        if (static_cast<int>(row.size()) != s.n) return false;
    for (int i = 0; i < s.n; ++i) {
        if (s.dist[i][i] != 0) return false;
        for (int j = 0; j < s.n; ++j) {
            if (s.dist[i][j] != s.dist[j][i]) return false;
            if (i != j && s.dist[i][j] <= 0) return false;
        }
    }
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            for (int k = 0; k < s.n; ++k)
                if (s.dist[i][k] > s.dist[i][j] + s.dist[j][k]) return false;
    return true;
}

}  // namespace

bool is_valid(const FinStructure& s) {
    if (s.n < 0) return false;
    if (!pairs_in_range(s)) return false;
    switch (s.tag) {
        case ClassTag::Graph: {
            if (!s.dist.empty()) return false;
            for (const auto& [a, b] : s.rel)
                if (a == b) return false;  // irreflexive
            return true;
        }
        case ClassTag::LinearOrder:
            return s.dist.empty() && valid_strict_total_order(s);
        case ClassTag::OrderedRationalMetric:
            return valid_strict_total_order(s) && valid_metric(s);
        case ClassTag::EqPairs: {
            if (!s.dist.empty()) return false;
            std::vector<int> uses(s.n, 0);
            for (const auto& [a, b] : s.rel) {
                if (a == b) return false;
                ++uses[a];
                ++uses[b];
            }
            // classes of size <= 2: each point in at most one pair
            for (int u : uses)
                if (u > 1) return false;
            return true;
        }
    }
    return false;
}

Substructure substructure(const FinStructure& s, const std::vector<int>& points) {
    std::vector<int> kept = points;
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    for (int p : kept)
        if (p < 0 || p >= s.n) throw DomainError("substructure: index out of range");

    std::vector<int> new_index(s.n, -1);
    for (int i = 0; i < static_cast<int>(kept.size()); ++i) new_index[kept[i]] = i;

    FinStructure out;
    out.tag = s.tag;
    out.n = static_cast<int>(kept.size());
    for (const auto& [a, b] : s.rel)
        if (new_index[a] >= 0 && new_index[b] >= 0)
            out.rel.emplace_back(new_index[a], new_index[b]);
    out.normalize();
    if (s.tag == ClassTag::OrderedRationalMetric) {
        out.dist.assign(out.n, std::vector<Rat>(out.n, Rat(0)));
        for (int i = 0; i < out.n; ++i)
            for (int j = 0; j < out.n; ++j) out.dist[i][j] = s.dist[kept[i]][kept[j]];
    }
    return Substructure{std::move(out), std::move(kept)};
}

bool is_embedding(const FinStructure& a, const FinStructure& b,
                  const std::vector<int>& map) {
    if (static_cast<int>(map.size()) != a.n) return false;
    std::vector<char> used(b.n, 0);
    for (int img : map) {
        if (img < 0 || img >= b.n || used[img]) return false;
        used[img] = 1;
    }
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) {
            if (i == j) continue;
            if (a.has_pair(i, j) != b.has_pair(map[i], map[j])) return false;
        }
    if (a.tag == ClassTag::OrderedRationalMetric)
        for (int i = 0; i < a.n; ++i)
            for (int j = 0; j < a.n; ++j)
                if (a.dist[i][j] != b.dist[map[i]][map[j]]) return false;
    return true;
}

namespace {

bool partial_map_consistent(const FinStructure& a, const FinStructure& b,
                            const std::vector<int>& map, int next) {
    // map[0..next] assigned; checks pairs touching `next`
    for (int i = 0; i <= next; ++i) {
        if (i != next) {
            if (a.has_pair(i, next) != b.has_pair(map[i], map[next])) return false;
            if (a.has_pair(next, i) != b.has_pair(map[next], map[i])) return false;
        }
        if (a.tag == ClassTag::OrderedRationalMetric &&
            a.dist[i][next] != b.dist[map[i]][map[next]])
            return false;
    }
    return true;
}

}  // namespace

std::vector<Embedding> enumerate_embeddings(const FinStructure& a,
                                            const FinStructure& b) {
    std::vector<Embedding> out;
    std::vector<int> map(a.n, -1);
    std::vector<char> used(b.n, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == a.n) {
            out.push_back(Embedding{map});
            return;
        }
        for (int img = 0; img < b.n; ++img) {
            if (used[img]) continue;
            map[i] = img;
            if (partial_map_consistent(a, b, map, i)) {
                used[img] = 1;
                rec(i + 1);
                used[img] = 0;
            }
        }
        map[i] = -1;
    };
    rec(0);
    return out;
}

Amalgam free_amalgam(const FinStructure& c, const FinStructure& a,
                     const FinStructure& b, const Embedding& ea,
                     const Embedding& eb) {
    if (a.tag != ClassTag::Graph || b.tag != ClassTag::Graph ||
        c.tag != ClassTag::Graph)
        throw DomainError("free_amalgam: class does not support free amalgamation");
    if (!is_embedding(c, a, ea.map) || !is_embedding(c, b, eb.map))
        throw DomainError("free_amalgam: maps are not embeddings of the base");

    std::vector<int> bmap(b.n, -1);
    for (int i = 0; i < c.n; ++i) bmap[eb.map[i]] = ea.map[i];
    int fresh = a.n;
    for (int i = 0; i < b.n; ++i)
        if (bmap[i] < 0) bmap[i] = fresh++;

    FinStructure d;
    d.tag = ClassTag::Graph;
    d.n = a.n + b.n - c.n;
    d.rel = a.rel;
    for (const auto& [x, y] : b.rel) d.rel.emplace_back(bmap[x], bmap[y]);
    d.normalize();

    Embedding left;
    left.map.resize(a.n);
    for (int i = 0; i < a.n; ++i) left.map[i] = i;
    return Amalgam{std::move(d), std::move(left), Embedding{std::move(bmap)}};
}

Amalgam jep_ordered_metric(const FinStructure& a, const FinStructure& b,
                           const Rat& d0) {
    if (a.tag != ClassTag::OrderedRationalMetric ||
        b.tag != ClassTag::OrderedRationalMetric)
        throw DomainError("jep_ordered_metric: inputs must be ordered metric spaces");
    if (d0 <= 0) throw DomainError("jep_ordered_metric: d0 must be positive");
    if ((a.n > 0 && a.diameter() > 2 * d0) || (b.n > 0 && b.diameter() > 2 * d0))
        throw DomainError("jep_ordered_metric: d0 too small for triangle inequality");

    FinStructure c;
    c.tag = ClassTag::OrderedRationalMetric;
    c.n = a.n + b.n;
    c.rel = a.rel;
    for (const auto& [x, y] : b.rel) c.rel.emplace_back(x + a.n, y + a.n);
    for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < b.n; ++y) c.rel.emplace_back(x, y + a.n);
    c.normalize();
    c.dist.assign(c.n, std::vector<Rat>(c.n, d0));
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) c.dist[i][j] = a.dist[i][j];
    for (int i = 0; i < b.n; ++i)
        for (int j = 0; j < b.n; ++j) c.dist[i + a.n][j + a.n] = b.dist[i][j];

    Embedding left, right;
    left.map.resize(a.n);
    for (int i = 0; i < a.n; ++i) left.map[i] = i;
    right.map.resize(b.n);
    for (int i = 0; i < b.n; ++i) right.map[i] = i + a.n;
    return Amalgam{std::move(c), std::move(left), std::move(right)};
}

Amalgam ClassDescriptor::jep(const FinStructure& a, const FinStructure& b) const {
    if (a.tag != tag || b.tag != tag)
        throw DomainError("jep: structure class mismatch");
    switch (tag) {
        case ClassTag::OrderedRationalMetric: {
            Rat d0 = 1;
            if (a.n > 0 && a.diameter() > d0) d0 = a.diameter();
            if (b.n > 0 && b.diameter() > d0) d0 = b.diameter();
            return jep_ordered_metric(a, b, d0);
        }
        case ClassTag::LinearOrder: {
            FinStructure c;
            c.tag = tag;
            c.n = a.n + b.n;
            c.rel = a.rel;
            for (const auto& [x, y] : b.rel) c.rel.emplace_back(x + a.n, y + a.n);
            for (int x = 0; x < a.n; ++x)
                for (int y = 0; y < b.n; ++y) c.rel.emplace_back(x, y + a.n);
            c.normalize();
            Embedding left, right;
            left.map.resize(a.n);
            for (int i = 0; i < a.n; ++i) left.map[i] = i;
            right.map.resize(b.n);
            for (int i = 0; i < b.n; ++i) right.map[i] = i + a.n;
            return Amalgam{std::move(c), std::move(left), std::move(right)};
        }
        case ClassTag::Graph:
        case ClassTag::EqPairs: {
            // disjoint union
            FinStructure c;
            c.tag = tag;
            c.n = a.n + b.n;
            c.rel = a.rel;
            for (const auto& [x, y] : b.rel) c.rel.emplace_back(x + a.n, y + a.n);
            c.normalize();
            Embedding left, right;
            left.map.resize(a.n);
            for (int i = 0; i < a.n; ++i) left.map[i] = i;
            right.map.resize(b.n);
            for (int i = 0; i < b.n; ++i) right.map[i] = i + a.n;
            return Amalgam{std::move(c), std::move(left), std::move(right)};
        }
    }
    throw DomainError("jep: unknown class");
}

FinStructure ClassDescriptor::truncation(int size, int richness,
                                         std::uint64_t seed) const {
    return generic_truncation(*this, size, richness, seed);
}

std::vector<int> ClassDescriptor::acl(const FinStructure& m,
                                      const std::vector<int>& a) const {
    return simlab::acl(m, a);
}

namespace {

void subsets_up_to(int n, int max_size, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (!cur.empty()) out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_size) return;
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

FinStructure grow_graph_truncation(int size, int richness, std::uint64_t seed) {
    SplitRng rng(seed);
    FinStructure s = FinStructure::graph(1, {});
    while (s.n < size) {
        std::vector<std::vector<int>> subsets;
        subsets_up_to(s.n, richness, subsets);
        // unrealized one-point extension types: (subset U, adjacency pattern)
        // such that no vertex outside U matches the pattern over U
        struct Type {
            std::vector<int> u;
            unsigned pattern;
        };
        std::vector<Type> open;
        for (const auto& u : subsets) {
            unsigned npat = 1u << u.size();
            for (unsigned pat = 0; pat < npat; ++pat) {
                bool witnessed = false;
                for (int v = 0; v < s.n && !witnessed; ++v) {
                    if (std::find(u.begin(), u.end(), v) != u.end()) continue;
                    bool match = true;
                    for (std::size_t k = 0; k < u.size(); ++k)
                        if (s.adjacent(v, u[k]) != (((pat >> k) & 1u) != 0)) {
                            match = false;
                            break;
                        }
                    witnessed = match;
                }
                if (!witnessed) open.push_back(Type{u, pat});
            }
        }
        std::vector<int> neigh;
        if (!open.empty()) {
            const Type& t = open[rng.next_below(open.size())];
            std::vector<char> fixed(s.n, 0);
            for (std::size_t k = 0; k < t.u.size(); ++k) {
                fixed[t.u[k]] = 1;
                if ((t.pattern >> k) & 1u) neigh.push_back(t.u[k]);
            }
            for (int v = 0; v < s.n; ++v)
                if (!fixed[v] && rng.next_bool()) neigh.push_back(v);
        } else {
            for (int v = 0; v < s.n; ++v)
                if (rng.next_bool()) neigh.push_back(v);
        }
        s = graph_add_vertex(s, neigh);
    }
    return s;
}

FinStructure grow_eqpairs_truncation(int size, int richness, std::uint64_t seed) {
    SplitRng rng(seed);
    FinStructure s = FinStructure::eq_pairs(1, {});
    (void)richness;
    while (s.n < size) {
        // open types: "partner of u" for each unpartnered u, plus "fresh
        // class" when every existing class is full
        std::vector<int> open;  // unpartnered points
        for (int v = 0; v < s.n; ++v)
            if (s.partner(v) < 0) open.push_back(v);
        bool fresh_witnessed = !open.empty();  // a singleton class witnesses it
        std::vector<int> choices = open;
        if (!fresh_witnessed) choices.push_back(-1);
        int pick = choices.empty() ? -1
                                   : choices[rng.next_below(choices.size())];
        s = eqpairs_add_vertex(s, pick);
    }
    return s;
}

FinStructure grow_metric_truncation(int size, std::uint64_t seed) {
    SplitRng rng(seed);
    std::vector<std::vector<Rat>> d0(1, std::vector<Rat>(1, Rat(0)));
    FinStructure s = FinStructure::ordered_metric(1, d0);
    const Rat radii[] = {make_rat(1, 2), Rat(1), make_rat(3, 2), Rat(2)};
    while (s.n < size) {
        int anchor = static_cast<int>(rng.next_below(s.n));
        Rat r = radii[rng.next_below(4)];
        // shortest-path completion through the anchor keeps the metric exact
        std::vector<Rat> dist(s.n);
        for (int y = 0; y < s.n; ++y)
            dist[y] = (y == anchor) ? r : r + s.dist[anchor][y];
        int rank = static_cast<int>(rng.next_below(s.n + 1));
        s = metric_add_point(s, rank, dist);
    }
    return s;
}

}  // namespace

FinStructure generic_truncation(const ClassDescriptor& cls, int size,
                                int richness, std::uint64_t seed) {
    if (size < 1) throw DomainError("generic_truncation: size must be >= 1");
    FinStructure out;
    switch (cls.tag) {
        case ClassTag::Graph:
            out = grow_graph_truncation(size, richness, seed);
            break;
        case ClassTag::LinearOrder:
            // the k-element order is unique up to isomorphism
            out = FinStructure::linear_order(size);
            break;
        case ClassTag::OrderedRationalMetric:
            out = grow_metric_truncation(size, seed);
            break;
        case ClassTag::EqPairs:
            out = grow_eqpairs_truncation(size, richness, seed);
            break;
    }
    if (!is_valid(out))
        throw DomainError("generic_truncation: growth produced an invalid structure");
    return out;
}

std::vector<int> acl(const FinStructure& m, const std::vector<int>& a) {
    std::vector<int> out = a;
    for (int p : a)
        if (p < 0 || p >= m.n) throw DomainError("acl: index out of range");
    if (m.tag == ClassTag::EqPairs) {
        for (int p : a) {
            int q = m.partner(p);
            if (q >= 0) out.push_back(q);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Perm identity_perm(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

Perm compose(const Perm& p, const Perm& q) {
    Perm r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
    return r;
}

Perm inverse(const Perm& p) {
    Perm r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
    return r;
}

bool is_automorphism(const FinStructure& s, const Perm& p) {
    return static_cast<int>(p.size()) == s.n && is_embedding(s, s, p);
}

std::vector<Perm> all_automorphisms(const FinStructure& s) {
    auto embs = enumerate_embeddings(s, s);
    std::vector<Perm> out;
    out.reserve(embs.size());
    for (auto& e : embs) out.push_back(std::move(e.map));
    return out;
}

FinStructure graph_add_vertex(const FinStructure& s,
                              const std::vector<int>& neighbors) {
    FinStructure out = s;
    out.n = s.n + 1;
    for (int v : neighbors) out.rel.emplace_back(v, s.n);
    out.normalize();
    return out;
}

FinStructure order_add_point(const FinStructure& s, int rank) {
    if (rank < 0 || rank > s.n) throw DomainError("order_add_point: bad rank");
    FinStructure out = s;
    out.n = s.n + 1;
    std::vector<int> ranks = s.order_ranks();
    for (int v = 0; v < s.n; ++v) {
        if (ranks[v] < rank)
            out.rel.emplace_back(v, s.n);
        else
            out.rel.emplace_back(s.n, v);
    }
    out.normalize();
    return out;
}

FinStructure metric_add_point(const FinStructure& s, int rank,
                              const std::vector<Rat>& dist_to_existing) {
    FinStructure out = order_add_point(s, rank);
    out.dist.assign(out.n, std::vector<Rat>(out.n, Rat(0)));
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) out.dist[i][j] = s.dist[i][j];
    for (int i = 0; i < s.n; ++i) {
        out.dist[i][s.n] = dist_to_existing[i];
        out.dist[s.n][i] = dist_to_existing[i];
    }
    return out;
}

FinStructure eqpairs_add_vertex(const FinStructure& s, int partner) {
    FinStructure out = s;
    out.n = s.n + 1;
    if (partner >= 0) {
        if (s.partner(partner) >= 0)
            throw DomainError("eqpairs_add_vertex: partner already paired");
        out.rel.emplace_back(partner, s.n);
    }
    out.normalize();
    return out;
}

}  // namespace simlab

#include "simlab/words.hpp"

#include <algorithm>

namespace simlab {

bool is_reduced(const std::vector<Letter>& letters) {
    for (std::size_t i = 0; i + 1 < letters.size(); ++i)
        if (letters[i + 1] == inverse(letters[i])) return false;
    return true;
}

namespace {

void check_arity(const std::vector<Letter>& seq, int arity) {
    if (arity < 1) throw DomainError("word arity must be >= 1");
    for (const Letter& l : seq) {
        if (l.generator < 1 || l.generator > arity)
            throw DomainError("generator out of range for arity");
        if (l.sign != 1 && l.sign != -1)
            throw DomainError("letter sign must be +1 or -1");
    }
}

}  // namespace

ReducedWord reduce(const std::vector<Letter>& seq, int arity) {
    check_arity(seq, arity);
    ReducedWord w;
    w.arity = arity;
    for (const Letter& l : seq) {
        if (!w.letters.empty() && w.letters.back() == inverse(l))
            w.letters.pop_back();
        else
            w.letters.push_back(l);
    }
    return w;
}

ReducedWord concat(const ReducedWord& u, const ReducedWord& v) {
    if (u.arity != v.arity) throw DomainError("concat: arity mismatch");
    std::vector<Letter> seq = u.letters;
    seq.insert(seq.end(), v.letters.begin(), v.letters.end());
    return reduce(seq, u.arity);
}

ReducedWord invert(const ReducedWord& w) {
    ReducedWord out;
    out.arity = w.arity;
    out.letters.assign(w.letters.rbegin(), w.letters.rend());
    for (Letter& l : out.letters) l = inverse(l);
    return out;
}

std::vector<ReducedWord> enumerate_words(int arity, int max_len) {
    if (arity < 1) throw DomainError("enumerate_words: arity must be >= 1");
    std::vector<Letter> alphabet;
    for (int g = 1; g <= arity; ++g) {
        alphabet.push_back(Letter{g, 1});
        alphabet.push_back(Letter{g, -1});
    }
    std::sort(alphabet.begin(), alphabet.end(),
              [](Letter a, Letter b) { return letter_key(a) < letter_key(b); });

    std::vector<ReducedWord> out;
    ReducedWord empty;
    empty.arity = arity;
    out.push_back(empty);
    std::size_t level_begin = 0, level_end = out.size();
    for (int len = 1; len <= max_len; ++len) {
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (const Letter& l : alphabet) {
                const ReducedWord& w = out[i];
                if (!w.letters.empty() && w.letters.back() == inverse(l)) continue;
                ReducedWord next = w;
                next.letters.push_back(l);
                out.push_back(std::move(next));
            }
        }
        level_begin = level_end;
        level_end = out.size();
    }
    return out;
}

ReducedWord surgery(const ReducedWord& u, const ReducedWord& x) {
    if (u.arity != x.arity) throw DomainError("surgery: arity mismatch");
    if (u.arity < 2) throw DomainError("surgery: arity must be >= 2");
    if (u.empty()) throw DomainError("surgery: u must be nonempty");
    if (!is_reduced(u.letters) || !is_reduced(x.letters))
        throw DomainError("surgery: inputs must be reduced");

    const Letter lead = u.letters.front();
    const Letter bad = inverse(lead);  // output may not end in this
    const int t = (lead.generator == 1) ? 2 : 1;
    const ReducedWord u_inv = invert(u);
    const ReducedWord st = reduce({Letter{t, 1}}, u.arity);
    const ReducedWord st_inv = invert(st);

    // candidates: u^-1 x, u^-1 s_t^-1 x s_t, u^-1 s_t x s_t^-1
    const ReducedWord variants[3] = {x, concat(concat(st_inv, x), st),
                                     concat(concat(st, x), st_inv)};
    for (const ReducedWord& xv : variants) {
        ReducedWord v = concat(u_inv, xv);
        if (!v.letters.empty() && v.letters.back() == bad) continue;
        ReducedWord out;
        out.arity = u.arity;
        out.letters = v.letters;
        out.letters.insert(out.letters.end(), u.letters.begin(), u.letters.end());
        if (!is_reduced(out.letters))
            throw std::logic_error("surgery: output not reduced");
        return out;
    }
    throw DomainError("surgery: no conjugation variant avoids the leading inverse");
}

std::vector<ReducedWord> build_convergent_words(
    const std::vector<ReducedWord>& u_seq, const std::vector<ReducedWord>& x_seq) {
    std::vector<ReducedWord> out;
    std::size_t xi = 0;
    for (const ReducedWord& u : u_seq) {
        if (u.empty()) {
            if (xi >= x_seq.size())
                throw DomainError("build_convergent_words: x_seq exhausted");
            out.push_back(x_seq[xi++]);
            continue;
        }
        bool done = false;
        while (!done) {
            if (xi >= x_seq.size())
                throw DomainError("build_convergent_words: x_seq exhausted");
            try {
                out.push_back(surgery(u, x_seq[xi++]));
                done = true;
            } catch (const DomainError&) {
                // incompatible x (reduces away); scan forward
            }
        }
    }
    return out;
}

Perm evaluate(const ReducedWord& w, const std::vector<Perm>& autos,
              const FinStructure& ambient) {
    if (static_cast<int>(autos.size()) < w.arity)
        throw DomainError("evaluate: tuple shorter than word arity");
    for (const Perm& p : autos)
        if (!is_automorphism(ambient, p))
            throw DomainError("evaluate: tuple entry is not an automorphism");
    Perm acc = identity_perm(ambient.n);
    for (const Letter& l : w.letters) {
        const Perm& base = autos[l.generator - 1];
        acc = compose(acc, l.sign > 0 ? base : inverse(base));
    }
    return acc;
}

PartialEval partial_evaluate(const ReducedWord& w,
                             const std::vector<PartialAutomorphism>& maps,
                             int a) {
    if (static_cast<int>(maps.size()) < w.arity)
        throw DomainError("partial_evaluate: tuple shorter than word arity");
    if (maps.empty()) {
        PartialEval r;
        r.defined = true;
        r.value = a;
        return r;
    }
    const int n_points = maps[0].universe_size();
    if (a < 0 || a >= n_points)
        throw DomainError("partial_evaluate: point outside ambient universe");

    const int m = w.length();
    int cur = a;
    for (int i = m; i >= 1; --i) {
        const Letter& l = w.letters[i - 1];
        const PartialAutomorphism& q = maps[l.generator - 1];
        int next = (l.sign > 0) ? q.image(cur) : q.preimage(cur);
        if (next < 0) {
            PartialEval r;
            r.defined = false;
            r.undefined_at = i;
            r.tail_value = cur;
            return r;
        }
        cur = next;
    }
    PartialEval r;
    r.defined = true;
    r.value = cur;
    return r;
}

PartialAutomorphism word_map(const ReducedWord& w,
                             const std::vector<PartialAutomorphism>& maps) {
    if (maps.empty()) throw DomainError("word_map: empty tuple");
    if (static_cast<int>(maps.size()) < w.arity)
        throw DomainError("word_map: tuple shorter than word arity");
    PartialAutomorphism acc =
        PartialAutomorphism::total(maps[0].ambient_ptr(),
                                   identity_perm(maps[0].universe_size()));
    for (const Letter& l : w.letters) {
        const PartialAutomorphism& q = maps[l.generator - 1];
        acc = compose(acc, l.sign > 0 ? q : q.inverted());
    }
    return acc;
}

std::vector<Perm> diagonal_conjugate(const Perm& g, const std::vector<Perm>& tuple) {
    std::vector<Perm> out;
    out.reserve(tuple.size());
    const Perm g_inv = inverse(g);
    for (const Perm& h : tuple) out.push_back(compose(compose(g, h), g_inv));
    return out;
}

}  // namespace simlab

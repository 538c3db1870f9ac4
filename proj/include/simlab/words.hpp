#pragma once

#include <string>
#include <vector>

#include "simlab/fin_structure.hpp"
#include "simlab/partial_auto.hpp"

namespace simlab {

// One occurrence of a generator s_g or its inverse.
struct Letter {
    int generator = 1;  // 1..n
    int sign = 1;       // +1 or -1
    bool operator==(const Letter&) const = default;
};

inline Letter inverse(Letter l) { return Letter{l.generator, -l.sign}; }

// Shortlex letter order: s1 < s1^-1 < s2 < s2^-1 < ...
inline int letter_key(Letter l) {
    return 2 * (l.generator - 1) + (l.sign < 0 ? 1 : 0);
}

// A freely reduced word over s_1..s_n: no letter immediately followed by its
// inverse. Construct via reduce/concat/invert, which maintain the invariant.
struct ReducedWord {
    std::vector<Letter> letters;
    int arity = 1;

    bool operator==(const ReducedWord&) const = default;
    bool empty() const { return letters.empty(); }
    int length() const { return static_cast<int>(letters.size()); }
};

bool is_reduced(const std::vector<Letter>& letters);

// The unique freely reduced form (single stack pass).
ReducedWord reduce(const std::vector<Letter>& seq, int arity);

ReducedWord concat(const ReducedWord& u, const ReducedWord& v);
ReducedWord invert(const ReducedWord& w);

// All reduced words of length <= max_len in shortlex order.
std::vector<ReducedWord> enumerate_words(int arity, int max_len);

// Word surgery: returns a reduced word v*u equal (as a group element) to
// u^-1 x' u, where x' is x or a conjugate of x by the fixed auxiliary
// generator s_t (smallest index differing from u's leading generator).
// Requires arity >= 2 and u nonempty; fails when no conjugation variant
// yields a reduced result with suffix u (this happens exactly for x = e).
ReducedWord surgery(const ReducedWord& u, const ReducedWord& x);

// For each u_k produces w_k = v_k * u_k via surgery, consuming x_seq in
// order and scanning past incompatible entries. Throws when x_seq runs out.
std::vector<ReducedWord> build_convergent_words(
    const std::vector<ReducedWord>& u_seq, const std::vector<ReducedWord>& x_seq);

// ---- evaluation -----------------------------------------------------------
//
// A word z_1...z_m acts as z_1(z_2(...z_m(a)...)): the rightmost letter is
// applied first.

// Substitutes autos[i-1] for s_i and composes. Tuple entries must be
// automorphisms of the given structure.
Perm evaluate(const ReducedWord& w, const std::vector<Perm>& autos,
              const FinStructure& ambient);

struct PartialEval {
    bool defined = false;
    int value = -1;         // when defined
    int undefined_at = 0;   // i0: largest i with z_i0...z_m(a) undefined
    int tail_value = -1;    // z_{i0+1}...z_m(a), the point that fell off
};

// Walks the action of w at a under a tuple of partial maps.
PartialEval partial_evaluate(const ReducedWord& w,
                             const std::vector<PartialAutomorphism>& maps,
                             int a);

// The whole partial map of w (composition of the letter maps).
PartialAutomorphism word_map(const ReducedWord& w,
                             const std::vector<PartialAutomorphism>& maps);

// (g h_1 g^-1, ..., g h_n g^-1)
std::vector<Perm> diagonal_conjugate(const Perm& g, const std::vector<Perm>& tuple);

}  // namespace simlab

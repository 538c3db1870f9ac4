#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "simlab/fin_structure.hpp"
#include "simlab/partial_auto.hpp"
#include "simlab/rational.hpp"
#include "simlab/trichotomy.hpp"
#include "simlab/words.hpp"

namespace simlab {

// ---- the compatible metric on (possibly truncated) automorphisms ----------
//
// d(g,h) = 2^-m where m is the least point index at which g and h (or their
// inverses) disagree; 0 when they are identical. For partial maps a
// definedness mismatch counts as disagreement, so d restricts to the usual
// two-sided metric on total maps and stays an (ultra)metric on partial ones.

Rat auto_metric(const Perm& g, const Perm& h);
Rat partial_metric(const PartialAutomorphism& g, const PartialAutomorphism& h);

// ---- step functions --------------------------------------------------------
//
// An element of L0 over ([0,1], Lebesgue) with finitely many pieces laid out
// left to right; only the weights of the layout matter, points of [0,1] are
// never represented. Canonical form merges adjacent equal-valued pieces.

template <typename V>
struct StepFunction {
    std::vector<std::pair<Rat, V>> pieces;
    bool operator==(const StepFunction&) const = default;
};

template <typename V>
StepFunction<V> canonicalize(const StepFunction<V>& f) {
    StepFunction<V> out;
    for (const auto& [w, v] : f.pieces) {
        if (w < 0) throw DomainError("step function: negative weight");
        if (w == 0) continue;
        if (!out.pieces.empty() && out.pieces.back().second == v)
            out.pieces.back().first += w;
        else
            out.pieces.emplace_back(w, v);
    }
    Rat total = 0;
    for (const auto& [w, v] : out.pieces) total += w;
    if (total != 1) throw DomainError("step function: weights must sum to 1");
    return out;
}

template <typename V>
StepFunction<V> make_step(std::vector<std::pair<Rat, V>> pieces) {
    StepFunction<V> f;
    f.pieces = std::move(pieces);
    return canonicalize(f);
}

template <typename V>
StepFunction<V> constant_step(V value) {
    return make_step<V>({{Rat(1), std::move(value)}});
}

// Coarsest common refinement of two piece layouts, with the aligned values.
template <typename A, typename B>
struct Refined {
    std::vector<Rat> weights;
    std::vector<A> left;
    std::vector<B> right;
};

template <typename A, typename B>
Refined<A, B> refine(const StepFunction<A>& f, const StepFunction<B>& g) {
    Refined<A, B> out;
    std::size_t i = 0, j = 0;
    Rat fi = f.pieces.empty() ? Rat(0) : f.pieces[0].first;
    Rat gj = g.pieces.empty() ? Rat(0) : g.pieces[0].first;
    while (i < f.pieces.size() && j < g.pieces.size()) {
        Rat w = std::min(fi, gj);
        if (w > 0) {
            out.weights.push_back(w);
            out.left.push_back(f.pieces[i].second);
            out.right.push_back(g.pieces[j].second);
        }
        fi -= w;
        gj -= w;
        if (fi == 0 && ++i < f.pieces.size()) fi = f.pieces[i].first;
        if (gj == 0 && ++j < g.pieces.size()) gj = g.pieces[j].first;
    }
    return out;
}

// ---- metric and neighborhoods ----------------------------------------------
//
// rho(f,g) = inf { eps > 0 : mu(d > eps) < eps }. The tail-mass function
// T(eps) = mu(d > eps) is a right-continuous non-increasing step function, so
// the infimum is min { r : T(r) <= r } taken over the candidate set
// {0} + {d-values} + {tail sums}.

template <typename V, typename Dist>
Rat rho_with(const StepFunction<V>& f, const StepFunction<V>& g, Dist d) {
    auto r = refine(f, g);
    std::vector<std::pair<Rat, Rat>> dw;  // (distance, weight)
    for (std::size_t i = 0; i < r.weights.size(); ++i)
        dw.emplace_back(d(r.left[i], r.right[i]), r.weights[i]);
    std::sort(dw.begin(), dw.end());

    auto tail_above = [&](const Rat& eps) {
        Rat t = 0;
        for (const auto& [dist, w] : dw)
            if (dist > eps) t += w;
        return t;
    };

    std::vector<Rat> candidates{Rat(0)};
    for (const auto& [dist, w] : dw) {
        candidates.push_back(dist);
        candidates.push_back(tail_above(dist));
    }
    candidates.push_back(tail_above(Rat(0)));
    std::sort(candidates.begin(), candidates.end());

    for (const Rat& rv : candidates)
        if (rv >= 0 && tail_above(rv) <= rv) return rv;
    return Rat(1);  // unreachable: T(1) = 0 <= 1
}

Rat rho(const StepFunction<Perm>& f, const StepFunction<Perm>& g);
Rat rho(const StepFunction<PartialAutomorphism>& f,
        const StepFunction<PartialAutomorphism>& g);

// [h,delta,eps]-membership: mu(d(g,h) < delta) > 1 - eps, evaluated exactly.
template <typename V, typename Dist>
bool in_neighborhood_with(const StepFunction<V>& g, const StepFunction<V>& h,
                          const Rat& delta, const Rat& eps, Dist d) {
    if (delta <= 0 || eps <= 0)
        throw DomainError("in_neighborhood: delta and eps must be positive");
    auto r = refine(g, h);
    Rat close = 0;
    for (std::size_t i = 0; i < r.weights.size(); ++i)
        if (d(r.left[i], r.right[i]) < delta) close += r.weights[i];
    return close > 1 - eps;
}

bool in_neighborhood(const StepFunction<Perm>& g, const StepFunction<Perm>& h,
                     const Rat& delta, const Rat& eps);
bool in_neighborhood(const StepFunction<PartialAutomorphism>& g,
                     const StepFunction<PartialAutomorphism>& h,
                     const Rat& delta, const Rat& eps);

// ---- pointwise group structure ---------------------------------------------

enum class PointwiseOp { Multiply, InvertFirstThenMultiply };

// Multiply: x -> f(x) g(x); InvertFirstThenMultiply: x -> f(x)^-1 g(x).
StepFunction<Perm> pointwise_op(const StepFunction<Perm>& f,
                                const StepFunction<Perm>& g, PointwiseOp op);
StepFunction<Perm> pointwise_inverse(const StepFunction<Perm>& f);

// The identification L0(G)^n = L0(G^n) and its inverse.
StepFunction<std::vector<Perm>> product_identify(
    const std::vector<StepFunction<Perm>>& tuple);
std::vector<StepFunction<Perm>> product_split(
    const StepFunction<std::vector<Perm>>& f, int arity);

// Pointwise word evaluation of a tuple of partial-map valued step functions.
StepFunction<PartialAutomorphism> word_evaluate_pointwise(
    const ReducedWord& w,
    const std::vector<StepFunction<PartialAutomorphism>>& tuple);

// ---- orbits, perturbation, closure -----------------------------------------

// A step conjugator phi with phi f phi^-1 = g pointwise, found piece by piece
// by brute force over Aut(ambient); nullopt when some refined piece's values
// are not conjugate.
std::optional<StepFunction<Perm>> orbit_member(const StepFunction<Perm>& g,
                                               const StepFunction<Perm>& f,
                                               const FinStructure& ambient);

// The nowhere-density perturbation: replaces a trailing portion of weight
// eps/2 by the value p (not in B), staying inside [f, eps] while leaving
// L0(B).
StepFunction<Perm> perturb_off_closed(const StepFunction<Perm>& f,
                                      const std::vector<Perm>& value_set_b,
                                      const Perm& p, const Rat& eps);

// A single word undefined at a on pieces of total weight > threshold; scans
// shortlex words up to scan_bound.
std::pair<ReducedWord, std::vector<int>> common_undefined_word(
    const StepFunction<std::vector<PartialAutomorphism>>& pieces, int a,
    const Rat& threshold, int scan_bound);

struct L0NonDiscreteness {
    std::vector<StepFunction<PartialAutomorphism>> functions;  // n-tuple
    ReducedWord word;
    std::shared_ptr<const FinStructure> ambient;
    Rat rho_value;  // rho(w(f), e), exact
};

// Builds step functions from a joint embedding of the systems plus a word
// whose pointwise evaluation provably fixes the whole stacked universe while
// moving a grown point, giving 0 < rho(w(f), e) < eps exactly.
L0NonDiscreteness l0_nondiscrete_from_jep(const ClassDescriptor& cls,
                                          const std::vector<System>& systems,
                                          const Rat& eps, int truncation_budget);

// The pointwise witness extracted from an L0 witness: index (in the common
// refinement) of a piece on which every listed word acts within d-distance
// cutoff of the identity.
int project_nondiscreteness(
    const std::vector<StepFunction<PartialAutomorphism>>& functions,
    const std::vector<ReducedWord>& words, const Rat& cutoff);

// Closure of {f} under pointwise multiplication and inversion: the cyclic
// group generated by f. nullopt (overflow) when the size exceeds the bound.
std::optional<std::vector<StepFunction<Perm>>> l0_precompact_closure(
    const StepFunction<Perm>& f, int bound);

}  // namespace simlab

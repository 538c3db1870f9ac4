#include "simlab/l0.hpp"

#include <algorithm>

#include "simlab/extension.hpp"

namespace simlab {

Rat auto_metric(const Perm& g, const Perm& h) {
    if (g.size() != h.size()) throw DomainError("auto_metric: size mismatch");
    const Perm gi = inverse(g), hi = inverse(h);
    for (std::size_t m = 0; m < g.size(); ++m)
        if (g[m] != h[m] || gi[m] != hi[m]) return pow2_inv(static_cast<int>(m));
    return Rat(0);
}

Rat partial_metric(const PartialAutomorphism& g, const PartialAutomorphism& h) {
    if (g.universe_size() != h.universe_size())
        throw DomainError("partial_metric: ambient size mismatch");
    for (int m = 0; m < g.universe_size(); ++m) {
        // -1 encodes "undefined": a definedness mismatch is a difference
        if (g.image(m) != h.image(m) || g.preimage(m) != h.preimage(m))
            return pow2_inv(m);
    }
    return Rat(0);
}

Rat rho(const StepFunction<Perm>& f, const StepFunction<Perm>& g) {
    return rho_with(f, g, auto_metric);
}

Rat rho(const StepFunction<PartialAutomorphism>& f,
        const StepFunction<PartialAutomorphism>& g) {
    return rho_with(f, g, partial_metric);
}

bool in_neighborhood(const StepFunction<Perm>& g, const StepFunction<Perm>& h,
                     const Rat& delta, const Rat& eps) {
    return in_neighborhood_with(g, h, delta, eps, auto_metric);
}

bool in_neighborhood(const StepFunction<PartialAutomorphism>& g,
                     const StepFunction<PartialAutomorphism>& h,
                     const Rat& delta, const Rat& eps) {
    return in_neighborhood_with(g, h, delta, eps, partial_metric);
}

StepFunction<Perm> pointwise_op(const StepFunction<Perm>& f,
                                const StepFunction<Perm>& g, PointwiseOp op) {
    auto r = refine(f, g);
    StepFunction<Perm> out;
    for (std::size_t i = 0; i < r.weights.size(); ++i) {
        Perm value = (op == PointwiseOp::Multiply)
                         ? compose(r.left[i], r.right[i])
                         : compose(inverse(r.left[i]), r.right[i]);
        out.pieces.emplace_back(r.weights[i], std::move(value));
    }
    return canonicalize(out);
}

StepFunction<Perm> pointwise_inverse(const StepFunction<Perm>& f) {
    StepFunction<Perm> out;
    for (const auto& [w, v] : f.pieces) out.pieces.emplace_back(w, inverse(v));
    return canonicalize(out);
}

StepFunction<std::vector<Perm>> product_identify(
    const std::vector<StepFunction<Perm>>& tuple) {
    if (tuple.empty()) throw DomainError("product_identify: empty tuple");
    StepFunction<std::vector<Perm>> acc;
    for (const auto& [w, v] : tuple[0].pieces)
        acc.pieces.emplace_back(w, std::vector<Perm>{v});
    for (std::size_t j = 1; j < tuple.size(); ++j) {
        auto r = refine(acc, tuple[j]);
        StepFunction<std::vector<Perm>> next;
        for (std::size_t i = 0; i < r.weights.size(); ++i) {
            std::vector<Perm> vs = r.left[i];
            vs.push_back(r.right[i]);
            next.pieces.emplace_back(r.weights[i], std::move(vs));
        }
        acc = std::move(next);
    }
    return canonicalize(acc);
}

std::vector<StepFunction<Perm>> product_split(
    const StepFunction<std::vector<Perm>>& f, int arity) {
    std::vector<StepFunction<Perm>> out(arity);
    for (const auto& [w, vs] : f.pieces) {
        if (static_cast<int>(vs.size()) != arity)
            throw DomainError("product_split: arity mismatch");
        for (int j = 0; j < arity; ++j) out[j].pieces.emplace_back(w, vs[j]);
    }
    for (auto& g : out) g = canonicalize(g);
    return out;
}

StepFunction<PartialAutomorphism> word_evaluate_pointwise(
    const ReducedWord& w,
    const std::vector<StepFunction<PartialAutomorphism>>& tuple) {
    if (tuple.empty()) throw DomainError("word_evaluate_pointwise: empty tuple");
    // align the n layouts, then evaluate the word on each aligned tuple
    StepFunction<std::vector<PartialAutomorphism>> acc;
    for (const auto& [wt, v] : tuple[0].pieces)
        acc.pieces.emplace_back(wt, std::vector<PartialAutomorphism>{v});
    for (std::size_t j = 1; j < tuple.size(); ++j) {
        auto r = refine(acc, tuple[j]);
        StepFunction<std::vector<PartialAutomorphism>> next;
        for (std::size_t i = 0; i < r.weights.size(); ++i) {
            std::vector<PartialAutomorphism> vs = r.left[i];
            vs.push_back(r.right[i]);
            next.pieces.emplace_back(r.weights[i], std::move(vs));
        }
        acc = std::move(next);
    }
    StepFunction<PartialAutomorphism> out;
    for (const auto& [wt, vs] : acc.pieces)
        out.pieces.emplace_back(wt, word_map(w, vs));
    return canonicalize(out);
}

std::optional<StepFunction<Perm>> orbit_member(const StepFunction<Perm>& g,
                                               const StepFunction<Perm>& f,
                                               const FinStructure& ambient) {
    auto r = refine(f, g);
    const std::vector<Perm> auts = all_automorphisms(ambient);
    StepFunction<Perm> phi;
    for (std::size_t i = 0; i < r.weights.size(); ++i) {
        const Perm& fv = r.left[i];
        const Perm& gv = r.right[i];
        const Perm* found = nullptr;
        for (const Perm& c : auts)
            if (compose(compose(c, fv), inverse(c)) == gv) {
                found = &c;
                break;
            }
        if (!found) return std::nullopt;
        phi.pieces.emplace_back(r.weights[i], *found);
    }
    StepFunction<Perm> out = canonicalize(phi);
    // conjugation re-verified exactly on the refined partition
    StepFunction<Perm> check =
        pointwise_op(pointwise_op(out, f, PointwiseOp::Multiply),
                     pointwise_inverse(out), PointwiseOp::Multiply);
    if (!(check == canonicalize(g)))
        throw std::logic_error("orbit_member: conjugator verification failed");
    return out;
}

StepFunction<Perm> perturb_off_closed(const StepFunction<Perm>& f,
                                      const std::vector<Perm>& value_set_b,
                                      const Perm& p, const Rat& eps) {
    if (eps <= 0 || eps >= 1)
        throw DomainError("perturb_off_closed: need 0 < eps < 1");
    auto in_b = [&](const Perm& v) {
        return std::find(value_set_b.begin(), value_set_b.end(), v) !=
               value_set_b.end();
    };
    if (in_b(p)) throw DomainError("perturb_off_closed: p must lie outside B");
    for (const auto& [w, v] : f.pieces)
        if (!in_b(v)) throw DomainError("perturb_off_closed: f has a value outside B");

    const Rat a = eps / 2;  // weight to replace, strictly inside (0, eps)
    StepFunction<Perm> out;
    Rat kept = 1 - a;
    for (const auto& [w, v] : f.pieces) {
        if (kept == 0) break;
        Rat take = std::min(w, kept);
        out.pieces.emplace_back(take, v);
        kept -= take;
    }
    out.pieces.emplace_back(a, p);
    out = canonicalize(out);

    auto r = refine(out, f);
    Rat changed = 0;
    for (std::size_t i = 0; i < r.weights.size(); ++i)
        if (!(r.left[i] == r.right[i])) changed += r.weights[i];
    if (!(changed > 0 && changed < eps) || !in_neighborhood(out, f, eps, eps))
        throw std::logic_error("perturb_off_closed: perturbation check failed");
    return out;
}

std::pair<ReducedWord, std::vector<int>> common_undefined_word(
    const StepFunction<std::vector<PartialAutomorphism>>& pieces, int a,
    const Rat& threshold, int scan_bound) {
    if (pieces.pieces.empty())
        throw DomainError("common_undefined_word: no pieces");
    const int n = static_cast<int>(pieces.pieces[0].second.size());
    for (const ReducedWord& w : enumerate_words(n, scan_bound)) {
        if (w.empty()) continue;
        Rat weight = 0;
        std::vector<int> hit;
        for (std::size_t i = 0; i < pieces.pieces.size(); ++i) {
            const auto& [wt, tuple] = pieces.pieces[i];
            if (!partial_evaluate(w, tuple, a).defined) {
                weight += wt;
                hit.push_back(static_cast<int>(i));
            }
        }
        if (weight > threshold) return {w, hit};
    }
    throw DomainError(
        "common_undefined_word: no single word reaches the threshold within "
        "the scan bound");
}

L0NonDiscreteness l0_nondiscrete_from_jep(const ClassDescriptor& cls,
                                          const std::vector<System>& systems,
                                          const Rat& eps,
                                          int truncation_budget) {
    if (eps <= 0) throw DomainError("l0_nondiscrete_from_jep: eps must be positive");
    SystemJepWitness jw = diagonal_conjugacy_jep(cls, systems);
    const int base_size = jw.structure->n;
    const std::size_t arity = jw.maps.size();
    if (arity == 0) throw DomainError("l0_nondiscrete_from_jep: empty tuples");
    if (pow2_inv(base_size) >= eps)
        throw DomainError(
            "l0_nondiscrete_from_jep: joint system too small for eps (the "
            "evaluation can only be pinned on the stacked universe)");

    const int scan_bound = 6;
    for (const ReducedWord& w : enumerate_words(static_cast<int>(arity), scan_bound)) {
        if (w.empty()) continue;
        std::vector<PartialAutomorphism> cur = jw.maps;
        bool ok = true;
        for (int t = 0; t < base_size && ok; ++t) {
            int budget_left =
                truncation_budget - (cur[0].universe_size() - base_size);
            auto fixed = extend_to_fix(cur, t, w, cls, std::max(0, budget_left));
            if (!fixed)
                ok = false;
            else
                cur = std::move(*fixed);
        }
        if (!ok) continue;

        // a certified moved point (necessarily outside the stacked universe)
        int moved = -1;
        for (int p = 0; p < cur[0].universe_size(); ++p) {
            PartialEval pe = partial_evaluate(w, cur, p);
            if (pe.defined && pe.value != p) {
                moved = p;
                break;
            }
        }
        if (moved < 0) {
            for (int p = base_size; p < cur[0].universe_size() && moved < 0; ++p) {
                if (partial_evaluate(w, cur, p).defined) continue;
                int budget_left =
                    truncation_budget - (cur[0].universe_size() - base_size);
                try {
                    cur = extend_to_avoid(cur, p, w, cls, std::max(0, budget_left));
                    moved = p;
                } catch (const DomainError&) {
                }
            }
        }
        if (moved < 0) continue;

        L0NonDiscreteness out;
        out.word = w;
        out.ambient = cur[0].ambient_ptr();
        const std::size_t k = systems.size();
        for (std::size_t j = 0; j < arity; ++j) {
            StepFunction<PartialAutomorphism> f;
            for (std::size_t i = 0; i < k; ++i)
                f.pieces.emplace_back(Rat(BigInt(1), BigInt(k)), cur[j]);
            out.functions.push_back(canonicalize(f));
        }
        StepFunction<PartialAutomorphism> evaluated =
            word_evaluate_pointwise(w, out.functions);
        StepFunction<PartialAutomorphism> id_const =
            constant_step(PartialAutomorphism::total(
                out.ambient, identity_perm(out.ambient->n)));
        out.rho_value = rho(evaluated, id_const);
        if (!(out.rho_value > 0 && out.rho_value < eps))
            throw std::logic_error(
                "l0_nondiscrete_from_jep: rho bound verification failed");
        return out;
    }
    throw DomainError("l0_nondiscrete_from_jep: no witness within bounds");
}

int project_nondiscreteness(
    const std::vector<StepFunction<PartialAutomorphism>>& functions,
    const std::vector<ReducedWord>& words, const Rat& cutoff) {
    if (functions.empty() || words.empty())
        throw DomainError("project_nondiscreteness: empty input");
    const auto ambient = functions[0].pieces.at(0).second.ambient_ptr();
    StepFunction<PartialAutomorphism> id_const = constant_step(
        PartialAutomorphism::total(ambient, identity_perm(ambient->n)));

    std::vector<StepFunction<PartialAutomorphism>> evals;
    for (const ReducedWord& w : words) {
        StepFunction<PartialAutomorphism> e = word_evaluate_pointwise(w, functions);
        if (!(rho(e, id_const) < cutoff))
            throw DomainError(
                "project_nondiscreteness: a word violates the rho precondition");
        evals.push_back(std::move(e));
    }

    // common refinement of all evaluations, then the first surviving piece
    StepFunction<std::vector<PartialAutomorphism>> acc;
    for (const auto& [wt, v] : evals[0].pieces)
        acc.pieces.emplace_back(wt, std::vector<PartialAutomorphism>{v});
    for (std::size_t j = 1; j < evals.size(); ++j) {
        auto r = refine(acc, evals[j]);
        StepFunction<std::vector<PartialAutomorphism>> next;
        for (std::size_t i = 0; i < r.weights.size(); ++i) {
            std::vector<PartialAutomorphism> vs = r.left[i];
            vs.push_back(r.right[i]);
            next.pieces.emplace_back(r.weights[i], std::move(vs));
        }
        acc = std::move(next);
    }
    const PartialAutomorphism identity =
        PartialAutomorphism::total(ambient, identity_perm(ambient->n));
    for (std::size_t i = 0; i < acc.pieces.size(); ++i) {
        bool good = true;
        for (const auto& v : acc.pieces[i].second)
            if (partial_metric(v, identity) > cutoff) {
                good = false;
                break;
            }
        if (good) return static_cast<int>(i);
    }
    throw DomainError(
        "project_nondiscreteness: no piece survives (cutoff too generous for "
        "the declared words)");
}

std::optional<std::vector<StepFunction<Perm>>> l0_precompact_closure(
    const StepFunction<Perm>& f, int bound) {
    if (f.pieces.empty()) throw DomainError("l0_precompact_closure: no pieces");
    const int n = static_cast<int>(f.pieces[0].second.size());
    const StepFunction<Perm> id_const = constant_step(identity_perm(n));
    std::vector<StepFunction<Perm>> closure{id_const};
    StepFunction<Perm> cur = canonicalize(f);
    while (!(cur == id_const)) {
        closure.push_back(cur);
        if (static_cast<int>(closure.size()) > bound) return std::nullopt;
        cur = pointwise_op(cur, f, PointwiseOp::Multiply);
    }
    return closure;
}

}  // namespace simlab

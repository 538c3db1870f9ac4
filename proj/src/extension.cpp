#include "simlab/extension.hpp"

#include <algorithm>
#include <limits>
#include <memory>

namespace simlab {

namespace {

using Maps = std::vector<PartialAutomorphism>;

struct SearchCtx {
    const ReducedWord* w = nullptr;
    ClassTag tag{};
    int a = 0;
    bool avoid_mode = true;  // accept v != a; otherwise require v == a
    long nodes_left = 0;
};

std::optional<Maps> apply_pair(const Maps& maps, int g, int dom_pt, int rng_pt) {
    if (!pair_compatible(maps[g], dom_pt, rng_pt)) return std::nullopt;
    try {
        Maps out = maps;
        out[g] = close_under_acl(maps[g].with_pair(dom_pt, rng_pt));
        return out;
    } catch (const DomainError&) {
        return std::nullopt;  // acl closure impossible in this ambient
    }
}

// Rank interval [lo, hi] of admissible insertion positions for a fresh point
// that must sit on the `constraint` side of a partial map mirroring `pivot`.
// side_points[i] lists (existing point, must_be_below_fresh).
std::pair<int, int> rank_window(const FinStructure& s,
                                const std::vector<std::pair<int, bool>>& side) {
    std::vector<int> rank = s.order_ranks();
    int lo = 0, hi = s.n;
    for (const auto& [p, below] : side) {
        if (below)
            lo = std::max(lo, rank[p] + 1);
        else
            hi = std::min(hi, rank[p]);
    }
    return {lo, hi};
}

struct Growth {
    std::shared_ptr<const FinStructure> ambient;
    int fresh = -1;
    int cost = 1;
};

// Creates one fresh point (two for a needed EqPairs partner) positioned so
// that the pending pair {known <-> fresh} is class-valid. known_is_dom: the
// known point is the domain-side point of the pair on maps[g].
std::optional<Growth> grow_fresh(const Maps& maps, int g, int known,
                                 bool known_is_dom) {
    const FinStructure& s = maps[0].ambient();
    const PartialAutomorphism& q = maps[g];
    switch (s.tag) {
        case ClassTag::Graph: {
            std::vector<int> neigh;
            for (int x = 0; x < s.n; ++x) {
                if (!q.defined_at(x)) continue;
                int y = q.image(x);
                // fresh mirrors known across the map
                bool want = known_is_dom ? s.adjacent(known, x) : s.adjacent(known, y);
                int counterpart = known_is_dom ? y : x;
                if (want) neigh.push_back(counterpart);
            }
            auto grown = std::make_shared<FinStructure>(graph_add_vertex(s, neigh));
            return Growth{grown, s.n, 1};
        }
        case ClassTag::LinearOrder:
        case ClassTag::OrderedRationalMetric: {
            std::vector<std::pair<int, bool>> side;
            for (int x = 0; x < s.n; ++x) {
                if (!q.defined_at(x)) continue;
                int y = q.image(x);
                if (known_is_dom)
                    side.emplace_back(y, s.less(x, known));
                else
                    side.emplace_back(x, s.less(y, known));
            }
            auto [lo, hi] = rank_window(s, side);
            if (lo > hi) return std::nullopt;
            if (s.tag == ClassTag::LinearOrder) {
                auto grown = std::make_shared<FinStructure>(order_add_point(s, lo));
                return Growth{grown, s.n, 1};
            }
            // metric: mirror the required distances, shortest-path completion
            // through the mirrored anchors elsewhere
            std::vector<Rat> dist(s.n, Rat(0));
            std::vector<std::pair<int, Rat>> anchors;  // (point, required dist)
            for (int x = 0; x < s.n; ++x) {
                if (!q.defined_at(x)) continue;
                int y = q.image(x);
                if (known_is_dom)
                    anchors.emplace_back(y, s.dist[known][x]);
                else
                    anchors.emplace_back(x, s.dist[known][y]);
            }
            if (anchors.empty()) {
                Rat d = Rat(1);
                if (s.n > 1 && s.diameter() > 2) d = s.diameter() / 2;
                for (int y = 0; y < s.n; ++y) dist[y] = d;
            } else {
                for (int y = 0; y < s.n; ++y) {
                    Rat best;
                    bool first = true;
                    for (const auto& [p, r] : anchors) {
                        Rat cand = (p == y) ? r : r + s.dist[p][y];
                        if (first || cand < best) {
                            best = cand;
                            first = false;
                        }
                    }
                    dist[y] = best;
                }
            }
            auto grown =
                std::make_shared<FinStructure>(metric_add_point(s, lo, dist));
            if (!is_valid(*grown)) return std::nullopt;
            return Growth{grown, s.n, 1};
        }
        case ClassTag::EqPairs: {
            bool need_partner = s.partner(known) >= 0;
            FinStructure g1 = eqpairs_add_vertex(s, -1);
            if (!need_partner)
                return Growth{std::make_shared<FinStructure>(g1), s.n, 1};
            FinStructure g2 = eqpairs_add_vertex(g1, s.n);
            return Growth{std::make_shared<FinStructure>(g2), s.n, 2};
        }
    }
    return std::nullopt;
}

Maps rebase_all(const Maps& maps, std::shared_ptr<const FinStructure> ambient) {
    Maps out;
    out.reserve(maps.size());
    for (const auto& m : maps) out.push_back(m.rebase(ambient));
    return out;
}

std::optional<Maps> dfs(const Maps& maps, int budget, SearchCtx& ctx) {
    if (ctx.nodes_left-- <= 0) return std::nullopt;
    PartialEval pe = partial_evaluate(*ctx.w, maps, ctx.a);
    if (pe.defined) {
        bool ok = ctx.avoid_mode ? (pe.value != ctx.a) : (pe.value == ctx.a);
        return ok ? std::optional<Maps>(maps) : std::nullopt;
    }
    const int i0 = pe.undefined_at;
    const int b = pe.tail_value;
    const Letter letter = ctx.w->letters[i0 - 1];
    const int g = letter.generator - 1;
    const bool dom_side = letter.sign > 0;  // pair is (b -> c) else (c -> b)
    const int n_pts = maps[0].universe_size();

    auto try_pair = [&](const Maps& cur, int c) -> std::optional<Maps> {
        return dom_side ? apply_pair(cur, g, b, c) : apply_pair(cur, g, c, b);
    };

    // c ranges over chain continuation values. The induction's preferred
    // witnesses come first; remaining class-valid images follow so that the
    // search is complete within the ambient.
    auto scheme_ok = [&](const Maps& next, int c) {
        if (i0 == 1) return true;  // filter below handles c != a
        if (c == b) return false;
        const Letter prev = ctx.w->letters[i0 - 2];
        const PartialAutomorphism& qp = next[prev.generator - 1];
        bool defined = prev.sign > 0 ? qp.defined_at(c) : qp.has_preimage(c);
        return !defined;
    };
    auto value_filter = [&](int c) {
        if (i0 == 1) return ctx.avoid_mode ? (c != ctx.a) : (c == ctx.a);
        return true;
    };

    for (int phase = 0; phase < 2; ++phase) {
        for (int c = 0; c < n_pts; ++c) {
            if (!value_filter(c)) continue;
            auto next = try_pair(maps, c);
            if (!next) continue;
            bool preferred = ctx.avoid_mode && scheme_ok(*next, c);
            if ((phase == 0) != preferred && ctx.avoid_mode) continue;
            if (!ctx.avoid_mode && phase == 1) continue;  // single pass for fix
            auto r = dfs(*next, budget, ctx);
            if (r) return r;
            if (ctx.nodes_left <= 0) return std::nullopt;
        }
        if (!ctx.avoid_mode) break;
    }

    if (budget > 0) {
        auto grown = grow_fresh(maps, g, b, dom_side);
        if (grown && grown->cost <= budget) {
            if (!ctx.avoid_mode && i0 == 1) return std::nullopt;  // fresh != a
            Maps next_maps = rebase_all(maps, grown->ambient);
            auto next = dom_side ? apply_pair(next_maps, g, b, grown->fresh)
                                 : apply_pair(next_maps, g, grown->fresh, b);
            if (next) {
                auto r = dfs(*next, budget - grown->cost, ctx);
                if (r) return r;
            }
        }
    }
    return std::nullopt;
}

void check_tuple(const Maps& maps, const ReducedWord& w,
                 const ClassDescriptor& cls) {
    if (maps.empty()) throw DomainError("extension: empty tuple");
    if (static_cast<int>(maps.size()) < w.arity)
        throw DomainError("extension: tuple shorter than word arity");
    for (const auto& m : maps) {
        if (!(m.ambient() == maps[0].ambient()))
            throw DomainError("extension: ambient mismatch");
        if (m.ambient().tag != cls.tag)
            throw DomainError("extension: class mismatch");
    }
}

Maps closed_tuple(const Maps& maps) {
    Maps out;
    out.reserve(maps.size());
    for (const auto& m : maps) out.push_back(close_under_acl(m));
    return out;
}

}  // namespace

std::vector<PartialAutomorphism> extend_to_avoid(
    const std::vector<PartialAutomorphism>& maps, int a, const ReducedWord& w,
    const ClassDescriptor& cls, int growth_budget) {
    check_tuple(maps, w, cls);
    Maps start = closed_tuple(maps);
    PartialEval pe = partial_evaluate(w, start, a);
    if (pe.defined)
        throw DomainError("extend_to_avoid: word is already defined at the point");

    SearchCtx ctx;
    ctx.w = &w;
    ctx.tag = cls.tag;
    ctx.a = a;
    ctx.avoid_mode = true;
    ctx.nodes_left = std::numeric_limits<long>::max();
    auto result = dfs(start, growth_budget, ctx);
    if (!result)
        throw DomainError(
            "extend_to_avoid: growth budget exhausted before completing the "
            "induction");

    PartialEval post = partial_evaluate(w, *result, a);
    if (!post.defined || post.value == a)
        throw std::logic_error("extend_to_avoid: postcondition violated");
    for (std::size_t i = 0; i < maps.size(); ++i)
        for (const auto& [x, y] : maps[i].pairs())
            if (result->at(i).image(x) != y)
                throw std::logic_error(
                    "extend_to_avoid: output does not extend input");
    return *result;
}

std::optional<std::vector<PartialAutomorphism>> extend_to_fix(
    const std::vector<PartialAutomorphism>& maps, int a, const ReducedWord& w,
    const ClassDescriptor& cls, int growth_budget, long node_cap) {
    check_tuple(maps, w, cls);
    Maps start = closed_tuple(maps);
    PartialEval pe = partial_evaluate(w, start, a);
    if (pe.defined) {
        if (pe.value == a) return start;
        return std::nullopt;  // defined values cannot be changed by extension
    }
    SearchCtx ctx;
    ctx.w = &w;
    ctx.tag = cls.tag;
    ctx.a = a;
    ctx.avoid_mode = false;
    ctx.nodes_left = node_cap;
    auto result = dfs(start, growth_budget, ctx);
    if (result) {
        PartialEval post = partial_evaluate(w, *result, a);
        if (!post.defined || post.value != a)
            throw std::logic_error("extend_to_fix: postcondition violated");
    }
    return result;
}

}  // namespace simlab

#include "simlab/hrushovski.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <set>

namespace simlab {

namespace {

// Automorphism of b extending the fixed images in `pinned` (-1 = free),
// lexicographically least. Backtracking with a degree prefilter for graphs.
std::optional<Perm> automorphism_extending(const FinStructure& b,
                                           const std::vector<int>& pinned) {
    if (b.tag == ClassTag::Graph) {
        std::vector<int> deg(b.n, 0);
        for (const auto& [x, y] : b.rel) {
            ++deg[x];
            ++deg[y];
        }
        for (int v = 0; v < b.n; ++v)
            if (pinned[v] >= 0 && deg[v] != deg[pinned[v]]) return std::nullopt;
    }
    std::vector<int> map(b.n, -1);
    std::vector<char> used(b.n, 0);
    for (int v = 0; v < b.n; ++v)
        if (pinned[v] >= 0) {
            if (used[pinned[v]]) return std::nullopt;
            map[v] = pinned[v];
            used[pinned[v]] = 1;
        }

    auto consistent = [&](int v) {
        for (int u = 0; u < b.n; ++u) {
            if (map[u] < 0 || u == v) continue;
            if (b.has_pair(u, v) != b.has_pair(map[u], map[v])) return false;
            if (b.has_pair(v, u) != b.has_pair(map[v], map[u])) return false;
            if (b.tag == ClassTag::OrderedRationalMetric &&
                b.dist[u][v] != b.dist[map[u]][map[v]])
                return false;
        }
        return true;
    };
    // pinned entries can clash with each other; check once up front
    for (int v = 0; v < b.n; ++v)
        if (map[v] >= 0 && !consistent(v)) return std::nullopt;

    std::function<bool(int)> rec = [&](int v) -> bool {
        while (v < b.n && map[v] >= 0) ++v;
        if (v == b.n) return true;
        for (int img = 0; img < b.n; ++img) {
            if (used[img]) continue;
            map[v] = img;
            used[img] = 1;
            if (consistent(v) && rec(v + 1)) return true;
            used[img] = 0;
            map[v] = -1;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    return map;
}

std::optional<EppaWitness> try_candidate(
    const FinStructure& b, const FinStructure& a,
    const std::vector<PartialAutomorphism>& maps) {
    std::vector<Perm> autos;
    for (const auto& p : maps) {
        std::vector<int> pinned(b.n, -1);
        for (const auto& [x, y] : p.pairs()) pinned[x] = y;
        auto perm = automorphism_extending(b, pinned);
        if (!perm) return std::nullopt;
        autos.push_back(std::move(*perm));
    }
    Embedding inc;
    inc.map.resize(a.n);
    for (int i = 0; i < a.n; ++i) inc.map[i] = i;
    return EppaWitness{b, std::move(inc), std::move(autos)};
}

// -- candidate enumeration, one class at a time ------------------------------

using Visitor = std::function<std::optional<EppaWitness>(const FinStructure&)>;

std::optional<EppaWitness> graph_candidates(const FinStructure& a, int size,
                                            const Visitor& visit) {
    std::vector<std::pair<int, int>> free_pairs;
    for (int i = 0; i < size; ++i)
        for (int j = std::max(i + 1, a.n); j < size; ++j)
            free_pairs.emplace_back(i, j);
    const std::size_t k = free_pairs.size();
    if (k >= 63) throw DomainError("eppa_check: graph search space too large");
    for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
        FinStructure b = a;
        b.n = size;
        for (std::size_t t = 0; t < k; ++t)
            if (mask & (1ULL << t)) b.rel.push_back(free_pairs[t]);
        b.normalize();
        if (auto w = visit(b)) return w;
    }
    return std::nullopt;
}

std::optional<EppaWitness> order_candidates(const FinStructure& a, int size,
                                            const Visitor& visit) {
    // a linear order extends uniquely up to the placement of new points;
    // enumerate rank placements of the new points lexicographically
    std::vector<int> place(size - a.n, 0);
    std::function<std::optional<EppaWitness>(int, const FinStructure&)> rec =
        [&](int idx, const FinStructure& cur) -> std::optional<EppaWitness> {
        if (idx == size - a.n) return visit(cur);
        for (int r = 0; r <= cur.n; ++r) {
            auto w = rec(idx + 1, order_add_point(cur, r));
            if (w) return w;
        }
        return std::nullopt;
    };
    return rec(0, a);
}

std::optional<EppaWitness> eqpairs_candidates(const FinStructure& a, int size,
                                              const Visitor& visit) {
    // candidate pairings among new points and unpartnered old points
    std::vector<int> pairable;
    for (int v = 0; v < a.n; ++v)
        if (a.partner(v) < 0) pairable.push_back(v);
    for (int v = a.n; v < size; ++v) pairable.push_back(v);

    std::vector<std::pair<int, int>> extra;
    std::function<std::optional<EppaWitness>(std::size_t, std::vector<char>&)> rec =
        [&](std::size_t idx,
            std::vector<char>& taken) -> std::optional<EppaWitness> {
        if (idx == pairable.size()) {
            FinStructure b = a;
            b.n = size;
            for (const auto& pr : extra) b.rel.push_back(pr);
            b.normalize();
            return visit(b);
        }
        if (taken[idx]) return rec(idx + 1, taken);
        // leave pairable[idx] single
        taken[idx] = 1;
        if (auto w = rec(idx + 1, taken)) return w;
        // or pair it with a later pairable point (new pairs must involve a
        // new point, and old-old pairs would change A itself)
        for (std::size_t j = idx + 1; j < pairable.size(); ++j) {
            if (taken[j] || pairable[j] < a.n) continue;
            taken[j] = 1;
            extra.emplace_back(pairable[idx], pairable[j]);
            if (auto w = rec(idx + 1, taken)) return w;
            extra.pop_back();
            taken[j] = 0;
        }
        taken[idx] = 0;
        return std::nullopt;
    };
    std::vector<char> taken(pairable.size(), 0);
    return rec(0, taken);
}

std::vector<Rat> metric_distance_lattice(const FinStructure& a) {
    std::set<Rat> base;
    for (int i = 0; i < a.n; ++i)
        for (int j = i + 1; j < a.n; ++j) base.insert(a.dist[i][j]);
    if (base.empty()) return {Rat(1)};
    Rat diam = a.diameter();
    // close under addition, capped at the diameter
    std::set<Rat> closed = base;
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Rat> cur(closed.begin(), closed.end());
        for (const Rat& x : cur)
            for (const Rat& y : base) {
                Rat s = x + y;
                if (s <= diam && closed.insert(s).second) grew = true;
            }
    }
    return std::vector<Rat>(closed.begin(), closed.end());
}

std::optional<EppaWitness> metric_candidates(const FinStructure& a, int size,
                                             const Visitor& visit) {
    const std::vector<Rat> lattice = metric_distance_lattice(a);
    std::function<std::optional<EppaWitness>(const FinStructure&)> add_point =
        [&](const FinStructure& cur) -> std::optional<EppaWitness> {
        if (cur.n == size) return visit(cur);
        std::vector<Rat> dist(cur.n, Rat(0));
        std::function<std::optional<EppaWitness>(int)> assign =
            [&](int y) -> std::optional<EppaWitness> {
            if (y == cur.n) {
                for (int r = 0; r <= cur.n; ++r) {
                    auto grown = metric_add_point(cur, r, dist);
                    if (!is_valid(grown)) continue;
                    if (auto w = add_point(grown)) return w;
                }
                return std::nullopt;
            }
            for (const Rat& d : lattice) {
                bool ok = true;  // incremental triangle pruning
                for (int z = 0; z < y && ok; ++z)
                    if (d > dist[z] + cur.dist[z][y] ||
                        cur.dist[z][y] > d + dist[z] || dist[z] > d + cur.dist[z][y])
                        ok = false;
                if (!ok) continue;
                dist[y] = d;
                if (auto w = assign(y + 1)) return w;
            }
            return std::nullopt;
        };
        return assign(0);
    };
    return add_point(a);
}

}  // namespace

std::optional<EppaWitness> eppa_check(
    const FinStructure& a, const std::vector<PartialAutomorphism>& maps,
    int max_size) {
    if (!is_valid(a)) throw DomainError("eppa_check: invalid structure");
    for (const auto& p : maps) {
        if (!(p.ambient() == a))
            throw DomainError("eppa_check: map ambient differs from A");
        if (!is_partial_automorphism(p))
            throw DomainError("eppa_check: tuple entry not a partial automorphism");
    }
    Visitor visit = [&](const FinStructure& b) { return try_candidate(b, a, maps); };
    for (int size = a.n; size <= std::max(a.n, max_size); ++size) {
        std::optional<EppaWitness> w;
        switch (a.tag) {
            case ClassTag::Graph: w = graph_candidates(a, size, visit); break;
            case ClassTag::LinearOrder: w = order_candidates(a, size, visit); break;
            case ClassTag::EqPairs: w = eqpairs_candidates(a, size, visit); break;
            case ClassTag::OrderedRationalMetric:
                w = metric_candidates(a, size, visit);
                break;
        }
        if (w) return w;
    }
    return std::nullopt;
}

HrushovskiChain hrushovski_chain(const ClassDescriptor& cls,
                                 const FinStructure& a1,
                                 const std::vector<PartialAutomorphism>& maps,
                                 int depth, int max_size) {
    if (depth < 1) throw DomainError("hrushovski_chain: depth must be >= 1");
    if (a1.tag != cls.tag) throw DomainError("hrushovski_chain: class mismatch");
    // Stage i extends the previous stage so the maps become total on it:
    // p in A, then p_1 total on A_1, p_2 total on A_2, ...
    HrushovskiChain chain;
    FinStructure current = a1;
    std::vector<PartialAutomorphism> cur = maps;
    for (int stage = 1; stage <= depth; ++stage) {
        auto w = eppa_check(current, cur, max_size);
        if (!w)
            throw EppaFailure(stage, "hrushovski_chain: no extension witness at stage " +
                                         std::to_string(stage));
        auto ambient = std::make_shared<FinStructure>(w->extension);
        std::vector<PartialAutomorphism> next;
        for (const Perm& p : w->autos)
            next.push_back(PartialAutomorphism::total(ambient, p));
        chain.stages.push_back(w->extension);
        current = w->extension;
        cur = std::move(next);
    }
    chain.totals.reserve(cur.size());
    for (const auto& p : cur) chain.totals.push_back(p.as_perm());
    return chain;
}

PrecompactVerdict precompact_evidence(
    const std::vector<PartialAutomorphism>& maps, const std::vector<int>& base,
    int word_bound) {
    PrecompactVerdict v;
    for (int pt : base) {
        OrbitResult o = orbit(maps, pt, word_bound);
        v.orbit_sizes.emplace_back(pt, o.points.size());
        if (!o.closed) v.all_orbits_closed = false;
    }
    return v;
}

}  // namespace simlab

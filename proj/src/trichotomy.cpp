#include "simlab/trichotomy.hpp"

#include <algorithm>
#include <set>

#include "simlab/rng.hpp"

namespace simlab {

const char* verdict_tag_name(VerdictTag tag) {
    switch (tag) {
        case VerdictTag::PrecompactEvidence: return "precompact_evidence";
        case VerdictTag::DiscreteEvidence: return "discrete_evidence";
        case VerdictTag::NonDiscreteWitness: return "nondiscrete_witness";
        case VerdictTag::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

enum class WordStatus { Irrelevant, Witness, Blocker, TotalIdentity };

// How a word's evaluation relates to a fix target: a witness fixes all of T
// (defined there) and moves a point of its domain; a blocker fixes T and is
// the identity on a proper domain (cannot be certified either way); a word
// that moves or misses a point of T is irrelevant to T.
WordStatus word_status_for_target(const PartialAutomorphism& eval,
                                  const std::vector<int>& target,
                                  int* moved_out) {
    for (int t : target) {
        int v = eval.image(t);
        if (v != t) return WordStatus::Irrelevant;  // moved or undefined at T
    }
    int moved = -1;
    bool total = true;
    for (int p = 0; p < eval.universe_size(); ++p) {
        int v = eval.image(p);
        if (v < 0)
            total = false;
        else if (v != p && moved < 0)
            moved = p;
    }
    if (moved >= 0) {
        if (moved_out) *moved_out = moved;
        return WordStatus::Witness;
    }
    return total ? WordStatus::TotalIdentity : WordStatus::Blocker;
}

}  // namespace

std::vector<std::vector<int>> prefix_targets(const std::vector<int>& base,
                                             int count) {
    std::vector<std::vector<int>> out;
    for (int k = 1; k <= count && k <= static_cast<int>(base.size()); ++k)
        out.emplace_back(base.begin(), base.begin() + k);
    return out;
}

TrichotomyVerdict classify(const ClassDescriptor& cls,
                           const std::vector<PartialAutomorphism>& maps,
                           const std::vector<int>& base, int word_bound,
                           const std::vector<std::vector<int>>& fix_targets) {
    if (maps.empty()) throw DomainError("classify: empty tuple");
    for (const auto& m : maps)
        if (m.ambient().tag != cls.tag)
            throw DomainError("classify: class mismatch");

    TrichotomyVerdict verdict;
    verdict.word_bound = word_bound;

    PrecompactVerdict ev = precompact_evidence(maps, base, word_bound);
    if (ev.all_orbits_closed) {
        verdict.tag = VerdictTag::PrecompactEvidence;
        verdict.orbit_sizes = std::move(ev.orbit_sizes);
        return verdict;
    }

    const int n = static_cast<int>(maps.size());
    std::vector<WitnessEntry> found(fix_targets.size());
    std::vector<char> witnessed(fix_targets.size(), 0);
    std::vector<char> blocked(fix_targets.size(), 0);

    auto words = enumerate_words(n, word_bound);
    verdict.words_scanned = words.size();
    for (const ReducedWord& w : words) {
        if (w.empty()) continue;  // evaluates to the identity
        PartialAutomorphism eval = word_map(w, maps);
        for (std::size_t t = 0; t < fix_targets.size(); ++t) {
            if (witnessed[t]) continue;
            int moved = -1;
            WordStatus st = word_status_for_target(eval, fix_targets[t], &moved);
            if (st == WordStatus::Witness) {
                witnessed[t] = 1;
                found[t] = WitnessEntry{w, fix_targets[t], moved};
            } else if (st == WordStatus::Blocker) {
                blocked[t] = 1;
            }
        }
    }

    bool all_witnessed = !fix_targets.empty();
    for (std::size_t t = 0; t < fix_targets.size(); ++t)
        if (!witnessed[t]) all_witnessed = false;

    if (all_witnessed) {
        // re-verify every payload from scratch
        for (const WitnessEntry& e : found) {
            PartialAutomorphism eval = word_map(e.word, maps);
            for (int t : e.fixed_set)
                if (eval.image(t) != t)
                    throw std::logic_error("classify: witness re-verification failed");
            if (eval.image(e.moved_point) < 0 ||
                eval.image(e.moved_point) == e.moved_point)
                throw std::logic_error("classify: witness re-verification failed");
        }
        verdict.tag = VerdictTag::NonDiscreteWitness;
        verdict.witnesses = std::move(found);
        return verdict;
    }

    for (std::size_t t = 0; t < fix_targets.size(); ++t) {
        if (witnessed[t] || blocked[t]) continue;
        // re-scan this target from scratch before declaring the evidence
        for (const ReducedWord& w : words) {
            if (w.empty()) continue;
            int moved = -1;
            WordStatus st =
                word_status_for_target(word_map(w, maps), fix_targets[t], &moved);
            if (st == WordStatus::Witness || st == WordStatus::Blocker)
                throw std::logic_error("classify: discrete re-verification failed");
        }
        verdict.tag = VerdictTag::DiscreteEvidence;
        verdict.separating_set = fix_targets[t];
        return verdict;
    }

    verdict.tag = VerdictTag::Inconclusive;
    return verdict;
}

std::pair<std::vector<PartialAutomorphism>, int> densify_witness(
    const std::vector<PartialAutomorphism>& maps, int a,
    const std::vector<ReducedWord>& w_seq, int k, const ClassDescriptor& cls,
    int growth_budget) {
    if (k < 0) throw DomainError("densify_witness: negative start index");
    std::vector<PartialAutomorphism> closed;
    closed.reserve(maps.size());
    for (const auto& m : maps) closed.push_back(close_under_acl(m));

    for (int l = k; l < static_cast<int>(w_seq.size()); ++l) {
        PartialEval pe = partial_evaluate(w_seq[l], closed, a);
        if (pe.defined) continue;
        auto extended = extend_to_avoid(closed, a, w_seq[l], cls, growth_budget);
        PartialEval post = partial_evaluate(w_seq[l], extended, a);
        if (!post.defined || post.value == a)
            throw std::logic_error("densify_witness: postcondition violated");
        return {std::move(extended), l};
    }
    throw DomainError("densify_witness: no undefined word found within scan bound");
}

SystemJepWitness diagonal_conjugacy_jep(const ClassDescriptor& cls,
                                        const std::vector<System>& systems) {
    if (cls.tag != ClassTag::LinearOrder &&
        cls.tag != ClassTag::OrderedRationalMetric)
        throw DomainError("diagonal_conjugacy_jep: unsupported class");
    if (systems.empty()) throw DomainError("diagonal_conjugacy_jep: no systems");
    const std::size_t arity = systems[0].maps.size();
    for (const auto& sys : systems) {
        if (sys.structure.tag != cls.tag)
            throw DomainError("diagonal_conjugacy_jep: class mismatch");
        if (sys.maps.size() != arity)
            throw DomainError("diagonal_conjugacy_jep: arity mismatch");
        for (const auto& m : sys.maps)
            if (!(m.ambient() == sys.structure))
                throw DomainError("diagonal_conjugacy_jep: map ambient mismatch");
    }

    // uniform cross distance for the whole stack
    Rat d0 = 1;
    if (cls.tag == ClassTag::OrderedRationalMetric)
        for (const auto& sys : systems)
            if (sys.structure.n > 0 && sys.structure.diameter() > d0)
                d0 = sys.structure.diameter();

    FinStructure whole = systems[0].structure;
    std::vector<int> offsets{0};
    for (std::size_t i = 1; i < systems.size(); ++i) {
        offsets.push_back(whole.n);
        if (cls.tag == ClassTag::OrderedRationalMetric)
            whole = jep_ordered_metric(whole, systems[i].structure, d0).whole;
        else
            whole = cls.jep(whole, systems[i].structure).whole;
    }
    auto shared = std::make_shared<FinStructure>(whole);

    std::vector<PartialAutomorphism> united(
        arity, PartialAutomorphism(shared));
    for (std::size_t i = 0; i < systems.size(); ++i)
        for (std::size_t j = 0; j < arity; ++j)
            for (const auto& [x, y] : systems[i].maps[j].pairs())
                united[j] = united[j].with_pair(x + offsets[i], y + offsets[i]);

    std::vector<Embedding> embeddings;
    for (std::size_t i = 0; i < systems.size(); ++i) {
        Embedding e;
        e.map.resize(systems[i].structure.n);
        for (int x = 0; x < systems[i].structure.n; ++x) e.map[x] = x + offsets[i];
        if (!is_embedding(systems[i].structure, whole, e.map))
            throw std::logic_error("diagonal_conjugacy_jep: stacking broke an embedding");
        embeddings.push_back(std::move(e));
    }

    for (std::size_t j = 0; j < arity; ++j)
        if (!is_partial_automorphism(united[j]))
            throw std::logic_error("diagonal_conjugacy_jep: union map invalid");
    // embedding-of-systems equation: e_i(p_i^j(x)) = p^j(e_i(x))
    for (std::size_t i = 0; i < systems.size(); ++i)
        for (std::size_t j = 0; j < arity; ++j)
            for (const auto& [x, y] : systems[i].maps[j].pairs())
                if (united[j].image(embeddings[i].map[x]) != embeddings[i].map[y])
                    throw std::logic_error(
                        "diagonal_conjugacy_jep: embedding equation violated");

    return SystemJepWitness{shared, std::move(united), std::move(embeddings)};
}

namespace {

// Find a word (shortlex, within scan_bound) and extensions of `maps` making
// the word provably fix every point of `target` while moving some point.
// Candidate images come from the fixed ambient only (no growth).
struct FixingSearch {
    const ClassDescriptor& cls;
    int scan_bound;
    long node_cap;

    std::optional<std::pair<ReducedWord, std::vector<PartialAutomorphism>>> run(
        const std::vector<PartialAutomorphism>& maps,
        const std::vector<int>& target, int* moved_out) const {
        const int n = static_cast<int>(maps.size());
        for (const ReducedWord& w : enumerate_words(n, scan_bound)) {
            if (w.empty()) continue;
            auto attempt = try_word(maps, w, target, moved_out);
            if (attempt) return std::make_pair(w, std::move(*attempt));
        }
        return std::nullopt;
    }

    std::optional<std::vector<PartialAutomorphism>> try_word(
        const std::vector<PartialAutomorphism>& maps, const ReducedWord& w,
        const std::vector<int>& target, int* moved_out) const {
        std::vector<PartialAutomorphism> cur = maps;
        for (int t : target) {
            auto fixed = extend_to_fix(cur, t, w, cls, 0, node_cap);
            if (!fixed) return std::nullopt;
            cur = std::move(*fixed);
        }
        // need a certified moved point as well
        const int n_pts = cur[0].universe_size();
        for (int p = 0; p < n_pts; ++p) {
            PartialEval pe = partial_evaluate(w, cur, p);
            if (pe.defined && pe.value != p) {
                if (moved_out) *moved_out = p;
                return cur;
            }
        }
        for (int p = 0; p < n_pts; ++p) {
            PartialEval pe = partial_evaluate(w, cur, p);
            if (pe.defined) continue;
            try {
                auto moved = extend_to_avoid(cur, p, w, cls, 0);
                if (moved_out) *moved_out = p;
                return moved;
            } catch (const DomainError&) {
                // no room to move this point; try the next one
            }
        }
        return std::nullopt;
    }
};

}  // namespace

PairWitness nondiscrete_witness_pairs_q(int truncation_size, int depth,
                                        std::uint64_t seed) {
    if (truncation_size < 2 + 2 * depth)
        throw DomainError(
            "nondiscrete_witness_pairs_q: truncation too small for depth");
    SplitRng rng(seed);
    auto ambient =
        std::make_shared<const FinStructure>(FinStructure::linear_order(truncation_size));
    ClassDescriptor cls(ClassTag::LinearOrder);

    // seeded generic-ish start: two small order-compatible partial maps
    auto random_map = [&](SplitRng& r) {
        int x1 = r.next_int(0, truncation_size - 2);
        int x2 = r.next_int(x1 + 1, truncation_size - 1);
        int y1 = r.next_int(0, truncation_size - 2);
        int y2 = r.next_int(y1 + 1, truncation_size - 1);
        return PartialAutomorphism::from_pairs(ambient, {{x1, y1}, {x2, y2}});
    };
    SplitRng map_rng = rng.split(1);
    std::vector<PartialAutomorphism> maps{random_map(map_rng), random_map(map_rng)};

    // designated points, distinct, seeded
    SplitRng pick_rng = rng.split(2);
    std::set<int> chosen;
    std::vector<int> designated;
    while (static_cast<int>(designated.size()) < depth) {
        int p = pick_rng.next_int(0, truncation_size - 1);
        if (chosen.insert(p).second) designated.push_back(p);
    }

    PairWitness out;
    out.ambient = ambient;
    out.designated = designated;

    FixingSearch search{cls, 6, 50000};
    for (int j = 1; j <= depth; ++j) {
        std::vector<int> target(designated.begin(), designated.begin() + j);
        int moved = -1;
        auto got = search.run(maps, target, &moved);
        if (!got)
            throw DomainError(
                "nondiscrete_witness_pairs_q: truncation exhausted (a larger "
                "size may help)");
        maps = std::move(got->second);
        out.words.push_back(WitnessEntry{got->first, target, moved});
    }
    out.maps = maps;

    // every claim re-verified against the final maps (extensions only ever
    // enlarge domains, so earlier certificates must still hold)
    for (const WitnessEntry& e : out.words) {
        for (int t : e.fixed_set) {
            PartialEval pe = partial_evaluate(e.word, maps, t);
            if (!pe.defined || pe.value != t)
                throw std::logic_error("nondiscrete_witness_pairs_q: fix lost");
        }
        PartialEval pe = partial_evaluate(e.word, maps, e.moved_point);
        if (!pe.defined || pe.value == e.moved_point)
            throw std::logic_error("nondiscrete_witness_pairs_q: move lost");
    }
    return out;
}

}  // namespace simlab

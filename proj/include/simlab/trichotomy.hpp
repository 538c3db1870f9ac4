#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "simlab/extension.hpp"
#include "simlab/fin_structure.hpp"
#include "simlab/hrushovski.hpp"
#include "simlab/partial_auto.hpp"
#include "simlab/words.hpp"

namespace simlab {

enum class VerdictTag {
    PrecompactEvidence,
    DiscreteEvidence,
    NonDiscreteWitness,
    Inconclusive
};

const char* verdict_tag_name(VerdictTag tag);

struct WitnessEntry {
    ReducedWord word;
    std::vector<int> fixed_set;
    int moved_point = -1;
};

// Evidence at scale (|universe|, word_bound) — never a claim about the
// infinite group.
struct TrichotomyVerdict {
    VerdictTag tag = VerdictTag::Inconclusive;
    // PrecompactEvidence
    std::vector<std::pair<int, std::size_t>> orbit_sizes;
    // DiscreteEvidence: every scanned word fixing this set pointwise is the
    // total identity
    std::vector<int> separating_set;
    int word_bound = 0;
    // NonDiscreteWitness: one (certified) entry per requested target
    std::vector<WitnessEntry> witnesses;
    // resource report
    std::size_t words_scanned = 0;
};

// Trichotomy evidence for a tuple of (possibly truncated) automorphisms:
//   - all base orbits closed within the bound       -> PrecompactEvidence
//   - every fix target has a word that provably fixes it pointwise while
//     moving some point                              -> NonDiscreteWitness
//   - some target where every scanned word fixing it pointwise is the total
//     identity                                       -> DiscreteEvidence
//   - otherwise                                      -> Inconclusive
// A word "fixes T pointwise" only when defined on all of T; a word counts as
// non-identity only when it moves a point of its domain.
TrichotomyVerdict classify(const ClassDescriptor& cls,
                           const std::vector<PartialAutomorphism>& maps,
                           const std::vector<int>& base, int word_bound,
                           const std::vector<std::vector<int>>& fix_targets);

// Nested initial segments of base: {base[0]}, {base[0],base[1]}, ...
std::vector<std::vector<int>> prefix_targets(const std::vector<int>& base,
                                             int count);

// Scans w_seq from index k for a word undefined at a (such a word always
// decomposes as v*u with the undefined suffix u), then extends the maps so
// that word moves a. Returns the extension and the index found.
std::pair<std::vector<PartialAutomorphism>, int> densify_witness(
    const std::vector<PartialAutomorphism>& maps, int a,
    const std::vector<ReducedWord>& w_seq, int k, const ClassDescriptor& cls,
    int growth_budget);

struct System {
    FinStructure structure;
    std::vector<PartialAutomorphism> maps;  // n-tuple on that structure
};

struct SystemJepWitness {
    std::shared_ptr<const FinStructure> structure;
    std::vector<PartialAutomorphism> maps;  // unions of the systems' maps
    std::vector<Embedding> embeddings;      // one per input system
};

// Joint embedding for systems (A_i, maps_i): stacks the structures (every
// point of system i below system i+1; cross distances d_0 for the metric
// class) and unites the maps. LinearOrder and OrderedRationalMetric only.
SystemJepWitness diagonal_conjugacy_jep(const ClassDescriptor& cls,
                                        const std::vector<System>& systems);

struct PairWitness {
    std::shared_ptr<const FinStructure> ambient;  // linear-order truncation
    std::vector<PartialAutomorphism> maps;        // the pair (f, g)
    std::vector<int> designated;                  // depth points
    std::vector<WitnessEntry> words;  // word j fixes the first j designated
                                      // points and moves some point
};

// Seeded construction of a pair generating non-discreteness evidence on a
// linear-order truncation: words w_1..w_depth where w_j provably fixes the
// first j designated points pointwise and moves another point. Every claim is
// re-verified before returning.
PairWitness nondiscrete_witness_pairs_q(int truncation_size, int depth,
                                        std::uint64_t seed);

}  // namespace simlab

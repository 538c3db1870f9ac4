#pragma once

#include <optional>
#include <vector>

#include "simlab/fin_structure.hpp"
#include "simlab/partial_auto.hpp"

namespace simlab {

struct EppaWitness {
    FinStructure extension;  // B, with A as the index prefix
    Embedding inclusion;     // identity prefix embedding of A
    std::vector<Perm> autos; // total automorphisms of B extending each map
};

// Brute-force extension-property search: the smallest B with |B| <= max_size
// extending A (A's indices fixed as a prefix) such that every map extends to
// a total automorphism of B. Candidates are enumerated by size, then in
// lexicographic relation order, so the returned witness is size-minimal.
// nullopt means no witness of size <= max_size exists within the search
// lattice (exhaustive for graphs, orders and eq-pairs; for the metric class
// candidate distances are drawn from sums of input distances capped at the
// diameter).
std::optional<EppaWitness> eppa_check(
    const FinStructure& a, const std::vector<PartialAutomorphism>& maps,
    int max_size);

struct EppaFailure : DomainError {
    int stage;
    EppaFailure(int stage_, const std::string& what)
        : DomainError(what), stage(stage_) {}
};

struct HrushovskiChain {
    std::vector<FinStructure> stages;  // A_1 through A_depth
    std::vector<Perm> totals;          // automorphisms of the last stage
};

// Iterates eppa_check so that at every stage the maps become total on the
// previous stage. Throws EppaFailure (with the failing stage, 1-based) when a
// stage has no witness within max_size.
HrushovskiChain hrushovski_chain(const ClassDescriptor& cls,
                                 const FinStructure& a1,
                                 const std::vector<PartialAutomorphism>& maps,
                                 int depth, int max_size);

struct PrecompactVerdict {
    bool all_orbits_closed = true;
    std::vector<std::pair<int, std::size_t>> orbit_sizes;  // base point -> size
};

// Evidence at scale: every base point's orbit under the evaluation action
// stays inside the defined region for all reduced words up to word_bound.
PrecompactVerdict precompact_evidence(
    const std::vector<PartialAutomorphism>& maps, const std::vector<int>& base,
    int word_bound);

}  // namespace simlab

#pragma once

#include <optional>
#include <vector>

#include "simlab/fin_structure.hpp"
#include "simlab/partial_auto.hpp"
#include "simlab/words.hpp"

namespace simlab {

// Extension induction: given a tuple with w undefined at a, extends the maps
// (growing the shared ambient by at most growth_budget fresh points) until
// w is defined at a with a value different from a.
//
// Candidates for each missing image are tried smallest-index first, with the
// witnesses satisfying the induction side conditions (c distinct from the
// falling-off point, next letter still undefined at c) preferred; when those
// are exhausted the search backtracks over all class-valid images, so within
// a fixed ambient it finds an extension exactly when one exists.
//
// Throws when w is already defined at a, or when no extension exists within
// the budget.
std::vector<PartialAutomorphism> extend_to_avoid(
    const std::vector<PartialAutomorphism>& maps, int a, const ReducedWord& w,
    const ClassDescriptor& cls, int growth_budget);

// Goal-directed variant: extend so that w(maps)(a) = a. Returns nullopt when
// the bounded search fails (the word may already be defined elsewhere than a,
// which is unfixable). node_cap bounds the backtracking search.
std::optional<std::vector<PartialAutomorphism>> extend_to_fix(
    const std::vector<PartialAutomorphism>& maps, int a, const ReducedWord& w,
    const ClassDescriptor& cls, int growth_budget, long node_cap = 200000);

}  // namespace simlab

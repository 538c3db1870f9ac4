#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simlab/rational.hpp"

namespace simlab {

// Raised on contract violations (bad inputs, unsupported class, exhausted
// budgets). The CLI maps these to exit code 1.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

enum class ClassTag { Graph, LinearOrder, OrderedRationalMetric, EqPairs };

const char* class_tag_name(ClassTag tag);
std::optional<ClassTag> class_tag_from_name(const std::string& name);
bool class_is_ordered(ClassTag tag);

// A finite structure over one of the four built-in classes.
//
// Universe is 0..n-1. `rel` holds the single binary relation of the class:
// undirected normalized (min,max) pairs for Graph ("edge") and EqPairs
// ("eq"), directed (a,b) meaning a-before-b for the order classes ("lt").
// `dist` is the symmetric rational distance matrix, OrderedRationalMetric
// only. The representation admits invalid structures; is_valid judges them.
struct FinStructure {
    ClassTag tag = ClassTag::Graph;
    int n = 0;
    std::vector<std::pair<int, int>> rel;
    std::vector<std::vector<Rat>> dist;

    static FinStructure empty(ClassTag tag);
    static FinStructure graph(int n, std::vector<std::pair<int, int>> edges);
    static FinStructure linear_order(int n);
    // rank[i] = order position of point i (0 = least).
    static FinStructure linear_order_from_ranks(const std::vector<int>& rank);
    // Natural order 0 < 1 < ... with the given distance matrix.
    static FinStructure ordered_metric(int n, std::vector<std::vector<Rat>> d);
    static FinStructure eq_pairs(int n, std::vector<std::pair<int, int>> pairs);

    void normalize();

    bool operator==(const FinStructure& other) const = default;

    bool has_pair(int a, int b) const;  // respects the class's symmetry
    bool adjacent(int a, int b) const { return has_pair(a, b); }
    bool less(int a, int b) const;             // order classes
    std::vector<int> order_ranks() const;      // rank[i], valid orders only
    std::vector<int> points_in_order() const;  // indices sorted by rank
    int partner(int i) const;                  // EqPairs: partner or -1
    Rat diameter() const;
};

bool is_valid(const FinStructure& s);

struct Substructure {
    FinStructure structure;
    std::vector<int> original_index;  // new index -> old index, ascending
};

// Induced structure on A (must be within range); reindexing is the
// order-preserving enumeration of A.
Substructure substructure(const FinStructure& s, const std::vector<int>& points);

struct Embedding {
    std::vector<int> map;  // source index -> target index
    bool operator==(const Embedding&) const = default;
};

// Injective and preserves/reflects all relations and distances.
bool is_embedding(const FinStructure& a, const FinStructure& b,
                  const std::vector<int>& map);

// Exactly all embeddings of a into b, lexicographic in the map vector.
std::vector<Embedding> enumerate_embeddings(const FinStructure& a,
                                            const FinStructure& b);

struct Amalgam {
    FinStructure whole;
    Embedding left;   // of A
    Embedding right;  // of B
};

// Free amalgam of A and B over C (graphs only): no relations between
// A-minus-C and B-minus-C. eA, eB embed C into A and B.
Amalgam free_amalgam(const FinStructure& c, const FinStructure& a,
                     const FinStructure& b, const Embedding& ea,
                     const Embedding& eb);

// Joint embedding for ordered rational metric spaces: every point of A below
// every point of B, all cross distances equal to d0. Requires
// d0 >= max(diam A, diam B)/2 and d0 > 0.
Amalgam jep_ordered_metric(const FinStructure& a, const FinStructure& b,
                           const Rat& d0);

// Class plugin: validity is shared (is_valid); this bundles the per-class
// constructions parameterized by the tag.
struct ClassDescriptor {
    ClassTag tag;

    explicit ClassDescriptor(ClassTag t) : tag(t) {}

    bool has_algebraicity() const { return tag == ClassTag::EqPairs; }

    // Joint embedding of plain structures: disjoint union for Graph and
    // EqPairs, stacking for LinearOrder, d0-stacking for the metric class.
    Amalgam jep(const FinStructure& a, const FinStructure& b) const;

    FinStructure truncation(int size, int richness, std::uint64_t seed) const;

    std::vector<int> acl(const FinStructure& m, const std::vector<int>& a) const;
};

// Deterministic-in-seed finite stand-in for the class's generic structure:
// grows point by point, witnessing one-point extension types over subsets of
// size <= richness while the budget lasts.
FinStructure generic_truncation(const ClassDescriptor& cls, int size,
                                int richness, std::uint64_t seed);

// Algebraic closure of A in M. The graph, order and metric classes have no
// algebraicity, so acl(A) = A there; EqPairs adds equivalence partners.
std::vector<int> acl(const FinStructure& m, const std::vector<int>& a);

// ---- total automorphisms -------------------------------------------------

using Perm = std::vector<int>;

Perm identity_perm(int n);
Perm compose(const Perm& p, const Perm& q);  // apply q first: x -> p[q[x]]
Perm inverse(const Perm& p);
bool is_automorphism(const FinStructure& s, const Perm& p);
// Lexicographic enumeration of Aut(s).
std::vector<Perm> all_automorphisms(const FinStructure& s);

// ---- one-point growth (ambient extension) --------------------------------

FinStructure graph_add_vertex(const FinStructure& s,
                              const std::vector<int>& neighbors);
// New point appended with order rank `rank` in 0..n (existing ranks shift up).
FinStructure order_add_point(const FinStructure& s, int rank);
FinStructure metric_add_point(const FinStructure& s, int rank,
                              const std::vector<Rat>& dist_to_existing);
// partner = existing unpartnered point, or -1 for a fresh singleton class.
FinStructure eqpairs_add_vertex(const FinStructure& s, int partner);

}  // namespace simlab

#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "simlab/fin_structure.hpp"

namespace simlab {

// A finite partial injective map inside an ambient structure, preserving and
// reflecting all relations and distances on its domain. Immutable: every
// operation returns a new value.
class PartialAutomorphism {
public:
    PartialAutomorphism() = default;

    explicit PartialAutomorphism(std::shared_ptr<const FinStructure> ambient)
        : ambient_(std::move(ambient)), img_(ambient_->n, -1) {}

    static PartialAutomorphism from_pairs(
        std::shared_ptr<const FinStructure> ambient,
        const std::vector<std::pair<int, int>>& pairs);

    static PartialAutomorphism total(std::shared_ptr<const FinStructure> ambient,
                                     const Perm& perm);

    const FinStructure& ambient() const { return *ambient_; }
    const std::shared_ptr<const FinStructure>& ambient_ptr() const {
        return ambient_;
    }

    int universe_size() const { return ambient_ ? ambient_->n : 0; }
    int dom_size() const;
    bool defined_at(int a) const { return img_[a] >= 0; }
    int image(int a) const { return img_[a]; }  // -1 when undefined
    bool has_preimage(int b) const { return preimage(b) >= 0; }
    int preimage(int b) const;

    std::vector<int> domain() const;
    std::vector<int> range() const;
    std::vector<std::pair<int, int>> pairs() const;  // sorted by domain point

    bool is_total() const { return dom_size() == universe_size(); }
    Perm as_perm() const;  // total maps only

    PartialAutomorphism inverted() const;
    // Adds a->b without any validity check; see pair_compatible.
    PartialAutomorphism with_pair(int a, int b) const;
    // Same pairs inside a grown ambient (old indices must be preserved).
    PartialAutomorphism rebase(std::shared_ptr<const FinStructure> bigger) const;

    // Compares ambient contents and the map.
    bool operator==(const PartialAutomorphism& other) const;

private:
    std::shared_ptr<const FinStructure> ambient_;
    std::vector<int> img_;
};

// Injectivity plus preservation/reflection of relations and distances on the
// domain.
bool is_partial_automorphism(const PartialAutomorphism& p);

// Would p extended by a->b still be a partial automorphism? Requires a
// undefined, b not in range.
bool pair_compatible(const PartialAutomorphism& p, int a, int b);

// p after q: domain {a in dom q : q(a) in dom p}.
PartialAutomorphism compose(const PartialAutomorphism& p,
                            const PartialAutomorphism& q);

// dom(q) subset of dom(p) and agreement on dom(q).
bool extends(const PartialAutomorphism& p, const PartialAutomorphism& q);

// The unique extension with dom = acl(dom), rng = acl(rng). Identity on the
// no-algebraicity classes; adds equivalence partners for EqPairs. Throws when
// the ambient lacks a partner needed for the closure.
PartialAutomorphism close_under_acl(const PartialAutomorphism& p);

// p plus b->c when compatible, closed under acl. Throws otherwise.
PartialAutomorphism one_point_extend(const PartialAutomorphism& p, int b, int c);

struct OrbitResult {
    std::vector<int> points;  // sorted
    bool closed = true;       // false: some reduced word within the bound is
                              // undefined at the start point
};

// Values of all reduced words of length <= word_bound at a, with a boundary
// flag when the scan falls off a domain.
OrbitResult orbit(const std::vector<PartialAutomorphism>& maps, int a,
                  int word_bound);

}  // namespace simlab

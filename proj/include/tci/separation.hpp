#pragma once

#include <optional>

#include "tci/graph.hpp"
#include "tci/separoid.hpp"

namespace tci {

struct SepQuery {
  NodeSet a, b, c;
};

struct SepVerdict {
  bool separated = true;
  std::optional<Walk> witness;  // a C-open walk when not separated
};

// Direct evaluation of the blocking table on one walk.
bool walk_blocked(const Cdmg& g, const Walk& w, const NodeSet& c);

// A ⊥ B | C: every walk from A to J ∪ B is blocked by C. With include_inputs=false
// the target set is B alone.
SepVerdict sigma_separated(const Cdmg& g, const SepQuery& q, bool include_inputs = true);

// Walk-state search on the original graph; independent of acyclification.
bool sigma_separated_oracle(const Cdmg& g, const SepQuery& q, bool include_inputs = true);

// Shortest C-open walk from A to the targets, found on the original graph.
std::optional<Walk> open_walk(const Cdmg& g, NodeMask a, NodeMask b, NodeMask c,
                              bool include_inputs = true);

// m-separation on an acyclic graph. Throws Precondition on cyclic input.
bool d_separated(const Cdmg& g, const SepQuery& q, bool include_inputs = true);

// Mask-level m-separation reachability; g is assumed acyclic.
bool m_separated_masks(const Cdmg& g, NodeMask a, NodeMask b, NodeMask c, bool include_inputs);

// Caches the acyclification for repeated σ-queries on one graph.
class SigmaSeparator {
 public:
  explicit SigmaSeparator(const Cdmg& g) : acyclic_(acyclify(g)) {}
  bool operator()(NodeMask a, NodeMask b, NodeMask c, bool include_inputs = true) const {
    return m_separated_masks(acyclic_, a, b, c, include_inputs);
  }
  const Cdmg& acyclified() const { return acyclic_; }

 private:
  Cdmg acyclic_;
};

// Node subsets of g (at most 8 nodes) under union and inclusion, with tau = J,
// kappa = ∅ and σ-separation as the relation.
SeparoidInstance sigma_separoid(const Cdmg& g);

}  // namespace tci

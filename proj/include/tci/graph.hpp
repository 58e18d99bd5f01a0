#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tci {

using NodeId = std::string;
using NodeSet = std::set<NodeId>;
using EdgeSet = std::set<std::pair<NodeId, NodeId>>;

// Internal node sets are bitmasks over the sorted node list.
using NodeMask = std::uint64_t;
inline constexpr std::size_t kMaxNodes = 64;

inline NodeMask bit(int i) { return NodeMask{1} << i; }

// Orientation of a walk step from nodes[i] to nodes[i+1].
enum class EdgeMark { Forward, Backward, Bidirected };

struct Walk {
  std::vector<NodeId> nodes;
  std::vector<EdgeMark> edges;

  // Renders as "a -> b <- c <-> d".
  std::string to_string() const;
  bool operator==(const Walk&) const = default;
};

// Conditional directed mixed graph: input nodes never receive arrowheads.
// Immutable; nodes are indexed in lexicographic order of their names.
class Cdmg {
 public:
  Cdmg() = default;
  Cdmg(const NodeSet& inputs, const NodeSet& outputs, const EdgeSet& directed,
       const EdgeSet& bidirected);

  std::size_t size() const { return names_.size(); }
  const std::vector<NodeId>& nodes() const { return names_; }
  NodeSet inputs() const { return names(inputs_); }
  NodeSet outputs() const { return names(all_mask() & ~inputs_); }
  EdgeSet directed_edges() const;
  EdgeSet bidirected_edges() const;

  bool contains(const NodeId& v) const { return index_.count(v) != 0; }
  int index(const NodeId& v) const;
  const NodeId& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
  NodeMask mask(const NodeSet& s) const;
  NodeSet names(NodeMask m) const;

  NodeMask all_mask() const;
  NodeMask input_mask() const { return inputs_; }
  NodeMask parents_mask(int v) const { return pa_[v]; }
  NodeMask children_mask(int v) const { return ch_[v]; }
  NodeMask spouses_mask(int v) const { return sp_[v]; }
  NodeMask scc_mask(int v) const { return scc_[v]; }

  bool operator==(const Cdmg& other) const {
    return names_ == other.names_ && inputs_ == other.inputs_ && pa_ == other.pa_ &&
           sp_ == other.sp_;
  }

  // Builds a graph from index-level data; names must be sorted and distinct.
  static Cdmg from_masks(std::vector<NodeId> names, NodeMask inputs, std::vector<NodeMask> parents,
                         std::vector<NodeMask> spouses);

 private:
  void finalize();

  std::vector<NodeId> names_;
  std::map<NodeId, int> index_;
  NodeMask inputs_ = 0;
  std::vector<NodeMask> pa_, ch_, sp_, scc_;
};

NodeSet parents(const Cdmg& g, const NodeId& v);
NodeSet children(const Cdmg& g, const NodeId& v);
NodeSet ancestors(const Cdmg& g, const NodeSet& a);
NodeSet descendants(const Cdmg& g, const NodeSet& a);
NodeSet strongly_connected(const Cdmg& g, const NodeId& v);
bool is_acyclic(const Cdmg& g);

// Inputs first, then outputs; ties broken by node name. Empty on cyclic input.
std::optional<std::vector<NodeId>> topological_order(const Cdmg& g);

NodeMask ancestors_mask(const Cdmg& g, NodeMask a);
NodeMask descendants_mask(const Cdmg& g, NodeMask a);

inline constexpr const char* kSoftPrefix = "I:";
std::string soft_node_name(const NodeId& v);

Cdmg hard_intervene(const Cdmg& g, const NodeSet& w);
Cdmg soft_extend(const Cdmg& g, const NodeSet& w);
Cdmg marginalize_graph(const Cdmg& g, const NodeSet& w);
Cdmg acyclify(const Cdmg& g);

}  // namespace tci

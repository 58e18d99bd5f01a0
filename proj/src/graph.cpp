#include "tci/graph.hpp"

#include <algorithm>
#include <bit>
#include <queue>

#include "tci/error.hpp"

namespace tci {

namespace {

template <typename F>
void for_each_bit(NodeMask m, F&& f) {
  while (m) {
    int i = std::countr_zero(m);
    f(i);
    m &= m - 1;
  }
}

}  // namespace

std::string Walk::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) {
      switch (edges[i - 1]) {
        case EdgeMark::Forward: out += " -> "; break;
        case EdgeMark::Backward: out += " <- "; break;
        case EdgeMark::Bidirected: out += " <-> "; break;
      }
    }
    out += nodes[i];
  }
  return out;
}

Cdmg::Cdmg(const NodeSet& inputs, const NodeSet& outputs, const EdgeSet& directed,
           const EdgeSet& bidirected) {
  for (const auto& v : inputs) {
    if (outputs.count(v)) throw Error(ErrorCode::InvalidArgument, "node '" + v + "' is both input and output");
  }
  std::set<NodeId> all(inputs.begin(), inputs.end());
  all.insert(outputs.begin(), outputs.end());
  if (all.size() > kMaxNodes) {
    throw Error(ErrorCode::InvalidArgument, "graphs are limited to 64 nodes");
  }
  for (const auto& v : all) {
    if (v.empty()) throw Error(ErrorCode::InvalidNode, "node names must be nonempty");
  }
  names_.assign(all.begin(), all.end());
  for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = static_cast<int>(i);
  pa_.assign(names_.size(), 0);
  sp_.assign(names_.size(), 0);
  for (const auto& v : inputs) inputs_ |= bit(index(v));
  for (const auto& [a, b] : directed) {
    int ia = index(a), ib = index(b);
    if (inputs_ & bit(ib)) {
      throw Error(ErrorCode::InvalidArgument, "directed edge " + a + " -> " + b + " points into an input node");
    }
    pa_[ib] |= bit(ia);
  }
  for (const auto& [a, b] : bidirected) {
    int ia = index(a), ib = index(b);
    if (ia == ib) throw Error(ErrorCode::InvalidArgument, "bidirected self-loop at '" + a + "'");
    if ((inputs_ & bit(ia)) || (inputs_ & bit(ib))) {
      throw Error(ErrorCode::InvalidArgument, "bidirected edge " + a + " <-> " + b + " touches an input node");
    }
    sp_[ia] |= bit(ib);
    sp_[ib] |= bit(ia);
  }
  finalize();
}

Cdmg Cdmg::from_masks(std::vector<NodeId> names, NodeMask inputs, std::vector<NodeMask> parents,
                      std::vector<NodeMask> spouses) {
  Cdmg g;
  g.names_ = std::move(names);
  for (std::size_t i = 0; i < g.names_.size(); ++i) g.index_[g.names_[i]] = static_cast<int>(i);
  g.inputs_ = inputs;
  g.pa_ = std::move(parents);
  g.sp_ = std::move(spouses);
  g.finalize();
  return g;
}

void Cdmg::finalize() {
  const std::size_t n = names_.size();
  ch_.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for_each_bit(pa_[v], [&](int p) { ch_[p] |= bit(static_cast<int>(v)); });
  }
  // Sc(v) = Anc(v) ∩ Desc(v) over directed edges.
  scc_.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (scc_[v]) continue;
    NodeMask start = bit(static_cast<int>(v));
    NodeMask anc = ancestors_mask(*this, start);
    NodeMask desc = descendants_mask(*this, start);
    NodeMask comp = anc & desc;
    for_each_bit(comp, [&](int u) { scc_[u] = comp; });
  }
}

int Cdmg::index(const NodeId& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) throw Error(ErrorCode::InvalidNode, "unknown node '" + v + "'");
  return it->second;
}

NodeMask Cdmg::mask(const NodeSet& s) const {
  NodeMask m = 0;
  for (const auto& v : s) m |= bit(index(v));
  return m;
}

NodeSet Cdmg::names(NodeMask m) const {
  NodeSet out;
  for_each_bit(m, [&](int i) { out.insert(names_[i]); });
  return out;
}

NodeMask Cdmg::all_mask() const {
  return names_.size() == 64 ? ~NodeMask{0} : (bit(static_cast<int>(names_.size())) - 1);
}

EdgeSet Cdmg::directed_edges() const {
  EdgeSet out;
  for (std::size_t v = 0; v < names_.size(); ++v) {
    for_each_bit(pa_[v], [&](int p) { out.emplace(names_[p], names_[v]); });
  }
  return out;
}

EdgeSet Cdmg::bidirected_edges() const {
  EdgeSet out;
  for (std::size_t v = 0; v < names_.size(); ++v) {
    for_each_bit(sp_[v], [&](int u) {
      if (static_cast<std::size_t>(u) > v) out.emplace(names_[v], names_[u]);
    });
  }
  return out;
}

NodeMask ancestors_mask(const Cdmg& g, NodeMask a) {
  NodeMask seen = a, frontier = a;
  while (frontier) {
    NodeMask next = 0;
    for_each_bit(frontier, [&](int v) { next |= g.parents_mask(v); });
    frontier = next & ~seen;
    seen |= next;
  }
  return seen;
}

NodeMask descendants_mask(const Cdmg& g, NodeMask a) {
  NodeMask seen = a, frontier = a;
  while (frontier) {
    NodeMask next = 0;
    for_each_bit(frontier, [&](int v) { next |= g.children_mask(v); });
    frontier = next & ~seen;
    seen |= next;
  }
  return seen;
}

NodeSet parents(const Cdmg& g, const NodeId& v) { return g.names(g.parents_mask(g.index(v))); }
NodeSet children(const Cdmg& g, const NodeId& v) { return g.names(g.children_mask(g.index(v))); }

NodeSet ancestors(const Cdmg& g, const NodeSet& a) { return g.names(ancestors_mask(g, g.mask(a))); }

NodeSet descendants(const Cdmg& g, const NodeSet& a) {
  return g.names(descendants_mask(g, g.mask(a)));
}

NodeSet strongly_connected(const Cdmg& g, const NodeId& v) {
  return g.names(g.scc_mask(g.index(v)));
}

bool is_acyclic(const Cdmg& g) {
  for (std::size_t v = 0; v < g.size(); ++v) {
    int i = static_cast<int>(v);
    if (g.scc_mask(i) != bit(i) || (g.parents_mask(i) & bit(i))) return false;
  }
  return true;
}

std::optional<std::vector<NodeId>> topological_order(const Cdmg& g) {
  const int n = static_cast<int>(g.size());
  std::vector<NodeId> order;
  std::vector<int> indegree(g.size(), 0);
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < n; ++v) {
    indegree[v] = std::popcount(g.parents_mask(v));
    if (g.input_mask() & bit(v)) order.push_back(g.name(v));
  }
  for (int v = 0; v < n; ++v) {
    if (g.input_mask() & bit(v)) {
      for_each_bit(g.children_mask(v), [&](int c) { --indegree[c]; });
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!(g.input_mask() & bit(v)) && indegree[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(g.name(v));
    for_each_bit(g.children_mask(v), [&](int c) {
      if (--indegree[c] == 0) ready.push(c);
    });
  }
  if (order.size() != g.size()) return std::nullopt;
  return order;
}

std::string soft_node_name(const NodeId& v) { return std::string(kSoftPrefix) + v; }

Cdmg hard_intervene(const Cdmg& g, const NodeSet& w) {
  NodeMask wm = g.mask(w);
  std::vector<NodeMask> pa(g.size()), sp(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    int i = static_cast<int>(v);
    if (wm & bit(i)) continue;
    pa[v] = g.parents_mask(i);
    sp[v] = g.spouses_mask(i) & ~wm;
  }
  return Cdmg::from_masks(g.nodes(), g.input_mask() | wm, std::move(pa), std::move(sp));
}

Cdmg soft_extend(const Cdmg& g, const NodeSet& w) {
  g.mask(w);
  NodeSet inputs = g.inputs();
  EdgeSet directed = g.directed_edges();
  for (const auto& v : w) {
    NodeId iv = soft_node_name(v);
    if (g.contains(iv) || w.count(iv)) {
      throw Error(ErrorCode::Collision, "node '" + iv + "' already exists");
    }
    inputs.insert(iv);
    if (!(g.input_mask() & bit(g.index(v)))) directed.emplace(iv, v);
  }
  return Cdmg(inputs, g.outputs(), directed, g.bidirected_edges());
}

Cdmg marginalize_graph(const Cdmg& g, const NodeSet& w) {
  NodeMask wm = g.mask(w);
  if (wm & g.input_mask()) {
    throw Error(ErrorCode::InvalidArgument, "only output nodes can be marginalized");
  }
  const int n = static_cast<int>(g.size());
  // Latent reach of v: W-nodes with a directed walk into v whose interior lies in W.
  std::vector<NodeMask> reach(g.size(), 0);
  for (int v = 0; v < n; ++v) {
    NodeMask seen = g.parents_mask(v) & wm, frontier = seen;
    while (frontier) {
      NodeMask next = 0;
      for_each_bit(frontier, [&](int u) { next |= g.parents_mask(u) & wm; });
      frontier = next & ~seen;
      seen |= next;
    }
    reach[v] = seen;
  }
  std::vector<NodeId> names;
  std::vector<int> old_of_new;
  for (int v = 0; v < n; ++v) {
    if (!(wm & bit(v))) {
      names.push_back(g.name(v));
      old_of_new.push_back(v);
    }
  }
  const int m = static_cast<int>(names.size());
  auto remap = [&](NodeMask old) {
    NodeMask out = 0;
    for (int k = 0; k < m; ++k) {
      if (old & bit(old_of_new[k])) out |= bit(k);
    }
    return out;
  };
  std::vector<NodeMask> pa(names.size(), 0), sp(names.size(), 0);
  NodeMask inputs = 0;
  for (int k = 0; k < m; ++k) {
    int v = old_of_new[k];
    if (g.input_mask() & bit(v)) inputs |= bit(k);
    NodeMask direct = g.parents_mask(v);
    for_each_bit(reach[v], [&](int x) { direct |= g.parents_mask(x); });
    pa[k] = remap(direct & ~wm);
  }
  for (int a = 0; a < m; ++a) {
    int va = old_of_new[a];
    if (g.input_mask() & bit(va)) continue;
    for (int b = a + 1; b < m; ++b) {
      int vb = old_of_new[b];
      if (g.input_mask() & bit(vb)) continue;
      bool linked = (reach[va] & reach[vb]) != 0;
      NodeMask ends_a = reach[va] | bit(va);
      NodeMask ends_b = reach[vb] | bit(vb);
      for_each_bit(ends_a, [&](int p) {
        if (g.spouses_mask(p) & ends_b) linked = true;
      });
      if (linked) {
        sp[a] |= bit(b);
        sp[b] |= bit(a);
      }
    }
  }
  return Cdmg::from_masks(std::move(names), inputs, std::move(pa), std::move(sp));
}

Cdmg acyclify(const Cdmg& g) {
  const int n = static_cast<int>(g.size());
  std::vector<NodeMask> pa(g.size(), 0), sp(g.size(), 0);
  for (int w = 0; w < n; ++w) {
    NodeMask into_component = 0;
    for_each_bit(g.scc_mask(w), [&](int x) { into_component |= g.parents_mask(x); });
    pa[w] = into_component & ~g.scc_mask(w);
  }
  for (int v = 0; v < n; ++v) {
    NodeMask linked = g.scc_mask(v);
    for_each_bit(g.scc_mask(v), [&](int x) {
      for_each_bit(g.spouses_mask(x), [&](int y) { linked |= g.scc_mask(y); });
    });
    sp[v] = linked & ~bit(v);
  }
  return Cdmg::from_masks(g.nodes(), g.input_mask(), std::move(pa), std::move(sp));
}

}  // namespace tci

#include "tci/separation.hpp"

#include <bit>
#include <deque>
#include <memory>
#include <stdexcept>

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

template <typename Adj>
NodeMask neighbours_union(NodeMask from, Adj&& adj) {
  NodeMask out = 0;
  for_each_bit(from, [&](int v) { out |= adj(v); });
  return out;
}

enum Arrival : int { kStart = 0, kTail = 1, kHead = 2 };

// Decides whether a walk may continue through v given the arrival mark, the
// departure mark, and whether the neighbours on each side share v's SCC.
bool passes(bool in_c, int arrival, bool out_head, bool prev_same, bool next_same) {
  if (arrival == kStart) return true;
  bool in_head = arrival == kHead;
  if (in_head && out_head) return in_c;
  if (!in_c) return true;
  if (!in_head && !prev_same) return false;
  if (!out_head && !next_same) return false;
  return true;
}

}  // namespace

bool walk_blocked(const Cdmg& g, const Walk& w, const NodeSet& c) {
  if (w.nodes.empty() || w.edges.size() + 1 != w.nodes.size()) {
    throw Error(ErrorCode::InvalidWalk, "walk must have one more node than edges");
  }
  std::vector<int> idx;
  for (const auto& v : w.nodes) {
    if (!g.contains(v)) throw Error(ErrorCode::InvalidWalk, "walk node '" + v + "' not in graph");
    idx.push_back(g.index(v));
  }
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    int a = idx[i], b = idx[i + 1];
    bool ok = false;
    switch (w.edges[i]) {
      case EdgeMark::Forward: ok = (g.parents_mask(b) & bit(a)) != 0; break;
      case EdgeMark::Backward: ok = (g.parents_mask(a) & bit(b)) != 0; break;
      case EdgeMark::Bidirected: ok = (g.spouses_mask(a) & bit(b)) != 0; break;
    }
    if (!ok) throw Error(ErrorCode::InvalidWalk, "walk step " + w.nodes[i] + " / " + w.nodes[i + 1] + " is not an edge");
  }
  NodeMask cm = g.mask(c);
  if ((cm & bit(idx.front())) || (cm & bit(idx.back()))) return true;
  for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
    int v = idx[k];
    bool in_head = w.edges[k - 1] != EdgeMark::Backward;
    bool out_head = w.edges[k] != EdgeMark::Forward;
    bool prev_same = (g.scc_mask(v) & bit(idx[k - 1])) != 0;
    bool next_same = (g.scc_mask(v) & bit(idx[k + 1])) != 0;
    if (!passes((cm & bit(v)) != 0, in_head ? kHead : kTail, out_head, prev_same, next_same)) {
      return true;
    }
  }
  return false;
}

bool m_separated_masks(const Cdmg& g, NodeMask a, NodeMask b, NodeMask c, bool include_inputs) {
  NodeMask targets = (include_inputs ? (b | g.input_mask()) : b) & ~c;
  NodeMask start = a & ~c;
  if (start & targets) return false;
  auto pa = [&](int v) { return g.parents_mask(v); };
  auto ch = [&](int v) { return g.children_mask(v); };
  auto sp = [&](int v) { return g.spouses_mask(v); };
  NodeMask tail_reached = 0, head_reached = 0;
  while (true) {
    NodeMask emit_tail = start | ((tail_reached | head_reached) & ~c);
    NodeMask emit_head = start | (tail_reached & ~c) | (head_reached & c);
    NodeMask new_head = head_reached | neighbours_union(emit_tail, ch) | neighbours_union(emit_head, sp);
    NodeMask new_tail = tail_reached | neighbours_union(emit_head, pa);
    if ((new_head | new_tail) & targets) return false;
    if (new_head == head_reached && new_tail == tail_reached) return true;
    head_reached = new_head;
    tail_reached = new_tail;
  }
}

std::optional<Walk> open_walk(const Cdmg& g, NodeMask a, NodeMask b, NodeMask c,
                              bool include_inputs) {
  NodeMask targets = (include_inputs ? (b | g.input_mask()) : b) & ~c;
  const int n = static_cast<int>(g.size());
  // State: node, arrival mark, whether the previous node shares the node's SCC.
  auto state_id = [](int v, int arrival, bool same) { return (v * 3 + arrival) * 2 + (same ? 1 : 0); };
  std::vector<int> pred(static_cast<std::size_t>(n) * 6, -2);
  std::vector<EdgeMark> pred_mark(static_cast<std::size_t>(n) * 6, EdgeMark::Forward);
  std::deque<int> queue;
  for (int v = 0; v < n; ++v) {
    if ((a & bit(v)) && !(c & bit(v))) {
      int s = state_id(v, kStart, false);
      pred[s] = -1;
      queue.push_back(s);
    }
  }
  auto build = [&](int s) {
    Walk w;
    std::vector<int> chain;
    for (int cur = s; cur != -1; cur = pred[cur]) chain.push_back(cur);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      w.nodes.push_back(g.name(*it / 6));
      if (it != chain.rbegin()) w.edges.push_back(pred_mark[*it]);
    }
    return w;
  };
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    int v = s / 6, arrival = (s / 2) % 3;
    bool prev_same = s % 2 == 1;
    if (targets & bit(v)) return build(s);
    bool in_c = (c & bit(v)) != 0;
    for (int u = 0; u < n; ++u) {
      bool next_same = (g.scc_mask(v) & bit(u)) != 0;
      // v -> u, v <- u, v <-> u
      struct Step { bool exists; bool out_head; int arrive; EdgeMark mark; };
      Step steps[3] = {
          {(g.children_mask(v) & bit(u)) != 0, false, kHead, EdgeMark::Forward},
          {(g.parents_mask(v) & bit(u)) != 0, true, kTail, EdgeMark::Backward},
          {(g.spouses_mask(v) & bit(u)) != 0, true, kHead, EdgeMark::Bidirected},
      };
      for (const auto& st : steps) {
        if (!st.exists) continue;
        if (!passes(in_c, arrival, st.out_head, prev_same, next_same)) continue;
        int t = state_id(u, st.arrive, next_same);
        if (pred[t] != -2) continue;
        pred[t] = s;
        pred_mark[t] = st.mark;
        queue.push_back(t);
      }
    }
  }
  return std::nullopt;
}

bool sigma_separated_oracle(const Cdmg& g, const SepQuery& q, bool include_inputs) {
  return !open_walk(g, g.mask(q.a), g.mask(q.b), g.mask(q.c), include_inputs).has_value();
}

SepVerdict sigma_separated(const Cdmg& g, const SepQuery& q, bool include_inputs) {
  NodeMask a = g.mask(q.a), b = g.mask(q.b), c = g.mask(q.c);
  SepVerdict verdict;
  verdict.separated = m_separated_masks(acyclify(g), a, b, c, include_inputs);
  if (!verdict.separated) {
    verdict.witness = open_walk(g, a, b, c, include_inputs);
    if (!verdict.witness) throw std::logic_error("acyclified graph reports an open walk the original lacks");
  }
  return verdict;
}

bool d_separated(const Cdmg& g, const SepQuery& q, bool include_inputs) {
  if (!is_acyclic(g)) throw Error(ErrorCode::Precondition, "d-separation requires an acyclic graph");
  return m_separated_masks(g, g.mask(q.a), g.mask(q.b), g.mask(q.c), include_inputs);
}

}  // namespace tci

namespace tci {

SeparoidInstance sigma_separoid(const Cdmg& g) {
  if (g.size() > 8) throw Error(ErrorCode::InvalidArgument, "separoid carrier limited to 8 nodes");
  SeparoidInstance inst = subset_lattice(g.nodes());
  const std::size_t n = inst.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) inst.order[a * n + b] = (a & ~b) == 0;
  inst.tau = static_cast<std::size_t>(g.input_mask());
  inst.kappa = 0;
  auto sep = std::make_shared<SigmaSeparator>(g);
  inst.relation = [sep](std::size_t a, std::size_t b, std::size_t c) { return (*sep)(a, b, c); };
  return inst;
}

}  // namespace tci

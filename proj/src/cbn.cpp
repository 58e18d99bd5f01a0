#include "tci/cbn.hpp"

#include <algorithm>
#include <numeric>

#include "tci/error.hpp"
#include "tci/tci.hpp"

namespace tci {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidModel, what); }

NodeSet unite(NodeSet a, const NodeSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

NodeSet minus(NodeSet a, const NodeSet& b) {
  for (const auto& v : b) a.erase(v);
  return a;
}

bool disjoint(const NodeSet& a, const NodeSet& b) {
  for (const auto& v : a)
    if (b.count(v)) return false;
  return true;
}

std::string brace(const NodeSet& s) {
  std::string out = "{";
  for (const auto& v : s) out += (out.size() > 1 ? "," : "") + v;
  return out + "}";
}

NodeSet observed_outputs(const Cbn& m) { return minus(m.graph.outputs(), m.latent); }

std::vector<NodeSet> subsets(const NodeSet& s) {
  std::vector<NodeId> items(s.begin(), s.end());
  std::vector<NodeSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << items.size()); ++mask) {
    NodeSet sub;
    for (std::size_t i = 0; i < items.size(); ++i)
      if ((mask >> i) & 1) sub.insert(items[i]);
    out.push_back(std::move(sub));
  }
  return out;
}

TransRv project(const TransSpace& ts, const NodeSet& nodes) { return TransRv::projection(ts.domain(), nodes); }

// Q read on a larger source space.
Kernel lift_source(const Kernel& q, const Space& source) {
  auto to_q = projection_map(source, q.source());
  std::vector<Rational> table;
  table.reserve(source.size() * q.target().size());
  for (std::size_t s = 0; s < source.size(); ++s)
    for (std::size_t x = 0; x < q.target().size(); ++x) table.push_back(q.at(to_q[s], x));
  return make_kernel_unchecked(source, q.target(), std::move(table));
}

// Checks that q is a version of P(X_target | X_given, do(inputs of model)).
VersionCheck check_version(const std::string& label, const Kernel& q, const Cbn& model, const NodeSet& target,
                           const NodeSet& given) {
  VersionCheck out;
  out.label = label;
  Kernel joint = marginalize(observational_kernel(model), unite(target, given));
  Kernel base = marginalize(joint, given);
  out.product = product(q, base) == joint;
  Kernel conditional = disintegrate(joint, given);
  out.almost_everywhere = agree_almost_everywhere(lift_source(q, conditional.source()), conditional, base);
  return out;
}

void check_query_sets(const Cbn& m, const std::vector<std::pair<std::string, const NodeSet*>>& observed,
                      const NodeSet& d) {
  const NodeSet v = observed_outputs(m);
  std::vector<const NodeSet*> all;
  for (const auto& [name, set] : observed) {
    m.graph.mask(*set);
    for (const auto& x : *set)
      if (!v.count(x)) throw Error(ErrorCode::InvalidQuery, name + " must contain observed output nodes only, not '" + x + "'");
    all.push_back(set);
  }
  m.graph.mask(d);
  for (const auto& x : d)
    if (m.latent.count(x)) throw Error(ErrorCode::InvalidQuery, "d must not contain latent node '" + x + "'");
  all.push_back(&d);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (!disjoint(*all[i], *all[j])) throw Error(ErrorCode::InvalidQuery, "query sets must be pairwise disjoint");
}

NodeSet soft_names(const NodeSet& b) {
  NodeSet out;
  for (const auto& v : b) out.insert(soft_node_name(v));
  return out;
}

bool all_pass(const std::vector<VersionCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const VersionCheck& c) { return c.product && c.almost_everywhere; });
}

}  // namespace

Space node_space(const Cbn& m, const NodeSet& nodes) {
  std::vector<FiniteVar> vars;
  for (const auto& v : nodes) {
    auto it = m.spaces.find(v);
    if (it == m.spaces.end()) throw Error(ErrorCode::InvalidNode, "no space for node '" + v + "'");
    vars.push_back(it->second);
  }
  return Space(std::move(vars));
}

void validate_cbn(const Cbn& m) {
  const Cdmg& g = m.graph;
  if (!is_acyclic(g)) invalid("graph must be acyclic");
  if (!g.bidirected_edges().empty()) invalid("graph must not have bidirected edges");
  const NodeSet outputs = g.outputs();
  for (const auto& u : m.latent)
    if (!outputs.count(u)) invalid("latent node '" + u + "' is not an output node");
  if (m.spaces.size() != g.size()) invalid("every node needs exactly one space");
  for (const auto& v : g.nodes()) {
    auto it = m.spaces.find(v);
    if (it == m.spaces.end()) invalid("no space for node '" + v + "'");
    if (it->second.name != v) invalid("space of '" + v + "' must be named after the node");
    const auto& outs = it->second.outcomes;
    if (outs.empty()) invalid("space of '" + v + "' has no outcomes");
    std::set<std::string> distinct(outs.begin(), outs.end());
    if (distinct.size() != outs.size()) invalid("space of '" + v + "' repeats an outcome");
  }
  if (m.kernels.size() != outputs.size()) invalid("every output node needs exactly one kernel");
  for (const auto& v : outputs) {
    auto it = m.kernels.find(v);
    if (it == m.kernels.end()) invalid("no kernel for node '" + v + "'");
    if (!(it->second.source() == node_space(m, parents(g, v)))) {
      invalid("kernel of '" + v + "' must have the parents of '" + v + "' as source");
    }
    if (!(it->second.target() == node_space(m, {v}))) invalid("kernel of '" + v + "' must have '" + v + "' as target");
  }
}

Kernel joint_kernel(const Cbn& m, const std::vector<NodeId>& order) {
  validate_cbn(m);
  const NodeSet outputs = m.graph.outputs();
  std::set<NodeId> seen;
  for (const auto& v : order) {
    if (!outputs.count(v) || !seen.insert(v).second) invalid("order must list each output node once");
    for (const auto& p : parents(m.graph, v)) {
      if (outputs.count(p) && !seen.count(p)) invalid("order is not topological at '" + v + "'");
    }
  }
  if (seen.size() != outputs.size()) invalid("order must list each output node once");
  Space inputs = node_space(m, m.graph.inputs());
  Kernel acc(inputs, Space(), std::vector<Rational>(inputs.size(), Rational(1)));
  for (const auto& v : order) acc = product(m.kernels.at(v), acc);
  return acc;
}

Kernel joint_kernel(const Cbn& m) {
  auto order = topological_order(m.graph);
  if (!order) invalid("graph must be acyclic");
  std::vector<NodeId> outputs;
  for (const auto& v : *order)
    if (!m.graph.inputs().count(v)) outputs.push_back(v);
  return joint_kernel(m, outputs);
}

Kernel observational_kernel(const Cbn& m) { return marginalize(joint_kernel(m), observed_outputs(m)); }

Cdmg observed_graph(const Cbn& m) { return marginalize_graph(m.graph, m.latent); }

Cbn hard_intervene_cbn(const Cbn& m, const NodeSet& w) {
  m.graph.mask(w);
  for (const auto& v : w)
    if (m.latent.count(v)) throw Error(ErrorCode::InvalidArgument, "cannot intervene on latent node '" + v + "'");
  Cbn out = m;
  out.graph = hard_intervene(m.graph, w);
  for (const auto& v : w) out.kernels.erase(v);
  return out;
}

Cbn soft_intervene_cbn(const Cbn& m, const NodeSet& w) {
  m.graph.mask(w);
  const NodeSet v_nodes = observed_outputs(m);
  for (const auto& v : w) {
    if (!v_nodes.count(v)) throw Error(ErrorCode::InvalidArgument, "soft interventions need observed output nodes");
    const auto& outs = m.spaces.at(v).outcomes;
    if (std::find(outs.begin(), outs.end(), kStarOutcome) != outs.end()) {
      throw Error(ErrorCode::Collision, "outcome '" + std::string(kStarOutcome) + "' already used by '" + v + "'");
    }
  }
  Cbn out = m;
  out.graph = soft_extend(m.graph, w);
  for (const auto& v : w) {
    const NodeId iv = soft_node_name(v);
    FiniteVar ivar{iv, m.spaces.at(v).outcomes};
    ivar.outcomes.push_back(kStarOutcome);
    out.spaces[iv] = ivar;
    const Kernel& old = m.kernels.at(v);
    Space source = node_space(out, parents(out.graph, v));
    auto to_old = projection_map(source, old.source());
    const std::size_t ipos = static_cast<std::size_t>(source.position(iv));
    const std::size_t nx = old.target().size(), star = nx;
    std::vector<Rational> table(source.size() * nx);
    for (std::size_t s = 0; s < source.size(); ++s) {
      std::size_t i = source.digit(s, ipos);
      for (std::size_t x = 0; x < nx; ++x) table[s * nx + x] = i == star ? old.at(to_old[s], x) : Rational(i == x ? 1 : 0);
    }
    out.kernels[v] = make_kernel_unchecked(source, old.target(), std::move(table));
  }
  return out;
}

Cbn marginalize_cbn(const Cbn& m, const NodeSet& w) {
  m.graph.mask(w);
  for (const auto& v : w)
    if (m.graph.inputs().count(v)) throw Error(ErrorCode::InvalidArgument, "cannot marginalize input node '" + v + "'");
  Cbn out = m;
  out.latent = unite(m.latent, w);
  return out;
}

GmpReport gmp_verify(const Cbn& m, const GmpOptions& options) {
  validate_cbn(m);
  GmpReport report;
  const Cdmg g = observed_graph(m);
  const TransSpace ts(observational_kernel(m));
  const SigmaSeparator sep(g);
  std::map<NodeMask, TransRv> rv_cache;
  auto rv = [&](NodeMask mask) -> const TransRv& {
    auto it = rv_cache.find(mask);
    if (it == rv_cache.end()) it = rv_cache.emplace(mask, project(ts, g.names(mask))).first;
    return it->second;
  };
  // Returns false once the check budget is spent.
  auto visit = [&](NodeMask a, NodeMask b, NodeMask c) {
    if (report.triples >= options.max_checks) {
      report.budget_exceeded = true;
      return false;
    }
    ++report.triples;
    if (!sep(a, b, c)) return true;
    ++report.separated;
    SepQuery q{g.names(a), g.names(b), g.names(c)};
    CiVerdict v = tci_check(ts, rv(a), rv(b), rv(c));
    if (!v.independent) {
      report.violations.push_back(q);
    } else if (options.keep_witnesses) {
      report.witnesses.push_back({q, *v.witness});
    }
    return true;
  };
  const std::size_t n = g.size();
  switch (options.scope) {
    case GmpOptions::Scope::Explicit:
      for (const auto& q : options.triples) {
        if (!disjoint(q.a, q.b) || !disjoint(q.a, q.c) || !disjoint(q.b, q.c)) {
          throw Error(ErrorCode::InvalidQuery, "triples must be pairwise disjoint");
        }
        if (!visit(g.mask(q.a), g.mask(q.b), g.mask(q.c))) break;
      }
      return report;
    case GmpOptions::Scope::All:
      if (n <= options.budget_nodes) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= 4;
        for (std::size_t code = 0; code < total; ++code) {
          NodeMask parts[4] = {0, 0, 0, 0};
          std::size_t r = code;
          for (std::size_t i = 0; i < n; ++i, r /= 4) parts[r % 4] |= bit(static_cast<int>(i));
          if (parts[1] == 0 || parts[2] == 0) continue;
          if (!visit(parts[1], parts[2], parts[3])) break;
        }
        return report;
      }
      report.budget_exceeded = true;
      [[fallthrough]];
    case GmpOptions::Scope::Sample: {
      report.sampled = true;
      Rng rng(options.seed);
      for (std::size_t s = 0; s < options.samples; ++s) {
        NodeMask parts[4] = {0, 0, 0, 0};
        for (std::size_t i = 0; i < n; ++i) parts[rng.below(4)] |= bit(static_cast<int>(i));
        if (parts[1] == 0 || parts[2] == 0) continue;
        if (!visit(parts[1], parts[2], parts[3])) break;
      }
      return report;
    }
  }
  return report;
}

DoReport do_calculus(const Cbn& m, int rule, const DoQuery& q) {
  validate_cbn(m);
  if (rule < 1 || rule > 3) throw Error(ErrorCode::InvalidQuery, "rule must be 1, 2 or 3");
  check_query_sets(m, {{"a", &q.a}, {"b", &q.b}, {"c", &q.c}}, q.d);
  DoReport report;
  report.rule = rule;
  const Cbn hard = hard_intervene_cbn(m, minus(q.d, m.graph.inputs()));
  const NodeSet cd = unite(q.c, q.d);
  const Cbn model = rule == 1 ? hard : soft_intervene_cbn(hard, q.b);
  const NodeSet ib = soft_names(q.b);
  SepQuery premise = rule == 1 ? SepQuery{q.a, q.b, cd} : rule == 2 ? SepQuery{q.a, ib, unite(q.b, cd)} : SepQuery{q.a, ib, cd};
  SepVerdict verdict = sigma_separated(observed_graph(model), premise);
  if (!verdict.separated) {
    report.open_walk = verdict.witness;
    return report;
  }
  report.applicable = true;
  const TransSpace ts(observational_kernel(model));
  CiVerdict ci = tci_check(ts, project(ts, premise.a), project(ts, premise.b), project(ts, premise.c));
  if (!ci.independent) return report;
  report.kernel = ci.witness;
  const std::string inputs = brace(hard.graph.inputs());
  for (const auto& sub : subsets(q.b)) {
    switch (rule) {
      case 1:
        report.checks.push_back(check_version("given " + brace(unite(sub, q.c)) + " do " + inputs, *ci.witness, hard,
                                              q.a, unite(sub, q.c)));
        break;
      case 2:
        report.checks.push_back(check_version(
            "given " + brace(unite(minus(q.b, sub), q.c)) + " do " + brace(unite(hard.graph.inputs(), sub)),
            *ci.witness, hard_intervene_cbn(hard, sub), q.a, unite(minus(q.b, sub), q.c)));
        break;
      default:
        report.checks.push_back(check_version("given " + brace(q.c) + " do " + brace(unite(hard.graph.inputs(), sub)),
                                              *ci.witness, hard_intervene_cbn(hard, sub), q.a, q.c));
        break;
    }
  }
  report.sound = all_pass(report.checks);
  return report;
}

BackdoorReport backdoor_adjust(const Cbn& m, const NodeSet& a, const NodeSet& b, const NodeSet& c, const NodeSet& f,
                               const NodeSet& d) {
  validate_cbn(m);
  check_query_sets(m, {{"a", &a}, {"b", &b}, {"c", &c}, {"f", &f}}, d);
  for (const auto& j : m.graph.inputs())
    if (!d.count(j)) throw Error(ErrorCode::InvalidQuery, "d must contain every input node");
  BackdoorReport report;
  const Cbn hard = hard_intervene_cbn(m, minus(d, m.graph.inputs()));
  const Cbn soft = soft_intervene_cbn(hard, b);
  const Cdmg g = observed_graph(soft);
  const NodeSet ib = soft_names(b), cd = unite(c, d), bfcd = unite(unite(b, f), cd);
  for (const SepQuery& premise : {SepQuery{f, ib, cd}, SepQuery{a, ib, bfcd}}) {
    SepVerdict verdict = sigma_separated(g, premise);
    if (!verdict.separated) {
      report.open_walk = verdict.witness;
      return report;
    }
  }
  report.applicable = true;
  const TransSpace ts(observational_kernel(soft));
  CiVerdict qa = tci_check(ts, project(ts, a), project(ts, ib), project(ts, bfcd));
  CiVerdict qf = tci_check(ts, project(ts, f), project(ts, ib), project(ts, cd));
  if (!qa.independent || !qf.independent) return report;
  report.adjustment = qa.witness;
  report.covariates = qf.witness;
  const Cbn with_b = hard_intervene_cbn(hard, b);
  report.checks.push_back(check_version("adjustment given " + brace(unite(f, unite(c, b))), *qa.witness, hard, a,
                                        unite(f, unite(c, b))));
  report.checks.push_back(check_version("adjustment under do " + brace(b), *qa.witness, with_b, a, unite(f, c)));
  report.checks.push_back(check_version("covariates", *qf.witness, hard, f, c));
  report.checks.push_back(check_version("covariates under do " + brace(b), *qf.witness, with_b, f, c));
  Kernel adjusted = marginalize(product(*qa.witness, *qf.witness), a);
  report.adjusted = adjusted;
  Kernel joint = marginalize(observational_kernel(with_b), unite(a, c));
  report.interventional = disintegrate(joint, c);
  report.checks.push_back(check_version("adjusted equals interventional", adjusted, with_b, a, c));
  report.sound = all_pass(report.checks);
  return report;
}

Cbn random_cbn(Rng& rng, const RandomCbnOptions& options) {
  const std::size_t n_in = rng.below(options.max_inputs + 1);
  const std::size_t n_out = 1 + rng.below(std::max<std::size_t>(options.max_outputs, 1));
  const std::size_t n_lat = rng.below(options.max_latent + 1);
  NodeSet inputs, outputs, latent;
  std::vector<NodeId> order;
  for (std::size_t i = 1; i <= n_in; ++i) inputs.insert("j" + std::to_string(i));
  for (std::size_t i = 1; i <= n_out; ++i) order.push_back("v" + std::to_string(i));
  for (std::size_t i = 1; i <= n_lat; ++i) {
    order.push_back("u" + std::to_string(i));
    latent.insert(order.back());
  }
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  outputs.insert(order.begin(), order.end());
  EdgeSet directed;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& j : inputs)
      if (rng.percent(options.edge_percent)) directed.emplace(j, order[i]);
    for (std::size_t k = 0; k < i; ++k)
      if (rng.percent(options.edge_percent)) directed.emplace(order[k], order[i]);
  }
  Cbn m;
  m.graph = Cdmg(inputs, outputs, directed, {});
  m.latent = latent;
  const std::size_t max_out = std::max<std::size_t>(options.max_outcomes, 2);
  for (const auto& v : m.graph.nodes()) m.spaces[v] = make_var(v, 2 + rng.below(max_out - 1));
  for (const auto& v : outputs) {
    m.kernels[v] = random_kernel(rng, node_space(m, parents(m.graph, v)), node_space(m, {v}),
                                 static_cast<unsigned>(options.max_denominator), options.zero_percent);
  }
  return m;
}

}  // namespace tci

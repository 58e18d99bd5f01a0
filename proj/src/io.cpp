#include "tci/io.hpp"

#include <memory>

#include "tci/error.hpp"

namespace tci {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) malformed(std::string("expected an object with key '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing key '") + key + "'");
  return *it;
}

std::string as_string(const Json& j, const char* what) {
  if (!j.is_string()) malformed(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> string_list(const Json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(as_string(e, what));
  return out;
}

NodeSet node_set(const Json& j, const char* what) {
  auto names = string_list(j, what);
  return NodeSet(names.begin(), names.end());
}

EdgeSet edge_set(const Json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be an array of pairs");
  EdgeSet out;
  for (const auto& e : j) {
    auto pair = string_list(e, what);
    if (pair.size() != 2) malformed(std::string(what) + " entries must be pairs");
    out.emplace(pair[0], pair[1]);
  }
  return out;
}

Json node_list(const NodeSet& s) { return Json(std::vector<std::string>(s.begin(), s.end())); }

Json edge_list(const EdgeSet& edges) {
  Json out = Json::array();
  for (const auto& [a, b] : edges) out.push_back({a, b});
  return out;
}

Json optional_kernel(const std::optional<Kernel>& k) { return k ? kernel_to_json(*k) : Json(nullptr); }

Json optional_walk(const std::optional<Walk>& w) { return w ? Json(w->to_string()) : Json(nullptr); }

Json query_to_json(const SepQuery& q) { return {{"a", node_list(q.a)}, {"b", node_list(q.b)}, {"c", node_list(q.c)}}; }

Json checks_to_json(const std::vector<VersionCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks)
    out.push_back({{"label", c.label}, {"product", c.product}, {"almost_everywhere", c.almost_everywhere}});
  return out;
}

std::size_t element(const Json& j, const std::vector<std::string>& labels) {
  if (j.is_number_integer()) {
    auto i = j.get<long long>();
    if (i < 0 || static_cast<std::size_t>(i) >= labels.size()) malformed("element index out of range");
    return static_cast<std::size_t>(i);
  }
  std::string name = as_string(j, "element");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == name) return i;
  malformed("unknown carrier element '" + name + "'");
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
}

Json graph_to_json(const Cdmg& g) {
  return {{"inputs", node_list(g.inputs())},
          {"outputs", node_list(g.outputs())},
          {"directed", edge_list(g.directed_edges())},
          {"bidirected", edge_list(g.bidirected_edges())}};
}

Cdmg graph_from_json(const Json& j) {
  NodeSet inputs = node_set(field(j, "inputs"), "inputs");
  NodeSet outputs = node_set(field(j, "outputs"), "outputs");
  EdgeSet directed = j.contains("directed") ? edge_set(j["directed"], "directed") : EdgeSet{};
  EdgeSet bidirected = j.contains("bidirected") ? edge_set(j["bidirected"], "bidirected") : EdgeSet{};
  return Cdmg(inputs, outputs, directed, bidirected);
}

Json space_to_json(const Space& s) {
  Json out = Json::array();
  for (const auto& v : s.vars()) out.push_back({{"name", v.name}, {"outcomes", v.outcomes}});
  return out;
}

Space space_from_json(const Json& j) {
  if (!j.is_array()) malformed("a space must be an array of variables");
  std::vector<FiniteVar> vars;
  for (const auto& v : j) vars.push_back({as_string(field(v, "name"), "name"), string_list(field(v, "outcomes"), "outcomes")});
  return Space(vars);
}

Json kernel_to_json(const Kernel& k) {
  Json rows = Json::object();
  for (std::size_t s = 0; s < k.source().size(); ++s) {
    Json row = Json::object();
    for (std::size_t t = 0; t < k.target().size(); ++t)
      if (sgn(k.at(s, t)) != 0) row[k.target().format(t)] = to_string(k.at(s, t));
    rows[k.source().format(s)] = row;
  }
  return {{"source", space_to_json(k.source())}, {"target", space_to_json(k.target())}, {"rows", rows}};
}

Kernel kernel_from_json(const Json& j) {
  Space source = space_from_json(field(j, "source"));
  Space target = space_from_json(field(j, "target"));
  const Json& rows = field(j, "rows");
  if (!rows.is_object()) malformed("rows must be an object");
  std::vector<Rational> table(source.size() * target.size());
  std::vector<bool> seen(source.size(), false);
  for (const auto& [skey, row] : rows.items()) {
    std::size_t s = source.parse(skey);
    if (seen[s]) malformed("row '" + skey + "' given twice");
    seen[s] = true;
    if (!row.is_object()) malformed("row '" + skey + "' must be an object");
    std::vector<bool> cell(target.size(), false);
    for (const auto& [tkey, value] : row.items()) {
      std::size_t t = target.parse(tkey);
      if (cell[t]) malformed("entry '" + tkey + "' given twice in row '" + skey + "'");
      cell[t] = true;
      table[s * target.size() + t] = parse_rational(as_string(value, "probability"));
    }
  }
  for (std::size_t s = 0; s < source.size(); ++s)
    if (!seen[s]) malformed("missing row '" + source.format(s) + "'");
  return Kernel(source, target, std::move(table));
}

Json trans_space_to_json(const TransSpace& ts) { return {{"kernel", kernel_to_json(ts.base())}}; }

TransSpace trans_space_from_json(const Json& j) {
  if (j.is_object() && j.contains("kernel")) return TransSpace(kernel_from_json(j["kernel"]));
  return TransSpace(kernel_from_json(j));
}

Json rv_to_json(const TransRv& x) {
  if (!x.is_deterministic()) return {{"kernel", kernel_to_json(x.kernel())}};
  Json map = Json::object();
  for (std::size_t d = 0; d < x.domain().size(); ++d) map[x.domain().format(d)] = x.codomain().format(x.map()[d]);
  return {{"codomain", space_to_json(x.codomain())}, {"map", map}};
}

TransRv rv_from_json(const Json& j, const Space& domain) {
  if (!j.is_object()) malformed("a random variable must be an object");
  if (j.contains("project")) {
    auto names = string_list(j["project"], "project");
    return TransRv::projection(domain, NameSet(names.begin(), names.end()));
  }
  if (j.contains("kernel")) {
    Kernel k = kernel_from_json(j["kernel"]);
    if (!(k.source() == domain)) throw Error(ErrorCode::SpaceMismatch, "random variable kernel must have the domain as source");
    return TransRv::from_kernel(std::move(k));
  }
  Space codomain = space_from_json(field(j, "codomain"));
  const Json& entries = field(j, "map");
  if (!entries.is_object()) malformed("map must be an object");
  std::vector<std::size_t> map(domain.size());
  std::vector<bool> seen(domain.size(), false);
  for (const auto& [key, value] : entries.items()) {
    std::size_t d = domain.parse(key);
    if (seen[d]) malformed("map point '" + key + "' given twice");
    seen[d] = true;
    map[d] = codomain.parse(as_string(value, "map value"));
  }
  for (std::size_t d = 0; d < domain.size(); ++d)
    if (!seen[d]) throw Error(ErrorCode::InvalidMap, "map misses domain point '" + domain.format(d) + "'");
  return TransRv::deterministic(domain, codomain, std::move(map));
}

Json cbn_to_json(const Cbn& m) {
  Json spaces = Json::object(), kernels = Json::object();
  for (const auto& [v, var] : m.spaces) spaces[v] = var.outcomes;
  for (const auto& [v, k] : m.kernels) kernels[v] = kernel_to_json(k);
  return {{"graph", graph_to_json(m.graph)}, {"latent", node_list(m.latent)}, {"spaces", spaces}, {"kernels", kernels}};
}

Cbn cbn_from_json(const Json& j) {
  Cbn m;
  m.graph = graph_from_json(field(j, "graph"));
  if (j.contains("latent")) m.latent = node_set(j["latent"], "latent");
  const Json& spaces = field(j, "spaces");
  if (!spaces.is_object()) malformed("spaces must be an object");
  for (const auto& [v, outcomes] : spaces.items()) m.spaces[v] = FiniteVar{v, string_list(outcomes, "outcomes")};
  const Json& kernels = field(j, "kernels");
  if (!kernels.is_object()) malformed("kernels must be an object");
  for (const auto& [v, k] : kernels.items()) m.kernels.emplace(v, kernel_from_json(k));
  validate_cbn(m);
  return m;
}

Json embedding_to_json(const RealEmbedding& emb) {
  Json values = Json::array();
  for (const auto& v : emb.values) values.push_back(to_string(v));
  return {{"variable", emb.var.name}, {"outcomes", emb.var.outcomes}, {"values", values}};
}

RealEmbedding embedding_from_json(const Json& j) {
  RealEmbedding emb;
  emb.var.name = as_string(field(j, "variable"), "variable");
  emb.var.outcomes = string_list(field(j, "outcomes"), "outcomes");
  for (const auto& v : string_list(field(j, "values"), "values")) emb.values.push_back(parse_rational(v));
  validate_embedding(emb);
  return emb;
}

Json oracle_to_json(const SeparoidInstance& inst) {
  validate_instance(inst);
  const std::size_t n = inst.size();
  Json join = Json::array(), order = Json::array(), independent = Json::array();
  for (std::size_t a = 0; a < n; ++a) {
    Json jrow = Json::array(), orow = Json::array();
    for (std::size_t b = 0; b < n; ++b) {
      jrow.push_back(inst.j(a, b));
      orow.push_back(inst.le(a, b) ? 1 : 0);
    }
    join.push_back(jrow);
    order.push_back(orow);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (inst.rel(a, b, c)) independent.push_back({a, b, c});
  return {{"carrier", inst.labels}, {"join", join}, {"order", order}, {"independent", independent},
          {"bottom", inst.bottom}, {"tau", inst.tau}, {"kappa", inst.kappa}};
}

SeparoidInstance oracle_from_json(const Json& j) {
  SeparoidInstance inst;
  inst.labels = string_list(field(j, "carrier"), "carrier");
  const std::size_t n = inst.size();
  if (n == 0) malformed("carrier must be nonempty");
  if (n > 256) throw Error(ErrorCode::MalformedTable, "oracle carriers are limited to 256 elements");
  auto table = [&](const char* key) {
    const Json& rows = field(j, key);
    if (!rows.is_array() || rows.size() != n) throw Error(ErrorCode::MalformedTable, std::string(key) + " must have one row per element");
    for (const auto& row : rows)
      if (!row.is_array() || row.size() != n) throw Error(ErrorCode::MalformedTable, std::string(key) + " rows must have one entry per element");
    return rows;
  };
  const Json join = table("join"), order = table("order");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      inst.join.push_back(element(join[a][b], inst.labels));
      const Json& o = order[a][b];
      if (o.is_boolean()) {
        inst.order.push_back(o.get<bool>() ? 1 : 0);
      } else if (o.is_number_integer() && (o.get<long long>() == 0 || o.get<long long>() == 1)) {
        inst.order.push_back(static_cast<std::uint8_t>(o.get<long long>()));
      } else {
        throw Error(ErrorCode::MalformedTable, "order entries must be 0, 1 or booleans");
      }
    }
  auto holds = std::make_shared<std::vector<std::uint8_t>>(n * n * n, 0);
  const Json& triples = field(j, "independent");
  if (!triples.is_array()) malformed("independent must be an array of triples");
  for (const auto& t : triples) {
    if (!t.is_array() || t.size() != 3) malformed("independent entries must be triples");
    (*holds)[(element(t[0], inst.labels) * n + element(t[1], inst.labels)) * n + element(t[2], inst.labels)] = 1;
  }
  inst.relation = [holds, n](std::size_t a, std::size_t b, std::size_t c) { return (*holds)[(a * n + b) * n + c] != 0; };
  inst.bottom = element(field(j, "bottom"), inst.labels);
  inst.tau = element(field(j, "tau"), inst.labels);
  inst.kappa = element(field(j, "kappa"), inst.labels);
  validate_instance(inst);
  return inst;
}

Json sep_verdict_to_json(const SepVerdict& v) {
  Json out = {{"separated", v.separated}};
  if (v.witness) out["walk"] = v.witness->to_string();
  return out;
}

Json ci_verdict_to_json(const CiVerdict& v, const TransSpace& ts, const Space& y_space, const Space& z_space) {
  Json out = {{"independent", v.independent}};
  if (v.witness) out["witness"] = kernel_to_json(*v.witness);
  if (v.counterexample) {
    Json points = Json::array();
    for (const CiPoint& p : {v.counterexample->first, v.counterexample->second})
      points.push_back({{"t", ts.t().format(p.t)}, {"y", y_space.format(p.y)}, {"z", z_space.format(p.z)}});
    out["counterexample"] = points;
  }
  return out;
}

Json battery_to_json(const BatteryReport& r) {
  return {{"tci", r.tci},         {"with_t", r.with_t},     {"split", r.split},
          {"weak_split", r.weak_split}, {"mixtures", r.mixtures}, {"mixtures_probed", r.mixtures_probed},
          {"consistent", r.consistent}};
}

Json rule_reports_to_json(const std::vector<RuleReport>& reports, const SeparoidInstance& inst) {
  Json out = Json::array();
  for (const auto& r : reports) {
    Json failures = Json::array();
    for (const auto& f : r.failures) {
      Json tuple = Json::array();
      for (auto e : f) tuple.push_back(inst.labels[e]);
      failures.push_back(tuple);
    }
    out.push_back({{"rule", r.rule}, {"arity", r.arity}, {"tested", r.tested}, {"applicable", r.applicable},
                   {"failures", failures}});
  }
  return out;
}

Json gmp_report_to_json(const GmpReport& r) {
  Json violations = Json::array(), witnesses = Json::array();
  for (const auto& q : r.violations) violations.push_back(query_to_json(q));
  for (const auto& w : r.witnesses) witnesses.push_back({{"query", query_to_json(w.query)}, {"kernel", kernel_to_json(w.kernel)}});
  Json out = {{"triples", r.triples},   {"separated", r.separated}, {"violations", violations},
              {"sampled", r.sampled},   {"budget_exceeded", r.budget_exceeded}, {"holds", r.violations.empty()}};
  if (!r.witnesses.empty()) out["witnesses"] = witnesses;
  return out;
}

Json do_report_to_json(const DoReport& r) {
  return {{"rule", r.rule},
          {"applicable", r.applicable},
          {"open_walk", optional_walk(r.open_walk)},
          {"kernel", optional_kernel(r.kernel)},
          {"checks", checks_to_json(r.checks)},
          {"sound", r.sound}};
}

Json backdoor_report_to_json(const BackdoorReport& r) {
  return {{"applicable", r.applicable},
          {"open_walk", optional_walk(r.open_walk)},
          {"adjustment", optional_kernel(r.adjustment)},
          {"covariates", optional_kernel(r.covariates)},
          {"adjusted", optional_kernel(r.adjusted)},
          {"interventional", optional_kernel(r.interventional)},
          {"checks", checks_to_json(r.checks)},
          {"sound", r.sound}};
}

Json reparam_report_to_json(const ReparamReport& r, const Itcdf& f) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"z", f.source().format(row.z)}, {"uniform", row.uniform}, {"inverts", row.inverts},
                    {"points_checked", row.points_checked}});
  return {{"rows", rows}, {"ok", r.ok}};
}

}  // namespace tci

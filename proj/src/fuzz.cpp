#include "tci/fuzz.hpp"

#include <algorithm>

#include "tci/random.hpp"
#include "tci/separation.hpp"
#include "tci/tci.hpp"

namespace tci {

namespace {

std::vector<std::string> labels_of(const SeparoidInstance& inst, const std::vector<std::size_t>& args) {
  std::vector<std::string> out;
  for (auto a : args) out.push_back(inst.labels[a]);
  return out;
}

void absorb(FuzzReport& report, std::size_t instance, const SeparoidInstance& inst, const std::vector<RuleReport>& rules,
            const Json& context, const FuzzOptions& options) {
  for (const auto& r : rules) {
    auto it = std::find_if(report.totals.begin(), report.totals.end(), [&](const RuleReport& t) { return t.rule == r.rule; });
    if (it == report.totals.end()) {
      report.totals.push_back({r.rule, r.arity, 0, 0, {}});
      it = report.totals.end() - 1;
    }
    it->tested += r.tested;
    it->applicable += r.applicable;
    report.violations += r.failures.size();
    for (const auto& f : r.failures) {
      if (report.failures.size() >= options.max_failures) break;
      report.failures.push_back({instance, r.rule, labels_of(inst, f), labels_of(inst, shrink_failure(inst, r.rule, f)), context});
    }
  }
}

RuleOptions rule_options(const FuzzOptions& options, std::uint64_t seed, bool set_rules) {
  RuleOptions ro;
  ro.samples = options.samples;
  ro.seed = seed;
  ro.set_rules = set_rules;
  return ro;
}

}  // namespace

FuzzReport fuzz_sigma(const FuzzOptions& options) {
  FuzzReport report;
  report.relation = "sigma";
  report.instances = options.instances;
  Rng rng(options.seed);
  RandomGraphOptions go;
  go.min_nodes = 2;
  go.max_nodes = 5;
  for (std::size_t i = 0; i < options.instances; ++i) {
    Cdmg g = random_cdmg(rng, go);
    SeparoidInstance inst = memoize(sigma_separoid(g));
    absorb(report, i, inst, check_rules(inst, rule_options(options, rng.next(), true)), graph_to_json(g), options);
  }
  return report;
}

FuzzReport fuzz_tci(const FuzzOptions& options) {
  FuzzReport report;
  report.relation = "tci";
  report.instances = options.instances;
  Rng rng(options.seed);
  for (std::size_t i = 0; i < options.instances; ++i) {
    TransSpace ts = random_trans_space(rng);
    std::vector<TransRv> gens = {random_map_rv(rng, ts.domain(), "X"), random_map_rv(rng, ts.domain(), "Y")};
    SeparoidInstance inst = memoize(tci_separoid(ts, gens));
    Json context = {{"space", trans_space_to_json(ts)}, {"generators", {rv_to_json(gens[0]), rv_to_json(gens[1])}}};
    absorb(report, i, inst, check_rules(inst, rule_options(options, rng.next(), false)), context, options);
  }
  return report;
}

FuzzReport fuzz_oracle(const SeparoidInstance& raw, const FuzzOptions& options) {
  FuzzReport report;
  report.relation = "file";
  report.instances = options.instances;
  SeparoidInstance inst = memoize(raw);
  bool sets = inst.disjoint && inst.minus;
  for (std::size_t i = 0; i < options.instances; ++i)
    absorb(report, i, inst, check_rules(inst, rule_options(options, options.seed + i, sets)), nullptr, options);
  return report;
}

Json fuzz_report_to_json(const FuzzReport& r) {
  Json rules = Json::array(), failures = Json::array();
  for (const auto& t : r.totals) rules.push_back({{"rule", t.rule}, {"tested", t.tested}, {"applicable", t.applicable}});
  for (const auto& f : r.failures) {
    Json entry = {{"instance", f.instance}, {"rule", f.rule}, {"tuple", f.original}, {"shrunk", f.shrunk}};
    if (!f.context.is_null()) entry["context"] = f.context;
    failures.push_back(entry);
  }
  return {{"relation", r.relation}, {"instances", r.instances}, {"rules", rules},
          {"violations", r.violations}, {"failures", failures}, {"passed", r.passed()}};
}

}  // namespace tci

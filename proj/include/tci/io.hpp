#pragma once

#include <json.hpp>
#include <string>

#include "tci/cbn.hpp"
#include "tci/graph.hpp"
#include "tci/kernel.hpp"
#include "tci/reparam.hpp"
#include "tci/separation.hpp"
#include "tci/separoid.hpp"
#include "tci/tci.hpp"

// Canonical JSON forms. Object keys are sorted, rationals are "p/q" strings and
// zero kernel entries are omitted. Readers throw Error with code Parse on
// malformed documents and the module's own codes on semantic errors.
namespace tci {

using Json = nlohmann::json;

Json parse_json(const std::string& text);

// {"inputs":[...], "outputs":[...], "directed":[["a","b"]], "bidirected":[["a","b"]]}
Json graph_to_json(const Cdmg& g);
Cdmg graph_from_json(const Json& j);

// [{"name":"X","outcomes":["0","1"]}, ...]
Json space_to_json(const Space& s);
Space space_from_json(const Json& j);

// {"source":[...], "target":[...], "rows":{"T=0":{"X=1":"1/3"}}}
Json kernel_to_json(const Kernel& k);
Kernel kernel_from_json(const Json& j);

// {"kernel": <Kernel>}; a bare kernel is accepted on input.
Json trans_space_to_json(const TransSpace& ts);
TransSpace trans_space_from_json(const Json& j);

// Deterministic: {"codomain":[...], "map":{"T=0,W=1":"X=0"}} with every domain point listed.
// Stochastic: {"kernel": <Kernel>} with the domain as source.
// Projection: {"project":["W1"]}.
Json rv_to_json(const TransRv& x);
TransRv rv_from_json(const Json& j, const Space& domain);

// {"graph": <Cdmg>, "latent":[...], "spaces":{"a":["0","1"]}, "kernels":{"a": <Kernel>}}
Json cbn_to_json(const Cbn& m);
Cbn cbn_from_json(const Json& j);

// {"variable":"X", "outcomes":["a","b"], "values":["0","5/2"]}
Json embedding_to_json(const RealEmbedding& emb);
RealEmbedding embedding_from_json(const Json& j);

// {"carrier":[labels], "join":[[i]], "order":[[0|1]], "independent":[[a,b,c]],
//  "bottom":i, "tau":i, "kappa":i}. Elements may be indices or carrier labels.
Json oracle_to_json(const SeparoidInstance& inst);
SeparoidInstance oracle_from_json(const Json& j);

Json sep_verdict_to_json(const SepVerdict& v);
Json ci_verdict_to_json(const CiVerdict& v, const TransSpace& ts, const Space& y_space, const Space& z_space);
Json battery_to_json(const BatteryReport& r);
Json rule_reports_to_json(const std::vector<RuleReport>& reports, const SeparoidInstance& inst);
Json gmp_report_to_json(const GmpReport& r);
Json do_report_to_json(const DoReport& r);
Json backdoor_report_to_json(const BackdoorReport& r);
Json reparam_report_to_json(const ReparamReport& r, const Itcdf& f);

}  // namespace tci

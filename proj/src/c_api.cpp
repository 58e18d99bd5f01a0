#include "tci/tci_c.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "tci/cbn.hpp"
#include "tci/error.hpp"
#include "tci/fuzz.hpp"
#include "tci/io.hpp"
#include "tci/reparam.hpp"
#include "tci/separation.hpp"
#include "tci/tci.hpp"

struct tci_graph {
  tci::Cdmg g;
};
struct tci_kernel {
  tci::Kernel k;
};
struct tci_space {
  tci::TransSpace ts;
};
struct tci_rv {
  tci::TransRv x;
};
struct tci_cbn {
  tci::Cbn m;
};

namespace {

thread_local std::string last_error;

struct NullArgument {};

tci_status fail(tci_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
tci_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return TCI_OK;
  } catch (const tci::Error& e) {
    return fail(static_cast<tci_status>(e.code()), e.what());
  } catch (const NullArgument&) {
    return fail(TCI_ERR_NULL_ARGUMENT, "null argument");
  } catch (const std::bad_alloc&) {
    return fail(TCI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TCI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TCI_ERR_INTERNAL, "unknown failure");
  }
}

template <class... P>
void require(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument{};
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const tci::Json& j, char** out) {
  if (out) *out = dup_string(j.dump());
}

tci::NodeSet names_of(tci_names names) {
  if (names.count > 0 && names.items == nullptr) throw NullArgument{};
  tci::NodeSet out;
  for (std::size_t i = 0; i < names.count; ++i) {
    if (names.items[i] == nullptr) throw NullArgument{};
    out.insert(names.items[i]);
  }
  return out;
}

tci::Json set_json(const tci::NodeSet& s) { return tci::Json(std::vector<std::string>(s.begin(), s.end())); }

}  // namespace

extern "C" {

const char* tci_version(void) { return "1.0.0"; }

const char* tci_last_error(void) { return last_error.c_str(); }

const char* tci_status_name(tci_status status) {
  switch (status) {
    case TCI_OK: return "ok";
    case TCI_ERR_NULL_ARGUMENT: return "null-argument";
    case TCI_ERR_INTERNAL: return "internal";
    default:
      if (status >= TCI_ERR_INVALID_NODE && status <= TCI_ERR_INVALID_MODEL)
        return tci::error_code_name(static_cast<tci::ErrorCode>(status));
      return "unknown";
  }
}

void tci_string_free(char* s) { std::free(s); }

// ------------------------------------------------------------------- graphs

tci_status tci_graph_from_json(const char* json, tci_graph** out) {
  return guarded([&] {
    require(json, out);
    *out = new tci_graph{tci::graph_from_json(tci::parse_json(json))};
  });
}

tci_status tci_graph_to_json(const tci_graph* g, char** out) {
  return guarded([&] {
    require(g, out);
    emit(tci::graph_to_json(g->g), out);
  });
}

void tci_graph_free(tci_graph* g) { delete g; }

tci_status tci_graph_describe(const tci_graph* g, char** out) {
  return guarded([&] {
    require(g, out);
    const tci::Cdmg& graph = g->g;
    auto order = tci::topological_order(graph);
    tci::Json components = tci::Json::array(), parents = tci::Json::object(), ancestors = tci::Json::object();
    tci::NodeSet covered;
    for (const auto& v : graph.nodes()) {
      if (!covered.count(v)) {
        tci::NodeSet scc = tci::strongly_connected(graph, v);
        covered.insert(scc.begin(), scc.end());
        components.push_back(set_json(scc));
      }
      parents[v] = set_json(tci::parents(graph, v));
      ancestors[v] = set_json(tci::ancestors(graph, {v}));
    }
    tci::Json j = {{"acyclic", tci::is_acyclic(graph)},
                   {"topological_order", order ? tci::Json(*order) : tci::Json(nullptr)},
                   {"components", components},
                   {"parents", parents},
                   {"ancestors", ancestors}};
    emit(j, out);
  });
}

tci_status tci_graph_surgery(const tci_graph* g, tci_surgery kind, tci_names nodes, tci_graph** out) {
  return guarded([&] {
    require(g, out);
    tci::NodeSet w = names_of(nodes);
    switch (kind) {
      case TCI_SURGERY_HARD: *out = new tci_graph{tci::hard_intervene(g->g, w)}; break;
      case TCI_SURGERY_SOFT: *out = new tci_graph{tci::soft_extend(g->g, w)}; break;
      case TCI_SURGERY_MARGINALIZE: *out = new tci_graph{tci::marginalize_graph(g->g, w)}; break;
      case TCI_SURGERY_ACYCLIFY: *out = new tci_graph{tci::acyclify(g->g)}; break;
      default: throw tci::Error(tci::ErrorCode::InvalidArgument, "unknown surgery");
    }
  });
}

tci_status tci_sigma_separated(const tci_graph* g, tci_names a, tci_names b, tci_names c, unsigned flags,
                               int* separated, char** report) {
  return guarded([&] {
    require(g, separated);
    tci::SepQuery q{names_of(a), names_of(b), names_of(c)};
    bool with_inputs = (flags & TCI_SEP_RAW) == 0;
    tci::SepVerdict v = tci::sigma_separated(g->g, q, with_inputs);
    tci::Json j = tci::sep_verdict_to_json(v);
    if (flags & TCI_SEP_ORACLE) j["oracle"] = tci::sigma_separated_oracle(g->g, q, with_inputs);
    *separated = v.separated ? 1 : 0;
    emit(j, report);
  });
}

// ------------------------------------------------------------------ kernels

tci_status tci_kernel_from_json(const char* json, tci_kernel** out) {
  return guarded([&] {
    require(json, out);
    *out = new tci_kernel{tci::kernel_from_json(tci::parse_json(json))};
  });
}

tci_status tci_kernel_to_json(const tci_kernel* k, char** out) {
  return guarded([&] {
    require(k, out);
    emit(tci::kernel_to_json(k->k), out);
  });
}

void tci_kernel_free(tci_kernel* k) { delete k; }

tci_status tci_kernel_compose(const tci_kernel* left, const tci_kernel* right, tci_kernel** out) {
  return guarded([&] {
    require(left, right, out);
    *out = new tci_kernel{tci::compose(left->k, right->k)};
  });
}

tci_status tci_kernel_product(const tci_kernel* left, const tci_kernel* right, tci_kernel** out) {
  return guarded([&] {
    require(left, right, out);
    *out = new tci_kernel{tci::product(left->k, right->k)};
  });
}

tci_status tci_kernel_marginalize(const tci_kernel* k, tci_names keep, tci_kernel** out) {
  return guarded([&] {
    require(k, out);
    auto names = names_of(keep);
    *out = new tci_kernel{tci::marginalize(k->k, tci::NameSet(names.begin(), names.end()))};
  });
}

tci_status tci_kernel_disintegrate(const tci_kernel* k, tci_names on, tci_kernel** out) {
  return guarded([&] {
    require(k, out);
    auto names = names_of(on);
    *out = new tci_kernel{tci::disintegrate(k->k, tci::NameSet(names.begin(), names.end()))};
  });
}

tci_status tci_kernel_equal(const tci_kernel* a, const tci_kernel* b, int* equal) {
  return guarded([&] {
    require(a, b, equal);
    *equal = a->k == b->k ? 1 : 0;
  });
}

// ------------------------------------------------- conditional independence

tci_status tci_space_from_json(const char* json, tci_space** out) {
  return guarded([&] {
    require(json, out);
    *out = new tci_space{tci::trans_space_from_json(tci::parse_json(json))};
  });
}

void tci_space_free(tci_space* ts) { delete ts; }

tci_status tci_rv_from_json(const tci_space* ts, const char* json, tci_rv** out) {
  return guarded([&] {
    require(ts, json, out);
    *out = new tci_rv{tci::rv_from_json(tci::parse_json(json), ts->ts.domain())};
  });
}

tci_status tci_rv_constant(const tci_space* ts, tci_rv** out) {
  return guarded([&] {
    require(ts, out);
    *out = new tci_rv{tci::TransRv::constant(ts->ts.domain())};
  });
}

void tci_rv_free(tci_rv* x) { delete x; }

tci_status tci_ci_check(const tci_space* ts, const tci_rv* x, const tci_rv* y, const tci_rv* z, unsigned flags,
                        int* independent, char** report) {
  return guarded([&] {
    require(ts, x, y, z, independent);
    tci::CiVerdict v = tci::tci_check(ts->ts, x->x, y->x, z->x);
    tci::Json j = tci::ci_verdict_to_json(v, ts->ts, y->x.codomain(), z->x.codomain());
    if (flags & TCI_CI_BATTERY) j["battery"] = tci::battery_to_json(tci::equivalence_battery(ts->ts, x->x, y->x, z->x));
    *independent = v.independent ? 1 : 0;
    emit(j, report);
  });
}

// ----------------------------------------------------------------- networks

tci_status tci_cbn_from_json(const char* json, tci_cbn** out) {
  return guarded([&] {
    require(json, out);
    *out = new tci_cbn{tci::cbn_from_json(tci::parse_json(json))};
  });
}

tci_status tci_cbn_to_json(const tci_cbn* m, char** out) {
  return guarded([&] {
    require(m, out);
    emit(tci::cbn_to_json(m->m), out);
  });
}

void tci_cbn_free(tci_cbn* m) { delete m; }

tci_status tci_cbn_observational(const tci_cbn* m, tci_kernel** out) {
  return guarded([&] {
    require(m, out);
    *out = new tci_kernel{tci::observational_kernel(m->m)};
  });
}

tci_status tci_cbn_intervene(const tci_cbn* m, tci_names hard, tci_names soft, tci_cbn** out) {
  return guarded([&] {
    require(m, out);
    tci::Cbn result = tci::hard_intervene_cbn(m->m, names_of(hard));
    tci::NodeSet s = names_of(soft);
    if (!s.empty()) result = tci::soft_intervene_cbn(result, s);
    *out = new tci_cbn{std::move(result)};
  });
}

tci_status tci_cbn_verify_gmp(const tci_cbn* m, const tci_gmp_options* options, int* holds, char** report) {
  return guarded([&] {
    require(m, holds);
    tci::GmpOptions go;
    if (options) {
      go.scope = options->sample ? tci::GmpOptions::Scope::Sample : tci::GmpOptions::Scope::All;
      go.samples = options->samples;
      go.seed = options->seed;
      if (options->budget_nodes) go.budget_nodes = options->budget_nodes;
      go.keep_witnesses = options->keep_witnesses != 0;
    }
    tci::GmpReport r = tci::gmp_verify(m->m, go);
    *holds = r.violations.empty() ? 1 : 0;
    emit(tci::gmp_report_to_json(r), report);
  });
}

tci_status tci_cbn_do_calculus(const tci_cbn* m, int rule, tci_names a, tci_names b, tci_names c, tci_names d, int* ok,
                               char** report) {
  return guarded([&] {
    require(m, ok);
    tci::DoReport r = tci::do_calculus(m->m, rule, {names_of(a), names_of(b), names_of(c), names_of(d)});
    *ok = r.applicable && r.sound ? 1 : 0;
    emit(tci::do_report_to_json(r), report);
  });
}

tci_status tci_cbn_backdoor(const tci_cbn* m, tci_names a, tci_names b, tci_names c, tci_names f, tci_names d, int* ok,
                            char** report) {
  return guarded([&] {
    require(m, ok);
    tci::BackdoorReport r = tci::backdoor_adjust(m->m, names_of(a), names_of(b), names_of(c), names_of(f), names_of(d));
    *ok = r.applicable && r.sound ? 1 : 0;
    emit(tci::backdoor_report_to_json(r), report);
  });
}

// ------------------------------------------------------- reparameterization

tci_status tci_reparam_verify(const tci_kernel* k, const char* embedding_json, int* ok, char** report) {
  return guarded([&] {
    require(k, embedding_json, ok);
    tci::RealEmbedding emb = tci::embedding_from_json(tci::parse_json(embedding_json));
    tci::Itcdf f = tci::itcdf(k->k, emb);
    tci::ReparamReport r = tci::verify_reparam(k->k, emb);
    *ok = r.ok ? 1 : 0;
    emit(tci::reparam_report_to_json(r, f), report);
  });
}

// ------------------------------------------------------------------ fuzzing

tci_status tci_fuzz_separoid(tci_relation relation, const char* oracle_json, const tci_fuzz_options* options,
                             int* passed, char** report) {
  return guarded([&] {
    require(passed);
    tci::FuzzOptions fo;
    if (options) {
      fo.instances = options->instances;
      fo.samples = options->samples;
      fo.seed = options->seed;
    }
    tci::FuzzReport r;
    switch (relation) {
      case TCI_RELATION_SIGMA: r = tci::fuzz_sigma(fo); break;
      case TCI_RELATION_TCI: r = tci::fuzz_tci(fo); break;
      case TCI_RELATION_FILE:
        require(oracle_json);
        r = tci::fuzz_oracle(tci::oracle_from_json(tci::parse_json(oracle_json)), fo);
        break;
      default: throw tci::Error(tci::ErrorCode::InvalidArgument, "unknown relation");
    }
    *passed = r.passed() ? 1 : 0;
    emit(tci::fuzz_report_to_json(r), report);
  });
}

}  // extern "C"

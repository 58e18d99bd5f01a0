#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "tci/tci_c.h"

namespace {

using Json = nlohmann::json;

// Input errors reported as {"error": {"code", "message"}} with exit code 2.
struct CliError {
  std::string code, message;
};

void check(tci_status status) {
  if (status != TCI_OK) throw CliError{tci_status_name(status), tci_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Graph = std::unique_ptr<tci_graph, Deleter<tci_graph, tci_graph_free>>;
using KernelHandle = std::unique_ptr<tci_kernel, Deleter<tci_kernel, tci_kernel_free>>;
using SpaceHandle = std::unique_ptr<tci_space, Deleter<tci_space, tci_space_free>>;
using RvHandle = std::unique_ptr<tci_rv, Deleter<tci_rv, tci_rv_free>>;
using CbnHandle = std::unique_ptr<tci_cbn, Deleter<tci_cbn, tci_cbn_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  tci_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{"io", "cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Graph load_graph(const std::string& path) {
  tci_graph* g = nullptr;
  check(tci_graph_from_json(read_file(path).c_str(), &g));
  return Graph(g);
}

KernelHandle load_kernel(const std::string& path) {
  tci_kernel* k = nullptr;
  check(tci_kernel_from_json(read_file(path).c_str(), &k));
  return KernelHandle(k);
}

CbnHandle load_cbn(const std::string& path) {
  tci_cbn* m = nullptr;
  check(tci_cbn_from_json(read_file(path).c_str(), &m));
  return CbnHandle(m);
}

// Keeps the C strings of a name list alive for one call.
struct Names {
  explicit Names(const std::vector<std::string>& v) {
    for (const auto& s : v) ptrs.push_back(s.c_str());
  }
  tci_names get() const { return {ptrs.data(), ptrs.size()}; }
  std::vector<const char*> ptrs;
};

struct Output {
  bool pretty = false;
  // Prints a report document; text replaces the indented form when pretty.
  void report(const std::string& json, const std::string& text = "") const {
    if (!pretty) {
      std::cout << Json::parse(json).dump() << "\n";
    } else if (!text.empty()) {
      std::cout << text << "\n";
    } else {
      std::cout << Json::parse(json).dump(2) << "\n";
    }
  }
};

std::uint64_t parse_seed(const std::string& text, const char* source) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CliError{"usage", std::string(source) + " must be a nonnegative integer"};
  }
}

void print_error(const CliError& e) {
  std::cout << Json{{"error", {{"code", e.code}, {"message", e.message}}}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transitional conditional independence toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  std::string seed_text = "1";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "pretty"}));
  app.add_option("--seed", seed_text, "Seed for sampling (overridden by TCI_SEED)");

  int exit_code = 0;
  Output out;
  std::uint64_t seed = 1;

  // sep
  auto* sep = app.add_subcommand("sep", "σ-separation query");
  std::string graph_path;
  std::vector<std::string> a, b, c, d, f, nodes;
  bool raw = false, oracle = false;
  sep->add_option("--graph", graph_path)->required();
  sep->add_option("--a", a)->delimiter(',')->required();
  sep->add_option("--b", b)->delimiter(',');
  sep->add_option("--c", c)->delimiter(',');
  sep->add_flag("--raw", raw, "Separate from B alone, without the input nodes");
  sep->add_flag("--oracle", oracle, "Also run the walk-state search");
  sep->callback([&] {
    Graph g = load_graph(graph_path);
    Names na(a), nb(b), nc(c);
    unsigned flags = (raw ? TCI_SEP_RAW : 0u) | (oracle ? TCI_SEP_ORACLE : 0u);
    int separated = 0;
    char* report = nullptr;
    check(tci_sigma_separated(g.get(), na.get(), nb.get(), nc.get(), flags, &separated, &report));
    std::string json = take(report);
    Json j = Json::parse(json);
    out.report(json, separated ? "separated" : j["walk"].get<std::string>());
    exit_code = separated ? 0 : 1;
  });

  // kernel
  auto* kernel = app.add_subcommand("kernel", "Kernel operations");
  kernel->require_subcommand(1);
  std::string left_path, right_path, kernel_path;
  std::vector<std::string> vars;
  auto emit_kernel = [&](tci_kernel* k) {
    KernelHandle owned(k);
    char* json = nullptr;
    check(tci_kernel_to_json(owned.get(), &json));
    out.report(take(json));
  };
  auto* compose = kernel->add_subcommand("compose", "Composition left ∘ right");
  compose->add_option("--left", left_path)->required();
  compose->add_option("--right", right_path)->required();
  compose->callback([&] {
    KernelHandle l = load_kernel(left_path), r = load_kernel(right_path);
    tci_kernel* k = nullptr;
    check(tci_kernel_compose(l.get(), r.get(), &k));
    emit_kernel(k);
  });
  auto* prod = kernel->add_subcommand("product", "Product left ⊗ right");
  prod->add_option("--left", left_path)->required();
  prod->add_option("--right", right_path)->required();
  prod->callback([&] {
    KernelHandle l = load_kernel(left_path), r = load_kernel(right_path);
    tci_kernel* k = nullptr;
    check(tci_kernel_product(l.get(), r.get(), &k));
    emit_kernel(k);
  });
  auto* marg = kernel->add_subcommand("marginalize", "Keep some target variables");
  marg->add_option("--kernel", kernel_path)->required();
  marg->add_option("--keep", vars)->delimiter(',');
  marg->callback([&] {
    KernelHandle k = load_kernel(kernel_path);
    Names keep(vars);
    tci_kernel* r = nullptr;
    check(tci_kernel_marginalize(k.get(), keep.get(), &r));
    emit_kernel(r);
  });
  auto* dis = kernel->add_subcommand("disintegrate", "Condition on some target variables");
  dis->add_option("--kernel", kernel_path)->required();
  dis->add_option("--on", vars)->delimiter(',')->required();
  dis->callback([&] {
    KernelHandle k = load_kernel(kernel_path);
    Names on(vars);
    tci_kernel* r = nullptr;
    check(tci_kernel_disintegrate(k.get(), on.get(), &r));
    emit_kernel(r);
  });

  // ci
  auto* ci = app.add_subcommand("ci", "Transitional conditional independence X ⊥ Y | Z");
  std::string space_path, x_path, y_path, z_path;
  bool battery = false;
  ci->add_option("--space", space_path)->required();
  ci->add_option("--x", x_path)->required();
  ci->add_option("--y", y_path, "Omit for the constant variable");
  ci->add_option("--z", z_path, "Omit for the constant variable");
  ci->add_flag("--battery", battery, "Evaluate the equivalent formulations too");
  ci->callback([&] {
    tci_space* raw_space = nullptr;
    check(tci_space_from_json(read_file(space_path).c_str(), &raw_space));
    SpaceHandle ts(raw_space);
    auto load_rv = [&](const std::string& path) {
      tci_rv* x = nullptr;
      if (path.empty()) {
        check(tci_rv_constant(ts.get(), &x));
      } else {
        check(tci_rv_from_json(ts.get(), read_file(path).c_str(), &x));
      }
      return RvHandle(x);
    };
    RvHandle x = load_rv(x_path), y = load_rv(y_path), z = load_rv(z_path);
    int independent = 0;
    char* report = nullptr;
    check(tci_ci_check(ts.get(), x.get(), y.get(), z.get(), battery ? TCI_CI_BATTERY : 0u, &independent, &report));
    out.report(take(report));
    exit_code = independent ? 0 : 1;
  });

  // cbn
  auto* cbn = app.add_subcommand("cbn", "Causal Bayesian networks");
  cbn->require_subcommand(1);
  std::string model_path, scope = "all";
  int rule = 0;
  bool witnesses = false;
  std::vector<std::string> hard, soft;
  auto* gmp = cbn->add_subcommand("verify-gmp", "Global Markov property");
  gmp->add_option("model", model_path)->required();
  gmp->add_option("--scope", scope, "all or sample:N");
  gmp->add_flag("--witnesses", witnesses, "Include the witness kernels");
  gmp->callback([&] {
    tci_gmp_options options{0, 0, seed, 0, witnesses ? 1 : 0};
    if (scope.rfind("sample:", 0) == 0) {
      options.sample = 1;
      options.samples = static_cast<std::size_t>(parse_seed(scope.substr(7), "--scope sample count"));
    } else if (scope != "all") {
      throw CliError{"usage", "--scope must be all or sample:N"};
    }
    CbnHandle m = load_cbn(model_path);
    int holds = 0;
    char* report = nullptr;
    check(tci_cbn_verify_gmp(m.get(), &options, &holds, &report));
    out.report(take(report));
    exit_code = holds ? 0 : 1;
  });
  auto* docalc = cbn->add_subcommand("docalc", "Do-calculus rule");
  docalc->add_option("model", model_path)->required();
  docalc->add_option("--rule", rule)->required()->check(CLI::Range(1, 3));
  docalc->add_option("--a", a)->delimiter(',')->required();
  docalc->add_option("--b", b)->delimiter(',');
  docalc->add_option("--c", c)->delimiter(',');
  docalc->add_option("--d", d)->delimiter(',');
  docalc->callback([&] {
    CbnHandle m = load_cbn(model_path);
    Names na(a), nb(b), nc(c), nd(d);
    int ok = 0;
    char* report = nullptr;
    check(tci_cbn_do_calculus(m.get(), rule, na.get(), nb.get(), nc.get(), nd.get(), &ok, &report));
    out.report(take(report));
    exit_code = ok ? 0 : 1;
  });
  auto* backdoor = cbn->add_subcommand("backdoor", "Conditional backdoor adjustment");
  backdoor->add_option("model", model_path)->required();
  backdoor->add_option("--a", a)->delimiter(',')->required();
  backdoor->add_option("--b", b)->delimiter(',')->required();
  backdoor->add_option("--c", c)->delimiter(',');
  backdoor->add_option("--f", f)->delimiter(',');
  backdoor->add_option("--d", d)->delimiter(',');
  backdoor->callback([&] {
    CbnHandle m = load_cbn(model_path);
    Names na(a), nb(b), nc(c), nf(f), nd(d);
    int ok = 0;
    char* report = nullptr;
    check(tci_cbn_backdoor(m.get(), na.get(), nb.get(), nc.get(), nf.get(), nd.get(), &ok, &report));
    out.report(take(report));
    exit_code = ok ? 0 : 1;
  });
  auto* intervene = cbn->add_subcommand("intervene", "Hard and soft interventions");
  intervene->add_option("model", model_path)->required();
  intervene->add_option("--hard", hard)->delimiter(',');
  intervene->add_option("--soft", soft)->delimiter(',');
  intervene->callback([&] {
    CbnHandle m = load_cbn(model_path);
    Names nh(hard), ns(soft);
    tci_cbn* r = nullptr;
    check(tci_cbn_intervene(m.get(), nh.get(), ns.get(), &r));
    CbnHandle result(r);
    char* json = nullptr;
    check(tci_cbn_to_json(result.get(), &json));
    out.report(take(json));
  });
  auto* joint = cbn->add_subcommand("joint", "Observational kernel of the observed nodes");
  joint->add_option("model", model_path)->required();
  joint->callback([&] {
    CbnHandle m = load_cbn(model_path);
    tci_kernel* k = nullptr;
    check(tci_cbn_observational(m.get(), &k));
    emit_kernel(k);
  });

  // reparam
  auto* reparam = app.add_subcommand("reparam", "Reparameterization");
  reparam->require_subcommand(1);
  std::string embedding_path;
  auto* verify = reparam->add_subcommand("verify", "Check uniformity and inversion");
  verify->add_option("--kernel", kernel_path)->required();
  verify->add_option("--embedding", embedding_path)->required();
  verify->callback([&] {
    KernelHandle k = load_kernel(kernel_path);
    int ok = 0;
    char* report = nullptr;
    check(tci_reparam_verify(k.get(), read_file(embedding_path).c_str(), &ok, &report));
    out.report(take(report));
    exit_code = ok ? 0 : 1;
  });

  // fuzz
  auto* fuzz = app.add_subcommand("fuzz", "Rule fuzzing");
  fuzz->require_subcommand(1);
  std::string relation;
  std::size_t instances = 100, samples = 200;
  auto* fsep = fuzz->add_subcommand("separoid", "Separoid rule suite");
  fsep->add_option("--relation", relation, "sigma, tci or file:<oracle.json>")->required();
  fsep->add_option("--instances", instances);
  fsep->add_option("--samples", samples, "Sampled tuples per rule for large carriers");
  fsep->callback([&] {
    tci_fuzz_options options{instances, samples, seed};
    std::string oracle;
    tci_relation kind;
    if (relation == "sigma") {
      kind = TCI_RELATION_SIGMA;
    } else if (relation == "tci") {
      kind = TCI_RELATION_TCI;
    } else if (relation.rfind("file:", 0) == 0) {
      kind = TCI_RELATION_FILE;
      oracle = read_file(relation.substr(5));
    } else {
      throw CliError{"usage", "--relation must be sigma, tci or file:<path>"};
    }
    int passed = 0;
    char* report = nullptr;
    check(tci_fuzz_separoid(kind, oracle.empty() ? nullptr : oracle.c_str(), &options, &passed, &report));
    out.report(take(report));
    exit_code = passed ? 0 : 1;
  });

  // graph
  auto* graph = app.add_subcommand("graph", "Graph queries and surgeries");
  graph->require_subcommand(1);
  auto add_graph_command = [&](const char* name, const char* help, int kind) {
    auto* sub = graph->add_subcommand(name, help);
    sub->add_option("--graph", graph_path)->required();
    if (kind == TCI_SURGERY_HARD || kind == TCI_SURGERY_SOFT || kind == TCI_SURGERY_MARGINALIZE)
      sub->add_option("--nodes", nodes)->delimiter(',')->required();
    sub->callback([&, kind] {
      Graph g = load_graph(graph_path);
      char* json = nullptr;
      if (kind < 0) {
        check(tci_graph_describe(g.get(), &json));
      } else {
        Names nn(nodes);
        tci_graph* r = nullptr;
        check(tci_graph_surgery(g.get(), static_cast<tci_surgery>(kind), nn.get(), &r));
        Graph result(r);
        check(tci_graph_to_json(result.get(), &json));
      }
      out.report(take(json));
    });
  };
  add_graph_command("describe", "Acyclicity, order, components, parents, ancestors", -1);
  add_graph_command("hard", "Hard intervention", TCI_SURGERY_HARD);
  add_graph_command("soft", "Soft intervention extension", TCI_SURGERY_SOFT);
  add_graph_command("marginalize", "Latent projection", TCI_SURGERY_MARGINALIZE);
  add_graph_command("acyclify", "Acyclification", TCI_SURGERY_ACYCLIFY);

  // Resolve global options before any subcommand callback runs.
  app.parse_complete_callback([&] {
    out.pretty = format == "pretty";
    const char* env = std::getenv("TCI_SEED");
    seed = env ? parse_seed(env, "TCI_SEED") : parse_seed(seed_text, "--seed");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error({"usage", e.what()});
    return 2;
  } catch (const CliError& e) {
    print_error(e);
    return 2;
  }
  return exit_code;
}

#include "tci/separoid.hpp"

#include <memory>

#include "tci/error.hpp"
#include "tci/random.hpp"

namespace tci {

namespace {

enum class Outcome { Vacuous, Holds, Violated };

Outcome implies(bool premise, bool conclusion) {
  if (!premise) return Outcome::Vacuous;
  return conclusion ? Outcome::Holds : Outcome::Violated;
}

using Args = const std::size_t*;

struct Rule {
  std::string name;
  std::size_t arity;
  Outcome (*eval)(const SeparoidInstance&, Args);
  // Sampling hint: position whose element should lie below bound(args).
  int guided = -1;
  std::size_t (*bound)(const SeparoidInstance&, Args) = nullptr;
};

// Argument order is (alpha, beta, gamma, lambda) throughout.
const std::vector<Rule>& core_rules() {
  static const std::vector<Rule> rules = {
      {"kappa-extended-left-redundancy", 3,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.le(a[0], s.j(s.kappa, a[2])), s.rel(a[0], a[1], a[2]));
       },
       0, [](const SeparoidInstance& s, Args a) { return s.j(s.kappa, a[2]); }},
      {"tau-restricted-right-redundancy", 2,
       [](const SeparoidInstance& s, Args a) {
         return implies(true, s.rel(a[0], s.bottom, s.j(a[1], s.tau)));
       }},
      {"tau-inverted-right-decomposition", 3,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], a[1], a[2]), s.rel(a[0], s.j(s.tau, a[1]), a[2]));
       }},
      {"left-decomposition", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(s.j(a[0], a[3]), a[1], a[2]), s.rel(a[3], a[1], a[2]));
       }},
      {"right-decomposition", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], s.j(a[1], a[3]), a[2]), s.rel(a[0], a[3], a[2]));
       }},
      {"left-weak-union", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(s.j(a[0], a[3]), a[1], a[2]), s.rel(a[0], a[1], s.j(a[3], a[2])));
       }},
      {"right-weak-union", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], s.j(a[1], a[3]), a[2]), s.rel(a[0], a[1], s.j(a[3], a[2])));
       }},
      {"left-contraction", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], a[1], s.j(a[3], a[2])) && s.rel(a[3], a[1], a[2]),
                        s.rel(s.j(a[0], a[3]), a[1], a[2]));
       }},
      {"right-contraction", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], a[1], s.j(a[3], a[2])) && s.rel(a[0], a[3], a[2]),
                        s.rel(a[0], s.j(a[1], a[3]), a[2]));
       }},
      {"right-cross-contraction", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], a[1], s.j(a[3], a[2])) && s.rel(a[3], a[0], a[2]),
                        s.rel(a[0], s.j(a[1], a[3]), a[2]));
       }},
      {"flipped-left-cross-contraction", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], a[1], s.j(a[3], a[2])) && s.rel(a[1], a[3], a[2]),
                        s.rel(a[1], s.j(a[0], a[3]), a[2]));
       }},
      {"kappa-extended-inverted-left-decomposition", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], a[1], a[2]) && s.le(a[3], s.j(s.j(a[0], s.kappa), a[2])),
                        s.rel(s.j(a[0], a[3]), a[1], a[2]));
       },
       3, [](const SeparoidInstance& s, Args a) { return s.j(s.j(a[0], s.kappa), a[2]); }},
      {"tau-kappa-extended-inverted-right-decomposition", 4,
       [](const SeparoidInstance& s, Args a) {
         std::size_t up = s.j(s.j(s.j(s.tau, a[1]), s.kappa), a[2]);
         return implies(s.rel(a[0], a[1], a[2]) && s.le(a[3], up),
                        s.rel(a[0], s.j(s.j(s.tau, a[1]), a[3]), a[2]));
       },
       3, [](const SeparoidInstance& s, Args a) { return s.j(s.j(s.j(s.tau, a[1]), s.kappa), a[2]); }},
      // lambda plays the exchanged condition.
      {"kappa-equivalent-exchange", 4,
       [](const SeparoidInstance& s, Args a) {
         bool equivalent = s.le(a[2], s.j(s.kappa, a[3])) && s.le(a[3], s.j(s.kappa, a[2]));
         return implies(s.rel(a[0], a[1], a[2]) && equivalent, s.rel(a[0], a[1], a[3]));
       },
       3, [](const SeparoidInstance& s, Args a) { return s.j(s.kappa, a[2]); }},
      // (alpha, beta, gamma, gamma', alpha', beta').
      {"full-kappa-equivalent-exchange", 6,
       [](const SeparoidInstance& s, Args a) {
         bool premises = s.le(a[4], s.j(s.kappa, a[0])) && s.le(a[5], s.j(s.kappa, a[1])) &&
                         s.le(a[2], s.j(s.kappa, a[3])) && s.le(a[3], s.j(s.kappa, a[2]));
         return implies(premises && s.rel(a[0], a[1], a[2]), s.rel(a[4], a[5], a[3]));
       }},
      {"restricted-symmetry", 3,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], a[1], a[2]) && s.rel(a[1], s.bottom, a[2]), s.rel(a[1], a[0], a[2]));
       }},
      {"tau-restricted-symmetry", 3,
       [](const SeparoidInstance& s, Args a) {
         std::size_t c = s.j(a[2], s.tau);
         return implies(s.rel(a[0], a[1], c), s.rel(a[1], a[0], c));
       }},
  };
  return rules;
}

const Rule& symmetry_rule() {
  static const Rule rule{"symmetry", 3, [](const SeparoidInstance& s, Args a) {
                           return implies(s.rel(a[0], a[1], a[2]), s.rel(a[1], a[0], a[2]));
                         }};
  return rule;
}

const std::vector<Rule>& set_rules() {
  static const std::vector<Rule> rules = {
      {"left-composition", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], a[1], a[2]) && s.rel(a[3], a[1], a[2]), s.rel(s.j(a[0], a[3]), a[1], a[2]));
       }},
      {"right-composition", 4,
       [](const SeparoidInstance& s, Args a) {
         return implies(s.rel(a[0], a[1], a[2]) && s.rel(a[0], a[3], a[2]), s.rel(a[0], s.j(a[1], a[3]), a[2]));
       }},
      {"left-intersection", 4,
       [](const SeparoidInstance& s, Args a) {
         bool premise = (*s.disjoint)[a[0] * s.size() + a[3]] && s.rel(a[0], a[1], s.j(a[3], a[2])) &&
                        s.rel(a[3], a[1], s.j(a[0], a[2]));
         return implies(premise, s.rel(s.j(a[0], a[3]), a[1], a[2]));
       }},
      {"right-intersection", 4,
       [](const SeparoidInstance& s, Args a) {
         bool premise = (*s.disjoint)[a[1] * s.size() + a[3]] && s.rel(a[0], a[1], s.j(a[3], a[2])) &&
                        s.rel(a[0], a[3], s.j(a[1], a[2]));
         return implies(premise, s.rel(a[0], s.j(a[1], a[3]), a[2]));
       }},
      {"more-redundancies", 3,
       [](const SeparoidInstance& s, Args a) {
         const auto& minus = *s.minus;
         std::size_t n = s.size();
         bool base = s.rel(a[0], a[1], a[2]);
         bool trimmed = s.rel(minus[a[0] * n + a[2]], minus[a[1] * n + a[2]], a[2]);
         bool padded = s.rel(s.j(a[0], a[2]), s.j(s.j(s.tau, a[1]), a[2]), a[2]);
         return (base == trimmed && base == padded) ? Outcome::Holds : Outcome::Violated;
       }},
  };
  return rules;
}

std::vector<const Rule*> active_rules(const SeparoidInstance& inst, const RuleOptions& options) {
  std::vector<const Rule*> out;
  for (const auto& r : core_rules()) out.push_back(&r);
  // Symmetry applies when tau is equivalent to bottom.
  if (inst.le(inst.tau, inst.bottom)) out.push_back(&symmetry_rule());
  if (options.set_rules && inst.disjoint && inst.minus) {
    for (const auto& r : set_rules()) out.push_back(&r);
  }
  return out;
}

const Rule* find_rule(const std::string& name) {
  for (const auto& r : core_rules())
    if (r.name == name) return &r;
  if (symmetry_rule().name == name) return &symmetry_rule();
  for (const auto& r : set_rules())
    if (r.name == name) return &r;
  return nullptr;
}

struct Runner {
  const SeparoidInstance& inst;
  const RuleOptions& options;
  std::vector<std::vector<std::size_t>> below;  // below[b] = {x : x ≪ b}

  Runner(const SeparoidInstance& s, const RuleOptions& o) : inst(s), options(o), below(s.size()) {
    for (std::size_t b = 0; b < s.size(); ++b)
      for (std::size_t x = 0; x < s.size(); ++x)
        if (s.le(x, b)) below[b].push_back(x);
  }

  void record(RuleReport& report, const Rule& rule, Args a) {
    ++report.tested;
    Outcome o = rule.eval(inst, a);
    if (o == Outcome::Vacuous) return;
    ++report.applicable;
    if (o == Outcome::Violated && report.failures.size() < options.max_failures) {
      report.failures.emplace_back(a, a + rule.arity);
    }
  }

  // Alternatives for (gamma', alpha', beta') given (alpha, beta, gamma).
  std::vector<std::size_t> exchange_conditions(std::size_t gamma) const {
    std::vector<std::size_t> out;
    for (std::size_t g2 : below[inst.j(inst.kappa, gamma)])
      if (inst.le(gamma, inst.j(inst.kappa, g2))) out.push_back(g2);
    return out;
  }

  void exhaustive(RuleReport& report, const Rule& rule) {
    const std::size_t n = inst.size();
    std::size_t a[6] = {0, 0, 0, 0, 0, 0};
    if (rule.arity == 6) {
      for (a[0] = 0; a[0] < n; ++a[0])
        for (a[1] = 0; a[1] < n; ++a[1])
          for (a[2] = 0; a[2] < n; ++a[2]) {
            const auto conditions = exchange_conditions(a[2]);
            for (std::size_t g2 : conditions)
              for (std::size_t a2 : below[inst.j(inst.kappa, a[0])])
                for (std::size_t b2 : below[inst.j(inst.kappa, a[1])]) {
                  a[3] = g2;
                  a[4] = a2;
                  a[5] = b2;
                  record(report, rule, a);
                }
          }
      return;
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < rule.arity; ++i) total *= n;
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t r = idx;
      for (std::size_t i = rule.arity; i-- > 0;) {
        a[i] = r % n;
        r /= n;
      }
      record(report, rule, a);
    }
  }

  void sampled(RuleReport& report, const Rule& rule, Rng& rng) {
    const std::size_t n = inst.size();
    std::size_t a[6] = {0, 0, 0, 0, 0, 0};
    for (std::size_t s = 0; s < options.samples; ++s) {
      for (std::size_t i = 0; i < rule.arity; ++i) a[i] = rng.below(n);
      if (rule.arity == 6) {
        const auto conditions = exchange_conditions(a[2]);
        const auto& a2 = below[inst.j(inst.kappa, a[0])];
        const auto& b2 = below[inst.j(inst.kappa, a[1])];
        if (conditions.empty() || a2.empty() || b2.empty()) {
          ++report.tested;
          continue;
        }
        a[3] = conditions[rng.below(conditions.size())];
        a[4] = a2[rng.below(a2.size())];
        a[5] = b2[rng.below(b2.size())];
      } else if (rule.guided >= 0 && rng.below(2) == 0) {
        const auto& options_below = below[rule.bound(inst, a)];
        if (!options_below.empty()) a[rule.guided] = options_below[rng.below(options_below.size())];
      }
      record(report, rule, a);
    }
  }
};

}  // namespace

void validate_instance(const SeparoidInstance& inst) {
  const std::size_t n = inst.size();
  auto fail = [](const std::string& what) { throw Error(ErrorCode::MalformedTable, what); };
  if (n == 0) fail("empty carrier");
  if (inst.join.size() != n * n) fail("join table must be n x n");
  for (std::size_t v : inst.join)
    if (v >= n) fail("join table entry out of range");
  if (inst.order.size() != n * n) fail("order table must be n x n");
  if (inst.bottom >= n || inst.tau >= n || inst.kappa >= n) fail("bottom, tau or kappa out of range");
  if (!inst.relation) fail("missing relation");
  if (inst.disjoint && inst.disjoint->size() != n * n) fail("disjointness table must be n x n");
  if (inst.minus) {
    if (inst.minus->size() != n * n) fail("difference table must be n x n");
    for (std::size_t v : *inst.minus)
      if (v >= n) fail("difference table entry out of range");
  }
}

std::vector<std::string> coherence_violations(const SeparoidInstance& inst) {
  validate_instance(inst);
  const std::size_t n = inst.size();
  bool commutative = true, associative = true, neutral = true, least = true, monotone = true;
  auto triple = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (inst.j(inst.j(a, b), c) != inst.j(a, inst.j(b, c))) associative = false;
    if (inst.le(a, b) && !inst.le(a, inst.j(b, c))) monotone = false;
  };
  for (std::size_t a = 0; a < n; ++a) {
    if (inst.j(inst.bottom, a) != a) neutral = false;
    if (!inst.le(inst.bottom, a)) least = false;
    for (std::size_t b = 0; b < n; ++b)
      if (inst.j(a, b) != inst.j(b, a)) commutative = false;
  }
  if (n * n * n <= (std::size_t{1} << 21)) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) triple(a, b, c);
  } else {
    Rng rng(0);
    for (int i = 0; i < (1 << 21); ++i) triple(rng.below(n), rng.below(n), rng.below(n));
  }
  std::vector<std::string> out;
  if (!commutative) out.push_back("join-commutative");
  if (!associative) out.push_back("join-associative");
  if (!neutral) out.push_back("bottom-neutral");
  if (!least) out.push_back("bottom-least");
  if (!monotone) out.push_back("order-monotone-under-join");
  return out;
}

SeparoidInstance memoize(SeparoidInstance inst) {
  const std::size_t n = inst.size();
  if (n == 0 || n > 256) return inst;
  auto cache = std::make_shared<std::vector<std::int8_t>>(n * n * n, std::int8_t{-1});
  auto inner = inst.relation;
  inst.relation = [cache, inner, n](std::size_t a, std::size_t b, std::size_t c) {
    std::int8_t& slot = (*cache)[(a * n + b) * n + c];
    if (slot < 0) slot = inner(a, b, c) ? 1 : 0;
    return slot == 1;
  };
  return inst;
}

std::vector<std::string> rule_names(const SeparoidInstance& inst, const RuleOptions& options) {
  std::vector<std::string> out;
  for (const Rule* r : active_rules(inst, options)) out.push_back(r->name);
  return out;
}

std::vector<RuleReport> check_rules(const SeparoidInstance& raw, const RuleOptions& options) {
  validate_instance(raw);
  SeparoidInstance inst = memoize(raw);
  Runner runner(inst, options);
  Rng rng(options.seed);
  std::vector<RuleReport> out;
  for (const Rule* rule : active_rules(inst, options)) {
    RuleReport report;
    report.rule = rule->name;
    report.arity = rule->arity;
    if (inst.size() <= options.exhaustive_limit) {
      runner.exhaustive(report, *rule);
    } else {
      runner.sampled(report, *rule, rng);
    }
    out.push_back(std::move(report));
  }
  return out;
}

bool replay(const SeparoidInstance& inst, const std::string& rule_name, const std::vector<std::size_t>& args) {
  validate_instance(inst);
  const Rule* rule = find_rule(rule_name);
  if (rule == nullptr) throw Error(ErrorCode::InvalidArgument, "unknown rule '" + rule_name + "'");
  if (args.size() != rule->arity) throw Error(ErrorCode::InvalidArgument, "wrong number of arguments for " + rule_name);
  for (std::size_t a : args)
    if (a >= inst.size()) throw Error(ErrorCode::InvalidArgument, "argument out of range");
  bool set_rule = false;
  for (const auto& r : set_rules()) set_rule = set_rule || &r == rule;
  if (set_rule && (!inst.disjoint || !inst.minus)) {
    throw Error(ErrorCode::InvalidArgument, rule_name + " needs disjointness and difference tables");
  }
  return rule->eval(inst, args.data()) == Outcome::Violated;
}

std::vector<std::size_t> shrink_failure(const SeparoidInstance& inst, const std::string& rule,
                                        std::vector<std::size_t> args) {
  if (!replay(inst, rule, args)) return args;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& arg : args) {
      for (std::size_t c = 0; c < inst.size(); ++c) {
        if (c == arg || !inst.le(c, arg) || inst.le(arg, c)) continue;
        std::size_t saved = arg;
        arg = c;
        if (replay(inst, rule, args)) {
          changed = true;
          break;
        }
        arg = saved;
      }
    }
  }
  return args;
}

SeparoidInstance derive_relation(const SeparoidInstance& inst, std::size_t tau2, std::size_t kappa2) {
  validate_instance(inst);
  if (tau2 >= inst.size() || kappa2 >= inst.size()) {
    throw Error(ErrorCode::InvalidArgument, "derived parameters out of range");
  }
  if (!inst.le(tau2, tau2)) throw Error(ErrorCode::Precondition, "tau2 must satisfy tau2 ≪ tau2");
  SeparoidInstance out = inst;
  auto inner = inst.relation;
  const std::size_t n = inst.size();
  auto join = std::make_shared<std::vector<std::size_t>>(inst.join);
  out.relation = [inner, join, n, tau2, kappa2](std::size_t a, std::size_t b, std::size_t c) {
    return inner(a, (*join)[tau2 * n + b], (*join)[kappa2 * n + c]);
  };
  out.tau = inst.j(inst.tau, tau2);
  out.kappa = inst.j(inst.kappa, kappa2);
  return out;
}

SeparoidInstance symmetrize(const SeparoidInstance& inst) {
  validate_instance(inst);
  SeparoidInstance out = inst;
  auto inner = inst.relation;
  out.relation = [inner](std::size_t a, std::size_t b, std::size_t c) { return inner(a, b, c) || inner(b, a, c); };
  const std::size_t n = inst.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out.order[a * n + b] = inst.le(a, inst.j(inst.kappa, b)) ? 1 : 0;
  out.tau = inst.bottom;
  out.kappa = inst.bottom;
  return out;
}

SeparoidInstance subset_lattice(const std::vector<std::string>& generator_names) {
  const std::size_t k = generator_names.size();
  if (k > 10) throw Error(ErrorCode::InvalidArgument, "at most 10 generators");
  const std::size_t n = std::size_t{1} << k;
  SeparoidInstance out;
  out.labels.resize(n);
  out.join.resize(n * n);
  out.order.assign(n * n, 0);
  out.disjoint = std::vector<std::uint8_t>(n * n);
  out.minus = std::vector<std::size_t>(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    std::string label = "{";
    for (std::size_t i = 0; i < k; ++i) {
      if ((a >> i) & 1) label += (label.size() > 1 ? "," : "") + generator_names[i];
    }
    out.labels[a] = label + "}";
    for (std::size_t b = 0; b < n; ++b) {
      out.join[a * n + b] = a | b;
      (*out.disjoint)[a * n + b] = (a & b) == 0;
      (*out.minus)[a * n + b] = a & ~b;
    }
  }
  out.bottom = 0;
  return out;
}

}  // namespace tci

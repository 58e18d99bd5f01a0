#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tci {

// A finite structure (carrier, join, order, ternary relation) to be tested
// against the asymmetric separoid rules. Elements are carrier indices and
// equivalence is index equality.
struct SeparoidInstance {
  std::vector<std::string> labels;
  std::vector<std::size_t> join;     // row-major n x n
  std::vector<std::uint8_t> order;   // order[a * n + b] != 0 iff a ≪ b
  std::function<bool(std::size_t, std::size_t, std::size_t)> relation;
  std::size_t bottom = 0, tau = 0, kappa = 0;
  // Set-valued carriers may supply these to enable the set rules.
  std::optional<std::vector<std::uint8_t>> disjoint;  // n x n
  std::optional<std::vector<std::size_t>> minus;      // n x n, a without b

  std::size_t size() const { return labels.size(); }
  std::size_t j(std::size_t a, std::size_t b) const { return join[a * size() + b]; }
  bool le(std::size_t a, std::size_t b) const { return order[a * size() + b] != 0; }
  bool rel(std::size_t a, std::size_t b, std::size_t c) const { return relation(a, b, c); }
};

// Throws MalformedTable on size or range errors.
void validate_instance(const SeparoidInstance& inst);

// Names of violated coherence conditions between join, order and bottom.
std::vector<std::string> coherence_violations(const SeparoidInstance& inst);

// Wraps the relation in a cache of all n^3 triples, filled on demand.
SeparoidInstance memoize(SeparoidInstance inst);

struct RuleReport {
  std::string rule;
  std::size_t arity = 0;
  std::size_t tested = 0;
  std::size_t applicable = 0;                    // premise held
  std::vector<std::vector<std::size_t>> failures;
};

struct RuleOptions {
  std::size_t samples = 1000;          // per rule when sampling
  std::uint64_t seed = 1;
  std::size_t exhaustive_limit = 16;   // enumerate all tuples when the carrier is this small
  std::size_t max_failures = 8;        // recorded per rule
  bool set_rules = false;              // composition, intersection, redundancy variants
};

// Names of the rules check_rules evaluates on inst with these options, in report order.
std::vector<std::string> rule_names(const SeparoidInstance& inst, const RuleOptions& options);

std::vector<RuleReport> check_rules(const SeparoidInstance& inst, const RuleOptions& options = {});

// True when args violate the named rule on inst. Throws InvalidArgument on an
// unknown rule or wrong arity.
bool replay(const SeparoidInstance& inst, const std::string& rule, const std::vector<std::size_t>& args);

// Greedily replaces arguments by strictly smaller elements while the violation persists.
std::vector<std::size_t> shrink_failure(const SeparoidInstance& inst, const std::string& rule,
                                        std::vector<std::size_t> args);

// a ⊥' b | c  iff  a ⊥ tau2 ∨ b | kappa2 ∨ c, with tau and kappa joined accordingly.
// Throws Precondition unless tau2 ≪ tau2.
SeparoidInstance derive_relation(const SeparoidInstance& inst, std::size_t tau2, std::size_t kappa2);

// Logical OR of both orientations, order a ≪ kappa ∨ b, tau = kappa = bottom.
SeparoidInstance symmetrize(const SeparoidInstance& inst);

// Subset lattice over k generators: element index = bitmask, join = OR, bottom = 0.
// Fills labels, join, disjoint and minus; order and relation are left to the caller.
SeparoidInstance subset_lattice(const std::vector<std::string>& generator_names);

}  // namespace tci

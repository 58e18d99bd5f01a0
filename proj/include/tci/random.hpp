#pragma once

#include <cstdint>
#include <random>

#include "tci/graph.hpp"
#include "tci/kernel.hpp"

namespace tci {

// Seeded generator with portable bounded draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool percent(unsigned p) { return below(100) < p; }

 private:
  std::mt19937_64 engine_;
};

struct RandomGraphOptions {
  std::size_t min_nodes = 1;
  std::size_t max_nodes = 6;
  std::size_t max_inputs = 2;
  unsigned directed_percent = 30;
  unsigned bidirected_percent = 15;
  bool acyclic = false;
  bool self_loops = true;
};

// Nodes are named "v1", "v2", ...; the first few are inputs.
Cdmg random_cdmg(Rng& rng, const RandomGraphOptions& options);

// Probability vector with denominators dividing a draw from [1, max_den]; each
// cell is forced to zero with the given percentage (at least one cell stays positive).
std::vector<Rational> random_distribution(Rng& rng, std::size_t n, unsigned max_den = 12,
                                          unsigned zero_percent = 20);

Kernel random_kernel(Rng& rng, const Space& source, const Space& target, unsigned max_den = 12,
                     unsigned zero_percent = 20);

FiniteVar make_var(const std::string& name, std::size_t outcomes);

}  // namespace tci

#include "tci/random.hpp"

#include <algorithm>

namespace tci {

Cdmg random_cdmg(Rng& rng, const RandomGraphOptions& options) {
  std::size_t n = options.min_nodes + rng.below(options.max_nodes - options.min_nodes + 1);
  std::size_t inputs = rng.below(std::min(options.max_inputs, n) + 1);
  NodeSet in, out;
  std::vector<NodeId> names;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("v" + std::to_string(i + 1));
    (i < inputs ? in : out).insert(names.back());
  }
  EdgeSet directed, bidirected;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = inputs; b < n; ++b) {
      if (a == b && !options.self_loops) continue;
      if (options.acyclic && a >= b) continue;
      if (rng.percent(options.directed_percent)) directed.emplace(names[a], names[b]);
    }
  }
  if (!options.acyclic) {
    for (std::size_t a = inputs; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (rng.percent(options.bidirected_percent)) bidirected.emplace(names[a], names[b]);
      }
    }
  }
  return Cdmg(in, out, directed, bidirected);
}

std::vector<Rational> random_distribution(Rng& rng, std::size_t n, unsigned max_den,
                                          unsigned zero_percent) {
  std::vector<bool> alive(n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    alive[i] = !rng.percent(zero_percent);
    count += alive[i];
  }
  if (count == 0) alive[rng.below(n)] = true;
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) cells.push_back(i);
  }
  unsigned den = 1 + static_cast<unsigned>(rng.below(max_den));
  std::vector<unsigned long> units(n, 0);
  for (unsigned u = 0; u < den; ++u) ++units[cells[rng.below(cells.size())]];
  std::vector<Rational> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = Rational(units[i], den);
    out[i].canonicalize();
  }
  return out;
}

Kernel random_kernel(Rng& rng, const Space& source, const Space& target, unsigned max_den,
                     unsigned zero_percent) {
  std::vector<Rational> table;
  table.reserve(source.size() * target.size());
  for (std::size_t s = 0; s < source.size(); ++s) {
    auto row = random_distribution(rng, target.size(), max_den, zero_percent);
    table.insert(table.end(), row.begin(), row.end());
  }
  return Kernel(source, target, std::move(table));
}

FiniteVar make_var(const std::string& name, std::size_t outcomes) {
  FiniteVar v{name, {}};
  for (std::size_t i = 0; i < outcomes; ++i) v.outcomes.push_back(std::to_string(i));
  return v;
}

}  // namespace tci

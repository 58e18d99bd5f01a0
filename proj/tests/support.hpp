#pragma once

#include "tci/graph.hpp"

namespace testing_support {

// Two inputs, six outputs, eight directed edges.
inline tci::Cdmg figure_one() {
  return tci::Cdmg({"v1", "v2"}, {"v3", "v4", "v5", "v6", "v7", "v8"},
                   {{"v1", "v4"}, {"v2", "v6"}, {"v2", "v7"}, {"v4", "v5"}, {"v4", "v6"},
                    {"v3", "v8"}, {"v3", "v7"}, {"v6", "v5"}},
                   {});
}

// Conditional acyclic mixed graph with one bidirected edge.
inline tci::Cdmg figure_two() {
  return tci::Cdmg({"v2", "v3"}, {"v1", "v4", "v5", "v6", "v7", "v8"},
                   {{"v2", "v4"}, {"v3", "v6"}, {"v1", "v4"}, {"v1", "v5"}, {"v4", "v7"},
                    {"v5", "v7"}, {"v7", "v8"}, {"v6", "v8"}},
                   {{"v1", "v6"}});
}

inline tci::Cdmg two_cycle() {
  return tci::Cdmg({}, {"v1", "v2"}, {{"v1", "v2"}, {"v2", "v1"}}, {});
}

}  // namespace testing_support

#include <string>
#include <vector>

#include "tci/kernel.hpp"

namespace testing_support {

inline tci::Kernel kernel_of(const tci::Space& source, const tci::Space& target,
                             const std::vector<std::string>& entries) {
  std::vector<tci::Rational> table;
  for (const auto& e : entries) table.push_back(tci::parse_rational(e));
  return tci::Kernel(source, target, table);
}

inline tci::Space space_of(std::vector<std::pair<std::string, std::size_t>> vars) {
  std::vector<tci::FiniteVar> out;
  for (auto& [name, n] : vars) {
    tci::FiniteVar v{name, {}};
    for (std::size_t i = 0; i < n; ++i) v.outcomes.push_back(std::to_string(i));
    out.push_back(v);
  }
  return tci::Space(out);
}

}  // namespace testing_support

#include "tci/random.hpp"
#include "tci/tci.hpp"

namespace testing_support {

// W with one or two variables (at most 8 points), T with at most 4 points.
using tci::random_trans_space;
using tci::random_map_rv;

inline tci::TransRv random_kernel_rv(tci::Rng& rng, const tci::Space& domain, const std::string& name) {
  return tci::TransRv::from_kernel(
      tci::random_kernel(rng, domain, tci::Space({tci::make_var(name, 1 + rng.below(3))}), 6, 40));
}

}  // namespace testing_support

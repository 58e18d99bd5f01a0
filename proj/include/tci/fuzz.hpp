#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tci/io.hpp"
#include "tci/separoid.hpp"

namespace tci {

struct FuzzOptions {
  std::size_t instances = 100;
  std::size_t samples = 200;  // per rule and instance when sampling
  std::uint64_t seed = 1;
  std::size_t max_failures = 20;
};

struct FuzzFailure {
  std::size_t instance = 0;
  std::string rule;
  std::vector<std::string> original, shrunk;  // carrier labels
  Json context;                               // the generated graph or space
};

struct FuzzReport {
  std::string relation;
  std::size_t instances = 0;
  std::vector<RuleReport> totals;  // summed per rule; failures left empty
  std::size_t violations = 0;
  std::vector<FuzzFailure> failures;
  bool passed() const { return violations == 0; }
};

// Random graphs with 2..5 nodes under the subset-lattice rule suite with set rules.
FuzzReport fuzz_sigma(const FuzzOptions& options);
// Random transition spaces with two deterministic generators plus T.
FuzzReport fuzz_tci(const FuzzOptions& options);
// One instance; options.instances repeats the sampling with successive seeds.
FuzzReport fuzz_oracle(const SeparoidInstance& inst, const FuzzOptions& options);

Json fuzz_report_to_json(const FuzzReport& r);

}  // namespace tci

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tci/graph.hpp"
#include "tci/kernel.hpp"
#include "tci/random.hpp"
#include "tci/separation.hpp"

namespace tci {

// Causal Bayesian network: an acyclic graph without bidirected edges, one
// finite variable per node (named after the node) and one kernel
// P(X_v | X_Pa(v)) per output node. Latent nodes are outputs hidden from
// observation.
struct Cbn {
  Cdmg graph;
  NodeSet latent;
  std::map<NodeId, FiniteVar> spaces;
  std::map<NodeId, Kernel> kernels;
};

// Throws InvalidModel on any structural inconsistency.
void validate_cbn(const Cbn& m);

Space node_space(const Cbn& m, const NodeSet& nodes);

// Product of node kernels in reverse topological order: X_J ⇝ X_{V∪U}.
Kernel joint_kernel(const Cbn& m);
// Same product for a caller-chosen topological order of the output nodes.
Kernel joint_kernel(const Cbn& m, const std::vector<NodeId>& order);

// Joint kernel with latent nodes marginalized out.
Kernel observational_kernel(const Cbn& m);

// Latent projection of the graph.
Cdmg observed_graph(const Cbn& m);

inline constexpr const char* kStarOutcome = "⋆";

// w ⊆ J ∪ V become inputs; their kernels are dropped.
Cbn hard_intervene_cbn(const Cbn& m, const NodeSet& w);
// Adds an input I:v per v ∈ w with outcomes of v plus ⋆.
Cbn soft_intervene_cbn(const Cbn& m, const NodeSet& w);
// Reclassifies w ⊆ V as latent.
Cbn marginalize_cbn(const Cbn& m, const NodeSet& w);

// ------------------------------------------------------------- global Markov

struct GmpOptions {
  enum class Scope { All, Sample, Explicit };
  Scope scope = Scope::All;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::vector<SepQuery> triples;     // for Scope::Explicit
  std::size_t budget_nodes = 10;     // largest |J ∪ V| enumerated exhaustively
  std::size_t max_checks = 2000000;  // triples evaluated before giving up
  bool keep_witnesses = false;
};

struct GmpWitness {
  SepQuery query;
  Kernel kernel;  // P(X_A | X_C), free of X_B and of the inputs outside C
};

struct GmpReport {
  std::size_t triples = 0;
  std::size_t separated = 0;
  std::vector<SepQuery> violations;  // separated but not independent
  std::vector<GmpWitness> witnesses;
  bool sampled = false;
  bool budget_exceeded = false;
};

GmpReport gmp_verify(const Cbn& m, const GmpOptions& options = {});

// --------------------------------------------------------------- do-calculus

struct DoQuery {
  NodeSet a, b, c, d;
};

struct VersionCheck {
  std::string label;     // which conditional the kernel should represent
  bool product = false;  // kernel ⊗ base reproduces the joint exactly
  bool almost_everywhere = false;  // matches the disintegration off null sets
};

struct DoReport {
  int rule = 0;
  bool applicable = false;
  std::optional<Walk> open_walk;  // why the premise failed
  std::optional<Kernel> kernel;
  std::vector<VersionCheck> checks;
  bool sound = false;             // every check passed
};

// rule ∈ {1, 2, 3}. Throws InvalidQuery unless a, b, c ⊆ V and a, b, c, d are pairwise disjoint.
DoReport do_calculus(const Cbn& m, int rule, const DoQuery& q);

struct BackdoorReport {
  bool applicable = false;
  std::optional<Walk> open_walk;
  std::optional<Kernel> adjustment;    // P(X_A | X_F, X_C, X_B, X_D)
  std::optional<Kernel> covariates;    // P(X_F | X_C, X_D)
  std::optional<Kernel> adjusted;      // composition, P(X_A | X_B, X_C, X_D)
  std::optional<Kernel> interventional;
  std::vector<VersionCheck> checks;
  bool sound = false;
};

// Requires J ⊆ d and pairwise disjoint a, b, c, f ⊆ V and d.
BackdoorReport backdoor_adjust(const Cbn& m, const NodeSet& a, const NodeSet& b, const NodeSet& c,
                               const NodeSet& f, const NodeSet& d);

// ------------------------------------------------------------------- random

struct RandomCbnOptions {
  std::size_t max_outputs = 5;
  std::size_t max_latent = 2;
  std::size_t max_inputs = 2;
  std::size_t max_outcomes = 3;
  unsigned edge_percent = 40;
  std::size_t max_denominator = 12;
  unsigned zero_percent = 20;
};

// Inputs j1.., observed outputs v1.., latent outputs u1...
Cbn random_cbn(Rng& rng, const RandomCbnOptions& options = {});

}  // namespace tci

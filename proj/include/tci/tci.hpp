#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tci/kernel.hpp"
#include "tci/random.hpp"
#include "tci/separoid.hpp"

namespace tci {

// A kernel K(W|T) over disjointly named W and T.
class TransSpace {
 public:
  explicit TransSpace(Kernel base);

  const Space& w() const { return base_.target(); }
  const Space& t() const { return base_.source(); }
  const Kernel& base() const { return base_; }
  // Joint space of W and T: the domain of every random variable.
  const Space& domain() const { return domain_; }
  // domain index of (w, t), stored w-major.
  std::size_t domain_index(std::size_t w, std::size_t ti) const { return domain_of_[w * t().size() + ti]; }

 private:
  Kernel base_;
  Space domain_;
  std::vector<std::size_t> domain_of_;
};

struct CiPoint {
  std::size_t t = 0, y = 0, z = 0;
  bool operator==(const CiPoint&) const = default;
};

struct CiVerdict {
  bool independent = false;
  std::optional<Kernel> witness;                             // Q(X|Z)
  std::optional<std::pair<CiPoint, CiPoint>> counterexample;  // same z, different X-conditionals
};

// K(X,Y,...|T) for random variables with pairwise distinct codomain names.
Kernel joint_pushforward(const TransSpace& ts, const std::vector<TransRv>& rvs);

// X ⊥ Y | Z: exists Q(X|Z) with K(X,Y,Z|T) = Q(X|Z) ⊗ K(Y,Z|T).
CiVerdict tci_check(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z);

// Verdict only, without building the witness kernel.
bool tci_holds(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z);

// Exact check of K(X,Y,Z|T) = Q(X|Z) ⊗ K(Y,Z|T) for a candidate Q.
bool factorizes(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z, const Kernel& q);

// For every t: K(X|Y,Z,T=t) = K(X|Z,T=t) wherever (y,z) has mass at t.
bool weak_ci_check(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z);

// Range(X|Y=y,Z=z) = Range(X|Z=z) over the joint range of deterministic maps.
bool variation_ci_check(const TransRv& x, const TransRv& y, const TransRv& z);

struct DeterministicCiResult {
  bool independent = false;                 // F ⊥ Y | H
  std::optional<std::vector<std::size_t>> phi;  // H-codomain index -> F-codomain index
  bool consistent = false;                  // verdict agrees with existence of phi
};

// F and H must depend on T only.
DeterministicCiResult deterministic_ci_check(const TransSpace& ts, const TransRv& f, const TransRv& h,
                                             const TransRv& y);

struct BatteryReport {
  bool tci = false;               // X ⊥ Y | Z
  bool with_t = false;            // X ⊥ T⊗Y | Z
  bool split = false;             // X ⊥ * | Z and the factorization with its witness
  bool weak_split = false;        // X ⊥ * | Z and per-t weak CI
  bool mixtures = false;          // X ⊥ T⊗Y | Z under each probed Q(T) mixture
  std::size_t mixtures_probed = 0;
  bool consistent = false;        // first four agree and the second implies the fifth
};

BatteryReport equivalence_battery(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z);

// X ⊑ Y almost surely: φ with K(X,Y|T) = δ_φ(X|Y) ⊗ K(Y|T). φ maps Y-codomain
// indices to X-codomain indices; values Y never attains map to 0.
std::optional<std::vector<std::size_t>> function_of(const TransSpace& ts, const TransRv& x, const TransRv& y);

// Random variable helpers.
TransRv pair_rv(const TransRv& a, const TransRv& b);
// s maps codomain indices of x to indices of s_space.
TransRv apply_statistic(const TransRv& x, const std::vector<std::size_t>& s, const Space& s_space);

// Joins of deterministic generators plus the T projection (the last generator,
// labelled "T"). Order: almost-sure function-of; tau = {T}; kappa = bottom.
SeparoidInstance tci_separoid(const TransSpace& ts, const std::vector<TransRv>& generators);

struct RandomSpaceOptions {
  unsigned max_den = 12;
  unsigned zero_percent = 20;
};

// W is one variable with 2..8 outcomes or two with 2..3 and 2; T has 1..4 points
// (the one-point case is the empty space).
TransSpace random_trans_space(Rng& rng, const RandomSpaceOptions& options = {});
// Deterministic variable with a uniformly drawn map onto 1..max_outcomes values.
TransRv random_map_rv(Rng& rng, const Space& domain, const std::string& name, std::size_t max_outcomes = 3);

// ---------------------------------------------------------------- statistics

struct StatReport {
  CiVerdict ancillary;                 // S ⊥ Θ
  CiVerdict sufficient;                // X ⊥ Θ | S
  std::optional<CiVerdict> adequate;   // X ⊥ Θ⊗Y | S
};

// model: P(W|Θ); x: a random variable over (W,Θ); s: statistic on x's codomain.
StatReport stat_concepts(const Kernel& model, const TransRv& x, const std::vector<std::size_t>& s,
                         const Space& s_space, const std::optional<TransRv>& y = std::nullopt);

// P(X=x|θ) ∝ h(x)·g(S(x),θ); g is indexed [statistic value][θ]. Zero totals are rejected.
Kernel fisher_neyman_model(const Space& x_space, const Space& theta_space, const std::vector<Rational>& h,
                           const std::vector<std::size_t>& s, std::size_t s_count,
                           const std::vector<std::vector<Rational>>& g);

std::string distribution_label(const std::vector<Rational>& row);

struct PropensityReport {
  std::vector<std::size_t> e;            // class of each x
  std::vector<std::string> labels;       // row distribution per class
  CiVerdict verdict;                     // Y ⊥ X | E
  struct Candidate {
    bool valid = false;                  // Y ⊥ X | S
    bool e_below = false;                // E is a function of S
  };
  std::vector<Candidate> candidates;
};

// k: P(Y|X). Candidates are statistics of X given as (map, value count).
PropensityReport propensity(const Kernel& k,
                            const std::vector<std::pair<std::vector<std::size_t>, std::size_t>>& candidates = {});

struct BayesReport {
  Kernel posterior;                      // P(Θ|X,Π)
  CiVerdict posterior_ci;                // Θ ⊥ X | Z
  CiVerdict likelihood_ci;               // X ⊥ Θ⊗Π | L
  struct Candidate {
    bool valid = false;                  // Θ ⊥ X | S
    bool z_below = false;                // Z is a function of S off null sets
  };
  std::vector<Candidate> candidates;
};

// model: P(X|Θ); prior: P(Θ|Π). Candidates are statistics on the (X,Π) space.
BayesReport bayes_posterior_check(const Kernel& model, const Kernel& prior,
                                  const std::vector<std::pair<std::vector<std::size_t>, std::size_t>>& candidates = {});

}  // namespace tci

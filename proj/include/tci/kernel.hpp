#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tci/rational.hpp"

namespace tci {

using NameSet = std::set<std::string>;

struct FiniteVar {
  std::string name;
  std::vector<std::string> outcomes;
  bool operator==(const FiniteVar&) const = default;
};

// Product of finite variables, kept sorted by name. Assignments are mixed-radix
// indices with the first variable most significant. The empty space has one point.
class Space {
 public:
  Space() = default;
  explicit Space(std::vector<FiniteVar> vars);

  const std::vector<FiniteVar>& vars() const { return vars_; }
  std::size_t arity() const { return vars_.size(); }
  std::size_t size() const { return size_; }
  NameSet names() const;
  bool has(const std::string& name) const { return position(name) >= 0; }
  int position(const std::string& name) const;
  const FiniteVar& var(const std::string& name) const;

  std::vector<std::size_t> decode(std::size_t index) const;
  std::size_t encode(const std::vector<std::size_t>& digits) const;
  std::size_t digit(std::size_t index, std::size_t var_pos) const {
    return (index / strides_[var_pos]) % vars_[var_pos].outcomes.size();
  }
  std::size_t stride(std::size_t var_pos) const { return strides_[var_pos]; }

  // "X=0,Y=1"; the one-point space formats as "".
  std::string format(std::size_t index) const;
  // Accepts the variables in any order.
  std::size_t parse(const std::string& key) const;

  Space subspace(const NameSet& names) const;
  Space without(const NameSet& names) const;

  bool operator==(const Space& other) const { return vars_ == other.vars_; }

 private:
  std::vector<FiniteVar> vars_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

// Union by name; a shared name must carry identical outcomes.
Space join_spaces(const Space& a, const Space& b);

// Index table from `from` to `to`, where every variable of `to` occurs in `from`.
std::vector<std::size_t> projection_map(const Space& from, const Space& to);

// Index table over first x second (first-major) into `to`; each variable of `to`
// is read from `first` when present there, otherwise from `second`.
std::vector<std::size_t> combine_map(const Space& to, const Space& first, const Space& second);

// Row-stochastic table over source x target with exact rational entries.
class Kernel {
 public:
  Kernel();
  Kernel(Space source, Space target, std::vector<Rational> table);

  const Space& source() const { return source_; }
  const Space& target() const { return target_; }
  const Rational& at(std::size_t s, std::size_t t) const { return table_[s * target_.size() + t]; }
  const std::vector<Rational>& table() const { return table_; }
  bool is_deterministic() const;

  bool operator==(const Kernel& other) const {
    return source_ == other.source_ && target_ == other.target_ && table_ == other.table_;
  }

 private:
  struct Unchecked {};
  Kernel(Space source, Space target, std::vector<Rational> table, Unchecked);
  friend Kernel make_kernel_unchecked(Space, Space, std::vector<Rational>);

  Space source_, target_;
  std::vector<Rational> table_;
};

// For results of operations that preserve stochasticity by construction.
Kernel make_kernel_unchecked(Space source, Space target, std::vector<Rational> table);

// A transitional random variable over a transition space: a map or kernel from
// the joint space of W and T (the domain) to its codomain.
class TransRv {
 public:
  static TransRv deterministic(Space domain, Space codomain, std::vector<std::size_t> map);
  static TransRv from_kernel(Kernel k);
  static TransRv projection(const Space& domain, const NameSet& names);
  static TransRv constant(const Space& domain);

  const Space& domain() const { return domain_; }
  const Space& codomain() const { return codomain_; }
  bool is_deterministic() const { return deterministic_; }
  const std::vector<std::size_t>& map() const { return map_; }
  // Only for kernel-valued variables.
  const Kernel& kernel() const { return *kernel_; }
  Kernel as_kernel() const;

 private:
  Space domain_, codomain_;
  bool deterministic_ = true;
  std::vector<std::size_t> map_;
  std::optional<Kernel> kernel_;
};

Kernel delta_kernel(const std::vector<std::size_t>& f, const Space& source, const Space& target);
Kernel identity_kernel(const Space& space);
Kernel marginalize(const Kernel& k, const NameSet& keep);
Kernel product(const Kernel& q, const Kernel& k);
Kernel compose(const Kernel& q, const Kernel& k);
Kernel extend_with_identity(const Kernel& k);
Kernel pushforward(const Kernel& k, const TransRv& x);

// m holds (target index, source index) pairs.
bool is_null_set(const Kernel& k, const std::vector<std::pair<std::size_t, std::size_t>>& m);

// K(X|Y,Z) from K(X,Y|Z); uniform rows where Y=y has zero mass.
Kernel disintegrate(const Kernel& k, const NameSet& on);

// Source indices of p (and q) whose rows differ.
std::vector<std::size_t> kernels_agree_ae(const Kernel& p, const Kernel& q, const Kernel& base);

// True when the disagreement set of p and q is null for base.
bool agree_almost_everywhere(const Kernel& p, const Kernel& q, const Kernel& base);

// φ from the Y-subspace to the X-subspace (indices) with K(X,Y|T) = δ_φ ⊗ K(Y|T).
std::optional<std::vector<std::size_t>> ismapof(const Kernel& k, const NameSet& x, const NameSet& y);

}  // namespace tci

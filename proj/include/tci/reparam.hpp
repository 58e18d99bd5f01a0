#pragma once

#include <cstddef>
#include <vector>

#include "tci/kernel.hpp"

namespace tci {

// Real values for the outcomes of one finite variable; values[i] belongs to outcome i.
// Values must be pairwise distinct.
struct RealEmbedding {
  FiniteVar var;
  std::vector<Rational> values;
};

void validate_embedding(const RealEmbedding& emb);

// Step data of F(x;u|z) = K(X<x|z) + u·K(X=x|z), atoms in ascending embedded order.
class Itcdf {
 public:
  Itcdf(const Kernel& k, RealEmbedding emb);

  const Space& source() const { return source_; }
  const RealEmbedding& embedding() const { return emb_; }
  // Outcome indices sorted by embedded value.
  const std::vector<std::size_t>& ascending() const { return ascending_; }
  const Rational& below(std::size_t z, std::size_t outcome) const { return below_[z * n_ + outcome]; }
  const Rational& atom(std::size_t z, std::size_t outcome) const { return atom_[z * n_ + outcome]; }

  // F(x;u|z) for u in [0,1].
  Rational operator()(std::size_t outcome, const Rational& u, std::size_t z) const;

 private:
  Space source_;
  RealEmbedding emb_;
  std::size_t n_ = 0;
  std::vector<std::size_t> ascending_;
  std::vector<Rational> below_, atom_;  // indexed [z][outcome]
};

Itcdf itcdf(const Kernel& k, const RealEmbedding& emb);

struct QuantileValue {
  std::size_t outcome = 0;
  Rational value;
  bool boundary = false;  // e = 0: the least embedded value is returned
};

// R(e|z): least embedded x with F(x;1|z) >= e. Throws InvalidArgument unless 0 <= e <= 1.
QuantileValue tqf(const Itcdf& f, const Rational& e, std::size_t z);

struct ReparamRow {
  std::size_t z = 0;
  bool uniform = false;    // CDF of E is the identity at all breakpoints and midpoints
  bool inverts = false;    // R(F(x;u|z)|z) = x on every positive atom's u-interval
  std::size_t points_checked = 0;
};

struct ReparamReport {
  std::vector<ReparamRow> rows;
  bool ok = false;
};

ReparamReport verify_reparam(const Kernel& k, const RealEmbedding& emb);

}  // namespace tci

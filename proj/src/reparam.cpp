#include "tci/reparam.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "tci/error.hpp"

namespace tci {

void validate_embedding(const RealEmbedding& emb) {
  if (emb.values.size() != emb.var.outcomes.size()) {
    throw Error(ErrorCode::InvalidArgument, "embedding needs one value per outcome of '" + emb.var.name + "'");
  }
  std::set<Rational> distinct(emb.values.begin(), emb.values.end());
  if (distinct.size() != emb.values.size()) throw Error(ErrorCode::InvalidArgument, "embedded values must be distinct");
}

Itcdf::Itcdf(const Kernel& k, RealEmbedding emb) : source_(k.source()), emb_(std::move(emb)) {
  validate_embedding(emb_);
  if (!(k.target() == Space({emb_.var}))) {
    throw Error(ErrorCode::SpaceMismatch, "kernel target must be the embedded variable '" + emb_.var.name + "'");
  }
  n_ = emb_.values.size();
  ascending_.resize(n_);
  std::iota(ascending_.begin(), ascending_.end(), std::size_t{0});
  std::sort(ascending_.begin(), ascending_.end(),
            [&](std::size_t a, std::size_t b) { return emb_.values[a] < emb_.values[b]; });
  below_.assign(source_.size() * n_, 0);
  atom_.assign(source_.size() * n_, 0);
  for (std::size_t z = 0; z < source_.size(); ++z) {
    Rational acc = 0;
    for (std::size_t x : ascending_) {
      below_[z * n_ + x] = acc;
      atom_[z * n_ + x] = k.at(z, x);
      acc += k.at(z, x);
    }
  }
}

Rational Itcdf::operator()(std::size_t outcome, const Rational& u, std::size_t z) const {
  if (outcome >= n_ || z >= source_.size()) throw Error(ErrorCode::InvalidArgument, "index out of range");
  if (u < 0 || u > 1) throw Error(ErrorCode::InvalidArgument, "u must lie in [0,1]");
  return below(z, outcome) + u * atom(z, outcome);
}

Itcdf itcdf(const Kernel& k, const RealEmbedding& emb) { return Itcdf(k, emb); }

QuantileValue tqf(const Itcdf& f, const Rational& e, std::size_t z) {
  if (e < 0 || e > 1) throw Error(ErrorCode::InvalidArgument, "e must lie in [0,1]");
  if (z >= f.source().size()) throw Error(ErrorCode::InvalidArgument, "source index out of range");
  QuantileValue out;
  out.boundary = sgn(e) == 0;
  for (std::size_t x : f.ascending()) {
    if (f(x, 1, z) >= e) {
      out.outcome = x;
      out.value = f.embedding().values[x];
      return out;
    }
  }
  // Unreachable for stochastic rows: the last atom has F = 1.
  throw Error(ErrorCode::MalformedTable, "row does not sum to one");
}

ReparamReport verify_reparam(const Kernel& k, const RealEmbedding& emb) {
  Itcdf f(k, emb);
  ReparamReport report;
  report.ok = true;
  for (std::size_t z = 0; z < f.source().size(); ++z) {
    ReparamRow row;
    row.z = z;
    // P(E <= e) = Σ_x K(x|z) · clamp((e - below_x) / K(x|z), 0, 1).
    auto cdf = [&](const Rational& e) {
      Rational total = 0;
      for (std::size_t x : f.ascending()) {
        const Rational& p = f.atom(z, x);
        if (sgn(p) == 0) continue;
        Rational part = (e - f.below(z, x)) / p;
        if (part < 0) part = 0;
        if (part > 1) part = 1;
        total += p * part;
      }
      return total;
    };
    std::set<Rational> breaks{Rational(0), Rational(1)};
    for (std::size_t x : f.ascending()) {
      breaks.insert(f(x, 0, z));
      breaks.insert(f(x, 1, z));
    }
    row.uniform = true;
    std::optional<Rational> previous;
    for (const auto& b : breaks) {
      if (previous) {
        Rational mid = (*previous + b) / 2;
        row.uniform = row.uniform && cdf(mid) == mid;
        ++row.points_checked;
      }
      row.uniform = row.uniform && cdf(b) == b;
      ++row.points_checked;
      previous = b;
    }
    // On u ∈ (0,1], F(x;u|z) sweeps (lo, hi]. R maps the whole interval to x when
    // every earlier atom has F(·;1|z) <= lo and F(x;1|z) >= hi.
    row.inverts = true;
    for (std::size_t i = 0; i < f.ascending().size(); ++i) {
      std::size_t x = f.ascending()[i];
      if (sgn(f.atom(z, x)) == 0) continue;
      Rational lo = f(x, 0, z), hi = f(x, 1, z);
      bool below_ok = true;
      for (std::size_t j = 0; j < i; ++j) below_ok = below_ok && f(f.ascending()[j], 1, z) <= lo;
      bool ends = tqf(f, hi, z).outcome == x && tqf(f, (lo + hi) / 2, z).outcome == x;
      row.inverts = row.inverts && below_ok && ends;
    }
    report.ok = report.ok && row.uniform && row.inverts;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace tci

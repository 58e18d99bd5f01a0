#include "tci/tci.hpp"

#include <map>
#include <memory>
#include <set>
#include <tuple>

#include "tci/error.hpp"
#include "tci/random.hpp"

namespace tci {

TransSpace::TransSpace(Kernel base) : base_(std::move(base)) {
  for (const auto& v : base_.target().vars()) {
    if (base_.source().has(v.name)) {
      throw Error(ErrorCode::SpaceMismatch, "'" + v.name + "' is both a W and a T variable");
    }
  }
  domain_ = join_spaces(base_.target(), base_.source());
  domain_of_ = combine_map(domain_, base_.target(), base_.source());
}

namespace {

void check_domain(const TransSpace& ts, const TransRv& rv) {
  if (!(rv.domain() == ts.domain())) {
    throw Error(ErrorCode::SpaceMismatch, "random variable is not defined on the transition space");
  }
}

// Calls f(value, probability) for every value with positive probability at domain point d.
template <typename F>
void for_each_value(const TransRv& rv, std::size_t d, F&& f) {
  static const Rational one(1);
  if (rv.is_deterministic()) {
    f(rv.map()[d], one);
    return;
  }
  const Kernel& k = rv.kernel();
  for (std::size_t v = 0; v < k.target().size(); ++v) {
    const Rational& p = k.at(d, v);
    if (sgn(p) != 0) f(v, p);
  }
}

// Joint mass of (y, z, x) at one source point, keyed in canonical order.
using JointMass = std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational>;

JointMass joint_at(const TransSpace& ts, std::size_t t, const TransRv& x, const TransRv& y, const TransRv& z) {
  JointMass out;
  Rational term;
  for (std::size_t w = 0; w < ts.w().size(); ++w) {
    const Rational& kw = ts.base().at(t, w);
    if (sgn(kw) == 0) continue;
    std::size_t d = ts.domain_index(w, t);
    for_each_value(x, d, [&](std::size_t xv, const Rational& px) {
      for_each_value(y, d, [&](std::size_t yv, const Rational& py) {
        for_each_value(z, d, [&](std::size_t zv, const Rational& pz) {
          term = kw * px * py * pz;
          out[{yv, zv, xv}] += term;
        });
      });
    });
  }
  return out;
}

using Conditional = std::vector<std::pair<std::size_t, Rational>>;

// Walks the attained (y,z) groups of a joint in order, passing the normalized X-conditional.
template <typename F>
void for_each_group(const JointMass& joint, F&& f) {
  auto it = joint.begin();
  while (it != joint.end()) {
    auto [y, z, x0] = it->first;
    (void)x0;
    auto end = it;
    Rational mass = 0;
    while (end != joint.end() && std::get<0>(end->first) == y && std::get<1>(end->first) == z) {
      mass += end->second;
      ++end;
    }
    Conditional cond;
    for (auto k = it; k != end; ++k) cond.emplace_back(std::get<2>(k->first), k->second / mass);
    f(y, z, mass, cond);
    it = end;
  }
}

struct Decision {
  bool independent = true;
  std::map<std::size_t, Conditional> by_z;
  std::optional<std::pair<CiPoint, CiPoint>> counterexample;
};

Decision decide(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z) {
  check_domain(ts, x);
  check_domain(ts, y);
  check_domain(ts, z);
  Decision out;
  std::map<std::size_t, CiPoint> first_at;
  for (std::size_t t = 0; t < ts.t().size(); ++t) {
    JointMass joint = joint_at(ts, t, x, y, z);
    bool stop = false;
    for_each_group(joint, [&](std::size_t yv, std::size_t zv, const Rational&, Conditional& cond) {
      if (stop) return;
      auto found = out.by_z.find(zv);
      if (found == out.by_z.end()) {
        out.by_z.emplace(zv, std::move(cond));
        first_at[zv] = {t, yv, zv};
      } else if (found->second != cond) {
        out.independent = false;
        out.counterexample = std::make_pair(first_at[zv], CiPoint{t, yv, zv});
        stop = true;
      }
    });
    if (stop) break;
  }
  return out;
}

Kernel witness_kernel(const Decision& d, const TransRv& x, const TransRv& z) {
  const std::size_t nx = x.codomain().size(), nz = z.codomain().size();
  std::vector<Rational> table(nx * nz);
  for (std::size_t zv = 0; zv < nz; ++zv) {
    auto it = d.by_z.find(zv);
    if (it == d.by_z.end()) {
      for (std::size_t xv = 0; xv < nx; ++xv) table[zv * nx + xv] = Rational(1, nx);
    } else {
      for (const auto& [xv, p] : it->second) table[zv * nx + xv] = p;
    }
  }
  return make_kernel_unchecked(z.codomain(), x.codomain(), std::move(table));
}

}  // namespace

Kernel joint_pushforward(const TransSpace& ts, const std::vector<TransRv>& rvs) {
  Space target;
  for (const auto& rv : rvs) {
    check_domain(ts, rv);
    for (const auto& v : rv.codomain().vars()) {
      if (target.has(v.name)) throw Error(ErrorCode::NameClash, "two random variables produce '" + v.name + "'");
    }
    target = join_spaces(target, rv.codomain());
  }
  // Offset of each codomain value inside the joint target index.
  std::vector<std::vector<std::size_t>> offset(rvs.size());
  for (std::size_t r = 0; r < rvs.size(); ++r) {
    const Space& cod = rvs[r].codomain();
    offset[r].resize(cod.size());
    for (std::size_t v = 0; v < cod.size(); ++v) {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < cod.arity(); ++k) {
        idx += cod.digit(v, k) * target.stride(static_cast<std::size_t>(target.position(cod.vars()[k].name)));
      }
      offset[r][v] = idx;
    }
  }
  const std::size_t nt = ts.t().size();
  std::vector<Rational> table(nt * target.size());
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t w = 0; w < ts.w().size(); ++w) {
      const Rational& kw = ts.base().at(t, w);
      if (sgn(kw) == 0) continue;
      std::size_t d = ts.domain_index(w, t);
      auto recurse = [&](auto&& self, std::size_t r, std::size_t idx, const Rational& mass) -> void {
        if (r == rvs.size()) {
          table[t * target.size() + idx] += mass;
          return;
        }
        for_each_value(rvs[r], d, [&](std::size_t v, const Rational& p) {
          self(self, r + 1, idx + offset[r][v], mass * p);
        });
      };
      recurse(recurse, 0, 0, kw);
    }
  }
  return make_kernel_unchecked(ts.t(), target, std::move(table));
}

CiVerdict tci_check(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z) {
  Decision d = decide(ts, x, y, z);
  CiVerdict v;
  v.independent = d.independent;
  if (d.independent) {
    v.witness = witness_kernel(d, x, z);
  } else {
    v.counterexample = d.counterexample;
  }
  return v;
}

bool tci_holds(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z) {
  return decide(ts, x, y, z).independent;
}

bool factorizes(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z, const Kernel& q) {
  check_domain(ts, x);
  check_domain(ts, y);
  check_domain(ts, z);
  if (q.source().size() != z.codomain().size() || q.target().size() != x.codomain().size()) {
    throw Error(ErrorCode::SpaceMismatch, "candidate kernel has the wrong shape");
  }
  const std::size_t nx = x.codomain().size();
  for (std::size_t t = 0; t < ts.t().size(); ++t) {
    JointMass joint = joint_at(ts, t, x, y, z);
    std::map<std::pair<std::size_t, std::size_t>, Rational> marginal;
    for (const auto& [key, p] : joint) marginal[{std::get<0>(key), std::get<1>(key)}] += p;
    for (const auto& [yz, m] : marginal) {
      for (std::size_t xv = 0; xv < nx; ++xv) {
        auto it = joint.find({yz.first, yz.second, xv});
        Rational lhs = it == joint.end() ? Rational(0) : it->second;
        if (lhs != q.at(yz.second, xv) * m) return false;
      }
    }
  }
  return true;
}

bool weak_ci_check(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z) {
  check_domain(ts, x);
  check_domain(ts, y);
  check_domain(ts, z);
  for (std::size_t t = 0; t < ts.t().size(); ++t) {
    JointMass joint = joint_at(ts, t, x, y, z);
    std::map<std::pair<std::size_t, std::size_t>, Rational> xz;
    std::map<std::size_t, Rational> zm;
    std::map<std::pair<std::size_t, std::size_t>, Rational> yz;
    for (const auto& [key, p] : joint) {
      auto [yv, zv, xv] = key;
      xz[{zv, xv}] += p;
      zm[zv] += p;
      yz[{yv, zv}] += p;
    }
    // K(x,y,z)·K(z) = K(x,z)·K(y,z) for every x at attained (y,z).
    for (const auto& [pair, myz] : yz) {
      auto [yv, zv] = pair;
      for (const auto& [pz, mxz] : xz) {
        if (pz.first != zv) continue;
        auto it = joint.find({yv, zv, pz.second});
        Rational lhs = it == joint.end() ? Rational(0) : Rational(it->second * zm[zv]);
        if (lhs != mxz * myz) return false;
      }
    }
  }
  return true;
}

bool variation_ci_check(const TransRv& x, const TransRv& y, const TransRv& z) {
  if (!x.is_deterministic() || !y.is_deterministic() || !z.is_deterministic()) {
    throw Error(ErrorCode::InvalidArgument, "variation independence needs deterministic maps");
  }
  if (!(x.domain() == y.domain()) || !(x.domain() == z.domain())) {
    throw Error(ErrorCode::SpaceMismatch, "maps have different domains");
  }
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> range;
  std::set<std::pair<std::size_t, std::size_t>> xz, yz;
  for (std::size_t d = 0; d < x.domain().size(); ++d) {
    range.insert({x.map()[d], y.map()[d], z.map()[d]});
    xz.insert({z.map()[d], x.map()[d]});
    yz.insert({y.map()[d], z.map()[d]});
  }
  for (const auto& [yv, zv] : yz) {
    for (auto it = xz.lower_bound({zv, 0}); it != xz.end() && it->first == zv; ++it) {
      if (!range.count({it->second, yv, zv})) return false;
    }
  }
  return true;
}

DeterministicCiResult deterministic_ci_check(const TransSpace& ts, const TransRv& f, const TransRv& h,
                                             const TransRv& y) {
  check_domain(ts, f);
  check_domain(ts, h);
  if (!f.is_deterministic() || !h.is_deterministic()) {
    throw Error(ErrorCode::Precondition, "F and H must be deterministic");
  }
  const std::size_t nt = ts.t().size();
  std::vector<std::size_t> f_of(nt), h_of(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    f_of[t] = f.map()[ts.domain_index(0, t)];
    h_of[t] = h.map()[ts.domain_index(0, t)];
    for (std::size_t w = 1; w < ts.w().size(); ++w) {
      if (f.map()[ts.domain_index(w, t)] != f_of[t] || h.map()[ts.domain_index(w, t)] != h_of[t]) {
        throw Error(ErrorCode::Precondition, "F and H must depend on T only");
      }
    }
  }
  DeterministicCiResult out;
  out.independent = tci_holds(ts, f, y, h);
  std::vector<std::size_t> phi(h.codomain().size(), 0);
  std::vector<bool> fixed(phi.size(), false);
  bool exists = true;
  for (std::size_t t = 0; t < nt && exists; ++t) {
    if (fixed[h_of[t]] && phi[h_of[t]] != f_of[t]) exists = false;
    phi[h_of[t]] = f_of[t];
    fixed[h_of[t]] = true;
  }
  if (exists) out.phi = phi;
  out.consistent = out.independent == exists;
  return out;
}

std::optional<std::vector<std::size_t>> function_of(const TransSpace& ts, const TransRv& x, const TransRv& y) {
  check_domain(ts, x);
  check_domain(ts, y);
  std::vector<std::size_t> phi(y.codomain().size(), 0);
  std::vector<bool> fixed(y.codomain().size(), false);
  for (std::size_t t = 0; t < ts.t().size(); ++t) {
    // Mass of (y, x) at t.
    std::map<std::pair<std::size_t, std::size_t>, Rational> joint;
    for (std::size_t w = 0; w < ts.w().size(); ++w) {
      const Rational& kw = ts.base().at(t, w);
      if (sgn(kw) == 0) continue;
      std::size_t d = ts.domain_index(w, t);
      for_each_value(x, d, [&](std::size_t xv, const Rational& px) {
        for_each_value(y, d, [&](std::size_t yv, const Rational& py) { joint[{yv, xv}] += kw * px * py; });
      });
    }
    for (const auto& [key, mass] : joint) {
      if (sgn(mass) == 0) continue;
      auto [yv, xv] = key;
      if (fixed[yv] && phi[yv] != xv) return std::nullopt;
      phi[yv] = xv;
      fixed[yv] = true;
    }
  }
  return phi;
}

TransSpace random_trans_space(Rng& rng, const RandomSpaceOptions& options) {
  std::vector<FiniteVar> w;
  if (rng.below(2) == 0) {
    w.push_back(make_var("W", 2 + rng.below(7)));
  } else {
    w.push_back(make_var("W1", 2 + rng.below(2)));
    w.push_back(make_var("W2", 2));
  }
  std::size_t nt = 1 + rng.below(4);
  Space t = nt == 1 ? Space() : Space({make_var("T", nt)});
  return TransSpace(random_kernel(rng, t, Space(w), options.max_den, options.zero_percent));
}

TransRv random_map_rv(Rng& rng, const Space& domain, const std::string& name, std::size_t max_outcomes) {
  std::size_t n = 1 + rng.below(max_outcomes);
  std::vector<std::size_t> map(domain.size());
  for (auto& v : map) v = rng.below(n);
  return TransRv::deterministic(domain, Space({make_var(name, n)}), map);
}

TransRv pair_rv(const TransRv& a, const TransRv& b) {
  if (!(a.domain() == b.domain())) throw Error(ErrorCode::SpaceMismatch, "maps have different domains");
  const std::size_t na = a.codomain().size(), nb = b.codomain().size();
  bool disjoint = true;
  for (const auto& v : a.codomain().vars()) {
    if (b.codomain().has(v.name)) disjoint = false;
  }
  Space codomain;
  std::vector<std::size_t> index(na * nb);
  if (disjoint) {
    codomain = join_spaces(a.codomain(), b.codomain());
    index = combine_map(codomain, a.codomain(), b.codomain());
  } else {
    FiniteVar v;
    for (const auto& x : a.codomain().vars()) v.name += x.name + "+";
    v.name += "|";
    for (const auto& x : b.codomain().vars()) v.name += "+" + x.name;
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < nb; ++j) {
        v.outcomes.push_back("(" + a.codomain().format(i) + ";" + b.codomain().format(j) + ")");
        index[i * nb + j] = i * nb + j;
      }
    }
    codomain = Space({v});
  }
  const Space& dom = a.domain();
  if (a.is_deterministic() && b.is_deterministic()) {
    std::vector<std::size_t> map(dom.size());
    for (std::size_t d = 0; d < dom.size(); ++d) map[d] = index[a.map()[d] * nb + b.map()[d]];
    return TransRv::deterministic(dom, codomain, std::move(map));
  }
  std::vector<Rational> table(dom.size() * codomain.size());
  for (std::size_t d = 0; d < dom.size(); ++d) {
    for_each_value(a, d, [&](std::size_t i, const Rational& p) {
      for_each_value(b, d, [&](std::size_t j, const Rational& q) {
        table[d * codomain.size() + index[i * nb + j]] += p * q;
      });
    });
  }
  return TransRv::from_kernel(make_kernel_unchecked(dom, codomain, std::move(table)));
}

TransRv apply_statistic(const TransRv& x, const std::vector<std::size_t>& s, const Space& s_space) {
  if (s.size() != x.codomain().size()) throw Error(ErrorCode::InvalidMap, "statistic is not total");
  for (auto v : s) {
    if (v >= s_space.size()) throw Error(ErrorCode::InvalidMap, "statistic value out of range");
  }
  const Space& dom = x.domain();
  if (x.is_deterministic()) {
    std::vector<std::size_t> map(dom.size());
    for (std::size_t d = 0; d < dom.size(); ++d) map[d] = s[x.map()[d]];
    return TransRv::deterministic(dom, s_space, std::move(map));
  }
  std::vector<Rational> table(dom.size() * s_space.size());
  for (std::size_t d = 0; d < dom.size(); ++d) {
    for_each_value(x, d, [&](std::size_t v, const Rational& p) { table[d * s_space.size() + s[v]] += p; });
  }
  return TransRv::from_kernel(make_kernel_unchecked(dom, s_space, std::move(table)));
}

BatteryReport equivalence_battery(const TransSpace& ts, const TransRv& x, const TransRv& y, const TransRv& z) {
  BatteryReport r;
  TransRv t_rv = TransRv::projection(ts.domain(), ts.t().names());
  TransRv star = TransRv::constant(ts.domain());
  TransRv ty = pair_rv(t_rv, y);
  r.tci = tci_holds(ts, x, y, z);
  r.with_t = tci_holds(ts, x, ty, z);
  CiVerdict below = tci_check(ts, x, star, z);
  r.split = below.independent && factorizes(ts, x, y, z, *below.witness);
  r.weak_split = below.independent && weak_ci_check(ts, x, y, z);

  // Probe mixtures: every point mass and the uniform mixture over T.
  const std::size_t nt = ts.t().size();
  std::vector<std::vector<Rational>> probes;
  for (std::size_t t = 0; t < nt; ++t) {
    std::vector<Rational> q(nt, 0);
    q[t] = 1;
    probes.push_back(q);
  }
  if (nt > 1) probes.emplace_back(nt, Rational(1, nt));
  r.mixtures = true;
  auto index_of = combine_map(ts.domain(), ts.w(), ts.t());
  for (const auto& q : probes) {
    std::vector<Rational> table(ts.domain().size());
    for (std::size_t t = 0; t < nt; ++t) {
      for (std::size_t w = 0; w < ts.w().size(); ++w) table[index_of[w * nt + t]] = q[t] * ts.base().at(t, w);
    }
    TransSpace mixed(make_kernel_unchecked(Space(), ts.domain(), std::move(table)));
    if (!tci_holds(mixed, x, ty, z)) r.mixtures = false;
    ++r.mixtures_probed;
  }
  r.consistent = r.tci == r.with_t && r.tci == r.split && r.tci == r.weak_split && (!r.with_t || r.mixtures);
  return r;
}

// ---------------------------------------------------------------- statistics

SeparoidInstance tci_separoid(const TransSpace& ts, const std::vector<TransRv>& generators) {
  if (generators.size() > 4) throw Error(ErrorCode::InvalidArgument, "at most 4 generators besides T");
  std::vector<TransRv> gens = generators;
  gens.push_back(TransRv::projection(ts.domain(), ts.t().names()));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    check_domain(ts, gens[i]);
    if (!gens[i].is_deterministic()) throw Error(ErrorCode::InvalidArgument, "separoid generators must be deterministic");
    names.push_back(i + 1 == gens.size() ? "T" : gens[i].codomain().vars().empty() ? "*" : gens[i].codomain().vars()[0].name);
  }
  SeparoidInstance inst = subset_lattice(names);
  const std::size_t n = inst.size(), points = ts.domain().size();
  // Value of each carrier element at each domain point, as a mixed-radix index.
  auto rvs = std::make_shared<std::vector<TransRv>>();
  for (std::size_t m = 0; m < n; ++m) {
    std::vector<std::size_t> map(points, 0);
    std::size_t size = 1;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (((m >> i) & 1) == 0) continue;
      const std::size_t k = gens[i].codomain().size();
      for (std::size_t d = 0; d < points; ++d) map[d] = map[d] * k + gens[i].map()[d];
      size *= k;
    }
    rvs->push_back(TransRv::deterministic(ts.domain(), Space({make_var("V", size)}), std::move(map)));
  }
  std::vector<std::uint8_t> positive(points, 0);
  for (std::size_t t = 0; t < ts.t().size(); ++t)
    for (std::size_t w = 0; w < ts.w().size(); ++w)
      if (sgn(ts.base().at(t, w)) != 0) positive[ts.domain_index(w, t)] = 1;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::map<std::size_t, std::size_t> value_of;
      bool function = true;
      for (std::size_t d = 0; d < points && function; ++d) {
        if (!positive[d]) continue;
        auto [it, fresh] = value_of.emplace((*rvs)[b].map()[d], (*rvs)[a].map()[d]);
        if (!fresh && it->second != (*rvs)[a].map()[d]) function = false;
      }
      inst.order[a * n + b] = function;
    }
  inst.tau = n >> 1;  // the T generator alone
  inst.kappa = 0;
  auto space = std::make_shared<TransSpace>(ts);
  inst.relation = [space, rvs](std::size_t a, std::size_t b, std::size_t c) {
    return tci_holds(*space, (*rvs)[a], (*rvs)[b], (*rvs)[c]);
  };
  return inst;
}

StatReport stat_concepts(const Kernel& model, const TransRv& x, const std::vector<std::size_t>& s,
                         const Space& s_space, const std::optional<TransRv>& y) {
  TransSpace ts(model);
  TransRv stat = apply_statistic(x, s, s_space);
  TransRv theta = TransRv::projection(ts.domain(), ts.t().names());
  TransRv star = TransRv::constant(ts.domain());
  StatReport r;
  r.ancillary = tci_check(ts, stat, theta, star);
  r.sufficient = tci_check(ts, x, theta, stat);
  if (y) r.adequate = tci_check(ts, x, pair_rv(theta, *y), stat);
  return r;
}

Kernel fisher_neyman_model(const Space& x_space, const Space& theta_space, const std::vector<Rational>& h,
                           const std::vector<std::size_t>& s, std::size_t s_count,
                           const std::vector<std::vector<Rational>>& g) {
  const std::size_t nx = x_space.size(), nth = theta_space.size();
  if (h.size() != nx || s.size() != nx || g.size() != s_count) {
    throw Error(ErrorCode::InvalidModel, "factor tables have the wrong shape");
  }
  std::vector<Rational> table(nth * nx);
  for (std::size_t th = 0; th < nth; ++th) {
    Rational total = 0;
    for (std::size_t x = 0; x < nx; ++x) {
      if (s[x] >= s_count || g[s[x]].size() != nth) throw Error(ErrorCode::InvalidModel, "statistic table malformed");
      if (sgn(h[x]) < 0 || sgn(g[s[x]][th]) < 0) throw Error(ErrorCode::InvalidModel, "negative factor");
      table[th * nx + x] = h[x] * g[s[x]][th];
      total += table[th * nx + x];
    }
    if (sgn(total) == 0) throw Error(ErrorCode::InvalidModel, "parameter value with zero total mass");
    for (std::size_t x = 0; x < nx; ++x) table[th * nx + x] /= total;
  }
  return Kernel(theta_space, x_space, std::move(table));
}

std::string distribution_label(const std::vector<Rational>& row) {
  std::string out = "[";
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += " ";
    out += to_string(row[i]);
  }
  return out + "]";
}

namespace {

// Groups identical rows of k into classes; returns class per source index and the labels.
std::pair<std::vector<std::size_t>, std::vector<std::string>> row_classes(const Kernel& k) {
  std::map<std::string, std::size_t> seen;
  std::vector<std::size_t> cls(k.source().size());
  std::vector<std::string> labels;
  for (std::size_t s = 0; s < k.source().size(); ++s) {
    std::vector<Rational> row(k.table().begin() + static_cast<long>(s * k.target().size()),
                              k.table().begin() + static_cast<long>((s + 1) * k.target().size()));
    std::string label = distribution_label(row);
    auto [it, inserted] = seen.emplace(label, labels.size());
    if (inserted) labels.push_back(label);
    cls[s] = it->second;
  }
  return {cls, labels};
}

Space label_space(const std::string& name, const std::vector<std::string>& labels) {
  return Space({FiniteVar{name, labels}});
}

Space count_space(const std::string& name, std::size_t n) {
  FiniteVar v{name, {}};
  for (std::size_t i = 0; i < n; ++i) v.outcomes.push_back(std::to_string(i));
  return Space({v});
}

}  // namespace

PropensityReport propensity(const Kernel& k,
                            const std::vector<std::pair<std::vector<std::size_t>, std::size_t>>& candidates) {
  TransSpace ts(k);
  PropensityReport r;
  auto [cls, labels] = row_classes(k);
  r.e = cls;
  r.labels = labels;
  auto t_of = projection_map(ts.domain(), ts.t());
  std::vector<std::size_t> e_map(ts.domain().size());
  for (std::size_t d = 0; d < e_map.size(); ++d) e_map[d] = cls[t_of[d]];
  TransRv e = TransRv::deterministic(ts.domain(), label_space("E", labels), e_map);
  TransRv y = TransRv::projection(ts.domain(), ts.w().names());
  TransRv x = TransRv::projection(ts.domain(), ts.t().names());
  r.verdict = tci_check(ts, y, x, e);
  for (const auto& [s, count] : candidates) {
    if (s.size() != ts.t().size()) throw Error(ErrorCode::InvalidMap, "statistic is not total on X");
    std::vector<std::size_t> s_map(ts.domain().size());
    for (std::size_t d = 0; d < s_map.size(); ++d) s_map[d] = s[t_of[d]];
    TransRv srv = TransRv::deterministic(ts.domain(), count_space("S", count), s_map);
    PropensityReport::Candidate c;
    c.valid = tci_holds(ts, y, x, srv);
    c.e_below = ismapof(joint_pushforward(ts, {e, srv}), {"E"}, {"S"}).has_value();
    r.candidates.push_back(c);
  }
  return r;
}

BayesReport bayes_posterior_check(const Kernel& model, const Kernel& prior,
                                  const std::vector<std::pair<std::vector<std::size_t>, std::size_t>>& candidates) {
  Kernel joint = product(model, prior);
  TransSpace ts(joint);
  const NameSet x_names = model.target().names(), theta_names = model.source().names();
  Kernel posterior = disintegrate(joint, x_names);
  auto [post_cls, post_labels] = row_classes(posterior);
  auto [lik_cls, lik_labels] = row_classes(model);
  auto post_row = projection_map(ts.domain(), posterior.source());
  auto theta_of = projection_map(ts.domain(), model.source());
  std::vector<std::size_t> z_map(ts.domain().size()), l_map(ts.domain().size());
  for (std::size_t d = 0; d < z_map.size(); ++d) {
    z_map[d] = post_cls[post_row[d]];
    l_map[d] = lik_cls[theta_of[d]];
  }
  TransRv z = TransRv::deterministic(ts.domain(), label_space("Z", post_labels), z_map);
  TransRv l = TransRv::deterministic(ts.domain(), label_space("L", lik_labels), l_map);
  TransRv theta = TransRv::projection(ts.domain(), theta_names);
  TransRv x = TransRv::projection(ts.domain(), x_names);
  TransRv pi = TransRv::projection(ts.domain(), ts.t().names());
  BayesReport r{posterior, tci_check(ts, theta, x, z), tci_check(ts, x, pair_rv(theta, pi), l), {}};
  for (const auto& [s, count] : candidates) {
    if (s.size() != posterior.source().size()) throw Error(ErrorCode::InvalidMap, "statistic is not total on (X, Π)");
    std::vector<std::size_t> s_map(ts.domain().size());
    for (std::size_t d = 0; d < s_map.size(); ++d) s_map[d] = s[post_row[d]];
    TransRv srv = TransRv::deterministic(ts.domain(), count_space("S", count), s_map);
    BayesReport::Candidate c;
    c.valid = tci_holds(ts, theta, x, srv);
    c.z_below = ismapof(joint_pushforward(ts, {z, srv}), {"Z"}, {"S"}).has_value();
    r.candidates.push_back(c);
  }
  return r;
}

}  // namespace tci

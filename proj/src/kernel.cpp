#include "tci/kernel.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tci/error.hpp"

namespace tci {

// ---------------------------------------------------------------- Space

Space::Space(std::vector<FiniteVar> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end(),
            [](const FiniteVar& a, const FiniteVar& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto& v = vars_[i];
    if (v.name.empty()) throw Error(ErrorCode::InvalidArgument, "variable names must be nonempty");
    if (i > 0 && vars_[i - 1].name == v.name) {
      throw Error(ErrorCode::NameClash, "duplicate variable '" + v.name + "'");
    }
    if (v.outcomes.empty()) {
      throw Error(ErrorCode::InvalidArgument, "variable '" + v.name + "' has no outcomes");
    }
    std::set<std::string> seen(v.outcomes.begin(), v.outcomes.end());
    if (seen.size() != v.outcomes.size()) {
      throw Error(ErrorCode::InvalidArgument, "variable '" + v.name + "' repeats an outcome");
    }
  }
  strides_.assign(vars_.size(), 1);
  size_ = 1;
  for (std::size_t i = vars_.size(); i-- > 0;) {
    strides_[i] = size_;
    size_ *= vars_[i].outcomes.size();
  }
}

NameSet Space::names() const {
  NameSet out;
  for (const auto& v : vars_) out.insert(v.name);
  return out;
}

int Space::position(const std::string& name) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), name,
                             [](const FiniteVar& v, const std::string& n) { return v.name < n; });
  if (it == vars_.end() || it->name != name) return -1;
  return static_cast<int>(it - vars_.begin());
}

const FiniteVar& Space::var(const std::string& name) const {
  int p = position(name);
  if (p < 0) throw Error(ErrorCode::UnknownVariable, "unknown variable '" + name + "'");
  return vars_[static_cast<std::size_t>(p)];
}

std::vector<std::size_t> Space::decode(std::size_t index) const {
  std::vector<std::size_t> digits(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) digits[i] = digit(index, i);
  return digits;
}

std::size_t Space::encode(const std::vector<std::size_t>& digits) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) index += digits[i] * strides_[i];
  return index;
}

std::string Space::format(std::size_t index) const {
  std::string out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (i) out += ',';
    out += vars_[i].name + '=' + vars_[i].outcomes[digit(index, i)];
  }
  return out;
}

std::size_t Space::parse(const std::string& key) const {
  std::vector<std::size_t> digits(vars_.size(), 0);
  std::vector<bool> set(vars_.size(), false);
  if (!key.empty()) {
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
      auto eq = part.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::Parse, "malformed assignment '" + key + "'");
      std::string name = part.substr(0, eq), value = part.substr(eq + 1);
      int p = position(name);
      if (p < 0) throw Error(ErrorCode::UnknownVariable, "unknown variable '" + name + "' in '" + key + "'");
      const auto& outs = vars_[static_cast<std::size_t>(p)].outcomes;
      auto it = std::find(outs.begin(), outs.end(), value);
      if (it == outs.end()) {
        throw Error(ErrorCode::Parse, "unknown outcome '" + value + "' for variable '" + name + "'");
      }
      if (set[static_cast<std::size_t>(p)]) throw Error(ErrorCode::Parse, "variable '" + name + "' assigned twice");
      set[static_cast<std::size_t>(p)] = true;
      digits[static_cast<std::size_t>(p)] = static_cast<std::size_t>(it - outs.begin());
    }
  }
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (!set[i]) throw Error(ErrorCode::Parse, "assignment '" + key + "' misses variable '" + vars_[i].name + "'");
  }
  return encode(digits);
}

Space Space::subspace(const NameSet& names) const {
  std::vector<FiniteVar> vars;
  for (const auto& n : names) vars.push_back(var(n));
  return Space(std::move(vars));
}

Space Space::without(const NameSet& names) const {
  std::vector<FiniteVar> vars;
  for (const auto& v : vars_) {
    if (!names.count(v.name)) vars.push_back(v);
  }
  return Space(std::move(vars));
}

Space join_spaces(const Space& a, const Space& b) {
  std::vector<FiniteVar> vars = a.vars();
  for (const auto& v : b.vars()) {
    int p = a.position(v.name);
    if (p < 0) {
      vars.push_back(v);
    } else if (!(a.vars()[static_cast<std::size_t>(p)] == v)) {
      throw Error(ErrorCode::SchemaMismatch, "variable '" + v.name + "' declared with different outcomes");
    }
  }
  return Space(std::move(vars));
}

std::vector<std::size_t> projection_map(const Space& from, const Space& to) {
  std::vector<std::size_t> src_pos;
  for (const auto& v : to.vars()) {
    int p = from.position(v.name);
    if (p < 0) throw Error(ErrorCode::UnknownVariable, "unknown variable '" + v.name + "'");
    if (!(from.vars()[static_cast<std::size_t>(p)] == v)) {
      throw Error(ErrorCode::SchemaMismatch, "variable '" + v.name + "' declared with different outcomes");
    }
    src_pos.push_back(static_cast<std::size_t>(p));
  }
  std::vector<std::size_t> out(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < src_pos.size(); ++k) idx += from.digit(i, src_pos[k]) * to.stride(k);
    out[i] = idx;
  }
  return out;
}

std::vector<std::size_t> combine_map(const Space& to, const Space& first, const Space& second) {
  struct Source {
    bool from_first;
    std::size_t pos;
  };
  std::vector<Source> sources;
  for (const auto& v : to.vars()) {
    int p = first.position(v.name);
    const Space* sp = &first;
    bool from_first = true;
    if (p < 0) {
      p = second.position(v.name);
      sp = &second;
      from_first = false;
    }
    if (p < 0) throw Error(ErrorCode::MissingVariable, "variable '" + v.name + "' cannot be resolved");
    if (!(sp->vars()[static_cast<std::size_t>(p)] == v)) {
      throw Error(ErrorCode::SchemaMismatch, "variable '" + v.name + "' declared with different outcomes");
    }
    sources.push_back({from_first, static_cast<std::size_t>(p)});
  }
  std::vector<std::size_t> out(first.size() * second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = 0; j < second.size(); ++j) {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < sources.size(); ++k) {
        std::size_t d = sources[k].from_first ? first.digit(i, sources[k].pos) : second.digit(j, sources[k].pos);
        idx += d * to.stride(k);
      }
      out[i * second.size() + j] = idx;
    }
  }
  return out;
}

// ---------------------------------------------------------------- Kernel

Kernel::Kernel() : table_{Rational(1)} {}

Kernel::Kernel(Space source, Space target, std::vector<Rational> table)
    : source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
  if (table_.size() != source_.size() * target_.size()) {
    throw Error(ErrorCode::MalformedTable, "kernel table has the wrong number of entries");
  }
  for (auto& p : table_) p.canonicalize();
  for (std::size_t s = 0; s < source_.size(); ++s) {
    Rational sum = 0;
    for (std::size_t t = 0; t < target_.size(); ++t) {
      const Rational& p = at(s, t);
      if (sgn(p) < 0) throw Error(ErrorCode::MalformedTable, "negative kernel entry");
      sum += p;
    }
    if (sum != 1) {
      throw Error(ErrorCode::MalformedTable,
                  "kernel row '" + source_.format(s) + "' sums to " + to_string(sum) + ", not 1");
    }
  }
}

Kernel::Kernel(Space source, Space target, std::vector<Rational> table, Unchecked)
    : source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {}

Kernel make_kernel_unchecked(Space source, Space target, std::vector<Rational> table) {
  return Kernel(std::move(source), std::move(target), std::move(table), Kernel::Unchecked{});
}

bool Kernel::is_deterministic() const {
  for (const auto& p : table_) {
    if (p != 0 && p != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------- TransRv

TransRv TransRv::deterministic(Space domain, Space codomain, std::vector<std::size_t> map) {
  if (map.size() != domain.size()) throw Error(ErrorCode::InvalidMap, "map is not total on its domain");
  for (auto v : map) {
    if (v >= codomain.size()) throw Error(ErrorCode::InvalidMap, "map value outside the codomain");
  }
  TransRv rv;
  rv.domain_ = std::move(domain);
  rv.codomain_ = std::move(codomain);
  rv.map_ = std::move(map);
  return rv;
}

TransRv TransRv::from_kernel(Kernel k) {
  TransRv rv;
  rv.domain_ = k.source();
  rv.codomain_ = k.target();
  rv.deterministic_ = false;
  rv.kernel_ = std::move(k);
  return rv;
}

TransRv TransRv::projection(const Space& domain, const NameSet& names) {
  Space codomain = domain.subspace(names);
  return deterministic(domain, codomain, projection_map(domain, codomain));
}

TransRv TransRv::constant(const Space& domain) {
  return deterministic(domain, Space(), std::vector<std::size_t>(domain.size(), 0));
}

Kernel TransRv::as_kernel() const {
  if (!deterministic_) return *kernel_;
  return delta_kernel(map_, domain_, codomain_);
}

// ---------------------------------------------------------------- operations

Kernel delta_kernel(const std::vector<std::size_t>& f, const Space& source, const Space& target) {
  if (f.size() != source.size()) throw Error(ErrorCode::InvalidMap, "map is not total on its source");
  std::vector<Rational> table(source.size() * target.size());
  for (std::size_t s = 0; s < source.size(); ++s) {
    if (f[s] >= target.size()) throw Error(ErrorCode::InvalidMap, "map value outside the target");
    table[s * target.size() + f[s]] = 1;
  }
  return make_kernel_unchecked(source, target, std::move(table));
}

Kernel identity_kernel(const Space& space) {
  std::vector<std::size_t> f(space.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = i;
  return delta_kernel(f, space, space);
}

Kernel marginalize(const Kernel& k, const NameSet& keep) {
  Space kept = k.target().subspace(keep);
  auto proj = projection_map(k.target(), kept);
  std::vector<Rational> table(k.source().size() * kept.size());
  for (std::size_t s = 0; s < k.source().size(); ++s) {
    for (std::size_t t = 0; t < k.target().size(); ++t) {
      const Rational& p = k.at(s, t);
      if (sgn(p) != 0) table[s * kept.size() + proj[t]] += p;
    }
  }
  return make_kernel_unchecked(k.source(), kept, std::move(table));
}

Kernel product(const Kernel& q, const Kernel& k) {
  for (const auto& v : q.target().vars()) {
    if (k.target().has(v.name)) throw Error(ErrorCode::NameClash, "both factors produce '" + v.name + "'");
  }
  Space free_source = q.source().without(k.target().names());
  Space result_source = join_spaces(free_source, k.source());
  for (const auto& v : q.target().vars()) {
    if (result_source.has(v.name)) {
      throw Error(ErrorCode::NameClash, "output '" + v.name + "' is also a source variable");
    }
  }
  Space result_target = join_spaces(q.target(), k.target());
  auto k_source = projection_map(result_source, k.source());
  auto q_source = combine_map(q.source(), k.target(), result_source);
  auto target_of = combine_map(result_target, q.target(), k.target());
  const std::size_t nw = k.target().size(), nz = q.target().size(), ns = result_source.size();
  std::vector<Rational> table(ns * result_target.size());
  Rational term;
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t w = 0; w < nw; ++w) {
      const Rational& kw = k.at(k_source[s], w);
      if (sgn(kw) == 0) continue;
      std::size_t qs = q_source[w * ns + s];
      for (std::size_t z = 0; z < nz; ++z) {
        const Rational& qz = q.at(qs, z);
        if (sgn(qz) == 0) continue;
        term = qz * kw;
        table[s * result_target.size() + target_of[z * nw + w]] += term;
      }
    }
  }
  return make_kernel_unchecked(result_source, result_target, std::move(table));
}

Kernel compose(const Kernel& q, const Kernel& k) { return marginalize(product(q, k), q.target().names()); }

Kernel extend_with_identity(const Kernel& k) {
  for (const auto& v : k.target().vars()) {
    if (k.source().has(v.name)) {
      throw Error(ErrorCode::NameClash, "target variable '" + v.name + "' is already a source variable");
    }
  }
  Space target = join_spaces(k.target(), k.source());
  auto index_of = combine_map(target, k.target(), k.source());
  std::vector<Rational> table(k.source().size() * target.size());
  for (std::size_t t = 0; t < k.source().size(); ++t) {
    for (std::size_t w = 0; w < k.target().size(); ++w) {
      table[t * target.size() + index_of[w * k.source().size() + t]] = k.at(t, w);
    }
  }
  return make_kernel_unchecked(k.source(), target, std::move(table));
}

Kernel pushforward(const Kernel& k, const TransRv& x) {
  for (const auto& v : k.target().vars()) {
    if (k.source().has(v.name)) throw Error(ErrorCode::SpaceMismatch, "transition space reuses '" + v.name + "'");
  }
  Space expected = join_spaces(k.target(), k.source());
  if (!(expected == x.domain())) {
    throw Error(ErrorCode::SpaceMismatch, "random variable domain does not match the transition space");
  }
  if (!x.is_deterministic()) return compose(x.as_kernel(), extend_with_identity(k));
  auto dom = combine_map(x.domain(), k.target(), k.source());
  const std::size_t nt = k.source().size(), nx = x.codomain().size();
  std::vector<Rational> table(nt * nx);
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t w = 0; w < k.target().size(); ++w) {
      const Rational& p = k.at(t, w);
      if (sgn(p) != 0) table[t * nx + x.map()[dom[w * nt + t]]] += p;
    }
  }
  return make_kernel_unchecked(k.source(), x.codomain(), std::move(table));
}

bool is_null_set(const Kernel& k, const std::vector<std::pair<std::size_t, std::size_t>>& m) {
  for (const auto& [t, s] : m) {
    if (t >= k.target().size() || s >= k.source().size()) {
      throw Error(ErrorCode::InvalidArgument, "assignment index out of range");
    }
    if (sgn(k.at(s, t)) != 0) return false;
  }
  return true;
}

Kernel disintegrate(const Kernel& k, const NameSet& on) {
  Space y = k.target().subspace(on);
  for (const auto& v : y.vars()) {
    if (k.source().has(v.name)) throw Error(ErrorCode::NameClash, "'" + v.name + "' is also a source variable");
  }
  Space x = k.target().without(on);
  Space source = join_spaces(y, k.source());
  auto target_of = combine_map(k.target(), x, y);
  auto source_of = combine_map(source, y, k.source());
  const std::size_t nx = x.size(), ny = y.size(), nz = k.source().size();
  std::vector<Rational> table(source.size() * nx);
  Rational mass;
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t yi = 0; yi < ny; ++yi) {
      mass = 0;
      for (std::size_t xi = 0; xi < nx; ++xi) mass += k.at(z, target_of[xi * ny + yi]);
      std::size_t row = source_of[yi * nz + z] * nx;
      for (std::size_t xi = 0; xi < nx; ++xi) {
        table[row + xi] = sgn(mass) == 0 ? Rational(1, nx) : Rational(k.at(z, target_of[xi * ny + yi]) / mass);
      }
    }
  }
  return make_kernel_unchecked(source, x, std::move(table));
}

namespace {

void check_same_spaces(const Kernel& p, const Kernel& q) {
  if (!(p.source() == q.source()) || !(p.target() == q.target())) {
    throw Error(ErrorCode::SpaceMismatch, "kernels live on different spaces");
  }
}

void check_base(const Kernel& p, const Kernel& base) {
  for (const auto& v : base.target().vars()) {
    if (base.source().has(v.name)) throw Error(ErrorCode::SpaceMismatch, "base kernel reuses '" + v.name + "'");
  }
  if (!(join_spaces(base.target(), base.source()) == p.source())) {
    throw Error(ErrorCode::SpaceMismatch, "base kernel does not cover the compared source");
  }
}

}  // namespace

std::vector<std::size_t> kernels_agree_ae(const Kernel& p, const Kernel& q, const Kernel& base) {
  check_same_spaces(p, q);
  check_base(p, base);
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < p.source().size(); ++s) {
    for (std::size_t t = 0; t < p.target().size(); ++t) {
      if (p.at(s, t) != q.at(s, t)) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

bool agree_almost_everywhere(const Kernel& p, const Kernel& q, const Kernel& base) {
  auto diff = kernels_agree_ae(p, q, base);
  auto target_part = projection_map(p.source(), base.target());
  auto source_part = projection_map(p.source(), base.source());
  std::vector<std::pair<std::size_t, std::size_t>> m;
  for (auto s : diff) m.emplace_back(target_part[s], source_part[s]);
  return is_null_set(base, m);
}

std::optional<std::vector<std::size_t>> ismapof(const Kernel& k, const NameSet& x, const NameSet& y) {
  for (const auto& n : x) {
    if (y.count(n)) throw Error(ErrorCode::InvalidArgument, "variable sets must be disjoint");
  }
  NameSet both = x;
  both.insert(y.begin(), y.end());
  Kernel joint = marginalize(k, both);
  Space xs = k.target().subspace(x), ys = k.target().subspace(y);
  auto target_of = combine_map(joint.target(), xs, ys);
  const std::size_t nx = xs.size(), ny = ys.size();
  std::vector<std::size_t> phi(ny, 0);
  std::vector<bool> fixed(ny, false);
  for (std::size_t t = 0; t < joint.source().size(); ++t) {
    for (std::size_t yi = 0; yi < ny; ++yi) {
      std::optional<std::size_t> support;
      for (std::size_t xi = 0; xi < nx; ++xi) {
        if (sgn(joint.at(t, target_of[xi * ny + yi])) != 0) {
          if (support) return std::nullopt;
          support = xi;
        }
      }
      if (!support) continue;
      if (fixed[yi] && phi[yi] != *support) return std::nullopt;
      phi[yi] = *support;
      fixed[yi] = true;
    }
  }
  return phi;
}

}  // namespace tci

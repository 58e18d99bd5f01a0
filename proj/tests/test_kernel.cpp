#include "doctest.h"
#include "support.hpp"
#include "tci/error.hpp"
#include "tci/random.hpp"

using namespace tci;
using testing_support::kernel_of;
using testing_support::space_of;

namespace {

// Direct matrix product of two single-variable stochastic matrices.
std::vector<Rational> matmul(const Kernel& a, const Kernel& b) {
  std::size_t n = a.source().size(), m = a.target().size(), p = b.target().size();
  std::vector<Rational> out(n * p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < p; ++j) out[i * p + j] += a.at(i, k) * b.at(k, j);
  return out;
}

}  // namespace

TEST_CASE("space encoding and parsing") {
  Space s = space_of({{"Y", 3}, {"X", 2}});
  CHECK(s.vars()[0].name == "X");
  CHECK(s.size() == 6);
  CHECK(s.format(5) == "X=1,Y=2");
  CHECK(s.parse("Y=2,X=1") == 5);
  CHECK_THROWS_AS(s.parse("X=1"), Error);
  CHECK_THROWS_AS(s.parse("X=1,Y=7"), Error);
  CHECK(Space().size() == 1);
  CHECK(Space().format(0).empty());
  CHECK_THROWS_AS(Space(std::vector<FiniteVar>{FiniteVar{"X", {"0"}}, FiniteVar{"X", {"1"}}}), Error);
  CHECK_THROWS_AS(Space(std::vector<FiniteVar>{FiniteVar{"X", {}}}), Error);
  CHECK_THROWS_AS(join_spaces(space_of({{"X", 2}}), space_of({{"X", 3}})), Error);
}

TEST_CASE("kernel construction validates rows") {
  Space x = space_of({{"X", 2}});
  CHECK_THROWS_AS(kernel_of(Space(), x, {"1/2", "1/3"}), Error);
  CHECK_THROWS_AS(kernel_of(Space(), x, {"3/2", "-1/2"}), Error);
  CHECK_THROWS_AS(kernel_of(Space(), x, {"1"}), Error);
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(to_string(Rational(2, 4)) == "1/2");
  CHECK(to_string(Rational(1)) == "1");
}

TEST_CASE("delta kernels") {
  Space b = space_of({{"B", 2}});
  Kernel id = delta_kernel({0, 1}, b, b);
  CHECK(id == identity_kernel(b));
  CHECK(id.at(0, 0) == 1);
  CHECK(id.at(0, 1) == 0);
  Kernel constant = delta_kernel({0, 0}, b, Space());
  CHECK(constant.at(1, 0) == 1);
  Space c = space_of({{"C", 2}});
  Kernel neg = delta_kernel({1, 0}, b, c);
  CHECK(neg.at(0, 1) == 1);
  CHECK(neg.at(1, 0) == 1);
  CHECK_THROWS_AS(delta_kernel({0}, b, c), Error);
}

TEST_CASE("marginals and products") {
  Rng rng(1);
  Space t = space_of({{"T", 2}}), x = space_of({{"X", 3}}), y = space_of({{"Y", 2}});
  Kernel kx = random_kernel(rng, t, x), ky = random_kernel(rng, t, y);
  Kernel joint = product(kx, ky);
  CHECK(marginalize(joint, {"X"}) == kx);
  CHECK(marginalize(joint, {"X", "Y"}) == joint);
  Kernel none = marginalize(joint, {});
  CHECK(none.target().size() == 1);
  CHECK(none.at(1, 0) == 1);
  CHECK_THROWS_AS(marginalize(joint, {"Q"}), Error);
  // Independent product.
  Space z = space_of({{"Z", 2}}), w = space_of({{"W", 2}});
  Space s1 = space_of({{"S", 2}});
  Kernel q = random_kernel(rng, s1, z), k = random_kernel(rng, t, w);
  Kernel qk = product(q, k);
  for (std::size_t s = 0; s < qk.source().size(); ++s) {
    auto d = qk.source().decode(s);  // S, T
    for (std::size_t o = 0; o < qk.target().size(); ++o) {
      auto e = qk.target().decode(o);  // W, Z
      CHECK(qk.at(s, o) == q.at(d[0], e[1]) * k.at(d[1], e[0]));
    }
  }
  // Copy through a point-mass factor.
  Space xp = space_of({{"Xp", 3}});
  Kernel copy = product(delta_kernel({0, 1, 2}, x, xp), kx);
  for (std::size_t tt = 0; tt < 2; ++tt)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        CHECK(copy.at(tt, copy.target().encode({a, b})) == (a == b ? kx.at(tt, a) : Rational(0)));
  CHECK_THROWS_AS(product(kx, kx), Error);
  // Q(X|Z) ⊗ K(Y,Z|T).
  Kernel kyz = random_kernel(rng, t, space_of({{"Y", 2}, {"Z", 2}}));
  Kernel qxz = random_kernel(rng, z, space_of({{"X", 2}}));
  Kernel eq1 = product(qxz, kyz);
  for (std::size_t tt = 0; tt < 2; ++tt)
    for (std::size_t o = 0; o < 8; ++o) {
      auto d = eq1.target().decode(o);  // X, Y, Z
      CHECK(eq1.at(tt, o) == qxz.at(d[2], d[0]) * kyz.at(tt, kyz.target().encode({d[1], d[2]})));
    }
}

TEST_CASE("composition") {
  Space a = space_of({{"A", 3}}), b = space_of({{"B", 3}}), c = space_of({{"C", 3}});
  Kernel f = delta_kernel({1, 2, 0}, a, b), g = delta_kernel({2, 2, 1}, b, c);
  CHECK(compose(g, f) == delta_kernel({2, 1, 2}, a, c));
  Rng rng(2);
  Kernel q = random_kernel(rng, b, c);
  CHECK(compose(q, identity_kernel(b)) == q);
  for (int i = 0; i < 20; ++i) {
    Kernel k1 = random_kernel(rng, a, b), k2 = random_kernel(rng, b, c);
    CHECK(compose(k2, k1).table() == matmul(k1, k2));
  }
}

TEST_CASE("associativity and restricted commutativity") {
  Rng rng(3);
  Space t = space_of({{"T", 2}}), a = space_of({{"A", 2}}), b = space_of({{"B", 3}}),
        c = space_of({{"C", 2}});
  for (int i = 0; i < 30; ++i) {
    Kernel k1 = random_kernel(rng, t, a);
    Kernel k2 = random_kernel(rng, join_spaces(a, t), b);
    Kernel k3 = random_kernel(rng, join_spaces(b, a), c);
    CHECK(product(k3, product(k2, k1)) == product(product(k3, k2), k1));
    Kernel k4 = random_kernel(rng, b, c);
    CHECK(compose(k4, compose(k2, k1)) == compose(compose(k4, k2), k1));
    Kernel free = random_kernel(rng, t, c);
    CHECK(product(free, k1) == product(k1, free));
  }
}

TEST_CASE("identity extension and push-forward") {
  Rng rng(4);
  Space t = space_of({{"T", 2}}), w = space_of({{"W1", 2}, {"W2", 2}});
  Kernel uniform = kernel_of(t, space_of({{"W", 2}}), {"1/2", "1/2", "1/2", "1/2"});
  Kernel ext = extend_with_identity(uniform);
  CHECK(ext.at(0, ext.target().parse("T=0,W=1")) == Rational(1, 2));
  CHECK(ext.at(0, ext.target().parse("T=1,W=1")) == 0);
  Kernel one = random_kernel(rng, Space(), w);
  CHECK(extend_with_identity(one) == one);
  CHECK_THROWS_AS(extend_with_identity(identity_kernel(t)), Error);
  Kernel k = random_kernel(rng, t, w);
  Space dom = join_spaces(w, t);
  CHECK(pushforward(k, TransRv::projection(dom, {"W1", "W2"})) == k);
  Kernel c = pushforward(k, TransRv::constant(dom));
  CHECK(c.at(0, 0) == 1);
  Kernel uw = kernel_of(t, w, {"1/4", "1/4", "1/4", "1/4", "1/4", "1/4", "1/4", "1/4"});
  std::vector<std::size_t> xor_map(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    auto d = dom.decode(i);  // T, W1, W2
    xor_map[i] = d[1] ^ d[2];
  }
  Space out = space_of({{"X", 2}});
  TransRv x = TransRv::deterministic(dom, out, xor_map);
  Kernel pf = pushforward(uw, x);
  CHECK(pf.at(0, 0) == Rational(1, 2));
  CHECK(pf.at(1, 1) == Rational(1, 2));
  for (int i = 0; i < 30; ++i) {
    Kernel kk = random_kernel(rng, t, w);
    std::vector<std::size_t> f(dom.size());
    for (auto& v : f) v = rng.below(2);
    TransRv rv = TransRv::deterministic(dom, out, f);
    CHECK(pushforward(kk, rv) == compose(rv.as_kernel(), extend_with_identity(kk)));
    TransRv stoch = TransRv::from_kernel(random_kernel(rng, dom, out));
    CHECK(pushforward(kk, stoch) == compose(stoch.as_kernel(), extend_with_identity(kk)));
    Space tt = t;
    Kernel delta_t = identity_kernel(tt);
    CHECK(extend_with_identity(kk) == product(kk, delta_t));
  }
  CHECK_THROWS_AS(pushforward(k, TransRv::constant(w)), Error);
}

TEST_CASE("null sets") {
  Space t = space_of({{"T", 2}}), x = space_of({{"X", 2}});
  Kernel k = kernel_of(t, x, {"1", "0", "1/2", "1/2"});
  CHECK(is_null_set(k, {}));
  CHECK(is_null_set(k, {{1, 0}}));
  CHECK_FALSE(is_null_set(k, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  CHECK_THROWS_AS(is_null_set(k, {{5, 0}}), Error);
}

TEST_CASE("disintegration") {
  Space z = space_of({{"Z", 2}}), xy = space_of({{"X", 2}, {"Y", 2}});
  Kernel uniform = kernel_of(Space(), xy, {"1/4", "1/4", "1/4", "1/4"});
  Kernel cond = disintegrate(uniform, {"Y"});
  CHECK(cond.at(0, 0) == Rational(1, 2));
  CHECK(cond.at(1, 1) == Rational(1, 2));
  Rng rng(6);
  Kernel kx = random_kernel(rng, z, space_of({{"X", 3}}), 12, 0);
  Kernel ky = random_kernel(rng, z, space_of({{"Y", 2}}), 12, 0);
  Kernel d = disintegrate(product(kx, ky), {"Y"});
  for (std::size_t s = 0; s < d.source().size(); ++s) {
    auto digits = d.source().decode(s);  // Y, Z
    if (sgn(ky.at(digits[1], digits[0])) == 0) continue;
    for (std::size_t o = 0; o < 3; ++o) CHECK(d.at(s, o) == kx.at(digits[1], o));
  }
  for (int i = 0; i < 50; ++i) {
    Kernel k = random_kernel(rng, z, space_of({{"A", 3}, {"B", 2}, {"C", 2}}));
    Kernel cond2 = disintegrate(k, {"B", "C"});
    CHECK(product(cond2, marginalize(k, {"B", "C"})) == k);
  }
}

TEST_CASE("essential uniqueness") {
  Space z = space_of({{"Z", 2}});
  Kernel joint = kernel_of(z, space_of({{"X", 2}, {"Y", 2}}),
                           {"1/2", "0", "1/2", "0", "0", "1/3", "0", "2/3"});
  Kernel p = disintegrate(joint, {"Y"});
  Kernel base = marginalize(joint, {"Y"});
  CHECK(kernels_agree_ae(p, p, base).empty());
  // Y=1 never occurs at Z=0: change that row.
  std::vector<Rational> alt = p.table();
  std::size_t row = p.source().parse("Y=1,Z=0");
  alt[row * 2] = 1;
  alt[row * 2 + 1] = 0;
  Kernel q(p.source(), p.target(), alt);
  CHECK(kernels_agree_ae(p, q, base) == std::vector<std::size_t>{row});
  CHECK(agree_almost_everywhere(p, q, base));
  std::vector<Rational> bad = p.table();
  std::size_t live = p.source().parse("Y=0,Z=0");
  bad[live * 2] = Rational(1, 3);
  bad[live * 2 + 1] = Rational(2, 3);
  Kernel r(p.source(), p.target(), bad);
  CHECK_FALSE(agree_almost_everywhere(p, r, base));
  CHECK_THROWS_AS(kernels_agree_ae(p, joint, base), Error);
}

TEST_CASE("ismapof") {
  Space t = space_of({{"T", 2}});
  Kernel copy = product(delta_kernel({0, 1, 2}, space_of({{"Y", 3}}), space_of({{"X", 3}})),
                        kernel_of(t, space_of({{"Y", 3}}), {"1/3", "1/3", "1/3", "1/2", "1/2", "0"}));
  auto phi = ismapof(copy, {"X"}, {"Y"});
  REQUIRE(phi.has_value());
  CHECK(*phi == std::vector<std::size_t>{0, 1, 2});
  auto back = ismapof(copy, {"Y"}, {"X"});
  REQUIRE(back.has_value());
  Kernel independent = kernel_of(Space(), space_of({{"X", 2}, {"Y", 2}}), {"1/4", "1/4", "1/4", "1/4"});
  CHECK_FALSE(ismapof(independent, {"X"}, {"Y"}).has_value());
  Kernel constant_x = kernel_of(Space(), space_of({{"X", 2}, {"Y", 2}}), {"1/2", "1/2", "0", "0"});
  CHECK(*ismapof(constant_x, {"X"}, {"Y"}) == std::vector<std::size_t>{0, 0});
  CHECK(*ismapof(constant_x, {}, {"Y"}) == std::vector<std::size_t>{0, 0});
}

#include "doctest.h"
#include "support.hpp"
#include "tci/error.hpp"
#include "tci/random.hpp"
#include "tci/separation.hpp"

using namespace tci;
using testing_support::figure_one;
using testing_support::figure_two;

TEST_CASE("caption queries on the first figure") {
  Cdmg g = figure_one();
  SepQuery q1{{"v7"}, {"v1"}, {"v2"}};
  SepQuery q2{{"v7"}, {"v1", "v5"}, {"v2", "v4", "v6"}};
  CHECK(sigma_separated(g, q1).separated);
  CHECK(sigma_separated(g, q2).separated);
  CHECK(sigma_separated_oracle(g, q1));
  CHECK(sigma_separated_oracle(g, q2));
  CHECK(d_separated(g, q1));
  SepQuery open{{"v7"}, {"v8"}, {"v2"}};
  auto verdict = sigma_separated(g, open);
  REQUIRE_FALSE(verdict.separated);
  REQUIRE(verdict.witness.has_value());
  CHECK(verdict.witness->to_string() == "v7 <- v3 -> v8");
  CHECK_FALSE(walk_blocked(g, *verdict.witness, open.c));
}

TEST_CASE("left redundancy when A is inside C") {
  Cdmg g = figure_two();
  SepQuery q{{"v5", "v7"}, {"v1"}, {"v5", "v7", "v8"}};
  CHECK(sigma_separated(g, q).separated);
  CHECK(sigma_separated_oracle(g, q));
  CHECK(d_separated(g, q));
}

TEST_CASE("second figure: conditioning on the collider opens a path") {
  Cdmg g = figure_two();
  SepQuery q{{"v5"}, {"v3"}, {"v7"}};
  CHECK_FALSE(d_separated(g, q));
  // Open only because of the input v2 (v5 -> v7 <- v4 <- v2); towards v3 alone it is blocked.
  CHECK(d_separated(g, q, false));
  CHECK(sigma_separated(g, q).witness->nodes.back() == "v2");
  CHECK_FALSE(sigma_separated(g, q).separated);
  CHECK_THROWS_AS(d_separated(testing_support::two_cycle(), q), Error);
}

TEST_CASE("walk blocking table") {
  Cdmg g({}, {"a", "m", "b"}, {{"a", "m"}, {"b", "m"}}, {});
  Walk trivial{{"m"}, {}};
  CHECK(walk_blocked(g, trivial, {"m"}));
  CHECK_FALSE(walk_blocked(g, trivial, {}));
  Walk collider{{"a", "m", "b"}, {EdgeMark::Forward, EdgeMark::Backward}};
  CHECK(walk_blocked(g, collider, {}));
  CHECK_FALSE(walk_blocked(g, collider, {"m"}));
  Walk bogus{{"a", "b"}, {EdgeMark::Forward}};
  CHECK_THROWS_AS(walk_blocked(g, bogus, {}), Error);

  // Inside a cycle the conditioned chain node stays open.
  Cdmg c({}, {"v1", "v2", "v3"}, {{"v1", "v2"}, {"v2", "v1"}, {"v2", "v3"}}, {});
  Walk inside{{"v1", "v2", "v1"}, {EdgeMark::Forward, EdgeMark::Forward}};
  CHECK_FALSE(walk_blocked(c, inside, {"v2"}));
  Walk leaving{{"v1", "v2", "v3"}, {EdgeMark::Forward, EdgeMark::Forward}};
  CHECK(walk_blocked(c, leaving, {"v2"}));
  Walk entering{{"v3", "v2", "v1"}, {EdgeMark::Backward, EdgeMark::Forward}};
  CHECK(walk_blocked(c, entering, {"v2"}));
}

TEST_CASE("raw mode ignores inputs") {
  Cdmg g({"j"}, {"a"}, {{"j", "a"}}, {});
  CHECK_FALSE(sigma_separated(g, {{"a"}, {}, {}}).separated);
  CHECK(sigma_separated(g, {{"a"}, {}, {}}, false).separated);
  CHECK(sigma_separated(g, {{"a"}, {}, {"j"}}).separated);
}

TEST_CASE("random graphs: both algorithms agree and witnesses are open") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    Cdmg g = random_cdmg(rng, {1, 6, 2, 35, 20, false, true});
    SigmaSeparator sep(g);
    NodeMask all = g.all_mask();
    for (int j = 0; j < 30; ++j) {
      NodeMask a = rng.next() & all, b = rng.next() & all, c = rng.next() & all;
      bool fast = sep(a, b, c);
      auto walk = open_walk(g, a, b, c);
      CHECK(fast == !walk.has_value());
      if (walk) {
        CHECK_FALSE(walk_blocked(g, *walk, g.names(c)));
        CHECK(((g.mask({walk->nodes.front()}) & a) != 0));
      }
      CHECK(sep(a, b, c, false) == !open_walk(g, a, b, c, false).has_value());
    }
  }
}

TEST_CASE("symmetry without inputs") {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    Cdmg g = random_cdmg(rng, {1, 6, 0, 35, 20, false, true});
    SigmaSeparator sep(g);
    NodeMask all = g.all_mask();
    NodeMask a = rng.next() & all, b = rng.next() & all, c = rng.next() & all;
    CHECK(sep(a, b, c) == sep(b, a, c));
  }
}

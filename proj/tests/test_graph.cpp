#include <algorithm>
#include <bit>
#include "doctest.h"
#include "support.hpp"
#include "tci/error.hpp"
#include "tci/random.hpp"

using namespace tci;
using testing_support::figure_one;
using testing_support::figure_two;
using testing_support::two_cycle;

TEST_CASE("parents, ancestors and descendants on the first figure") {
  Cdmg g = figure_one();
  CHECK(parents(g, "v7") == NodeSet{"v2", "v3"});
  CHECK(parents(g, "v1").empty());
  CHECK(ancestors(g, {"v5"}) == NodeSet{"v1", "v2", "v4", "v5", "v6"});
  CHECK(ancestors(g, {}).empty());
  CHECK(descendants(g, {"v2"}) == NodeSet{"v2", "v5", "v6", "v7"});
  CHECK(descendants(g, {"v8"}) == NodeSet{"v8"});
  CHECK_THROWS_AS(parents(g, "nope"), Error);
  CHECK(is_acyclic(g));
}

TEST_CASE("isolated node has no parents") {
  Cdmg g({}, {"a"}, {}, {});
  CHECK(parents(g, "a").empty());
}

TEST_CASE("two-cycle reachability and components") {
  Cdmg g = two_cycle();
  CHECK(ancestors(g, {"v1"}) == NodeSet{"v1", "v2"});
  CHECK(descendants(g, {"v2"}) == NodeSet{"v1", "v2"});
  CHECK(strongly_connected(g, "v1") == NodeSet{"v1", "v2"});
  CHECK_FALSE(is_acyclic(g));
  CHECK_FALSE(topological_order(g).has_value());
  Cdmg loop({}, {"v"}, {{"v", "v"}}, {});
  CHECK_FALSE(is_acyclic(loop));
  Cdmg f = figure_one();
  CHECK(strongly_connected(f, "v1") == NodeSet{"v1"});
  CHECK(strongly_connected(f, "v5") == NodeSet{"v5"});
}

TEST_CASE("construction rejects malformed graphs") {
  CHECK_THROWS_AS(Cdmg({"a"}, {"a"}, {}, {}), Error);
  CHECK_THROWS_AS(Cdmg({"a"}, {"b"}, {{"b", "a"}}, {}), Error);
  CHECK_THROWS_AS(Cdmg({}, {"b"}, {}, {{"b", "b"}}), Error);
  CHECK_THROWS_AS(Cdmg({"a"}, {"b"}, {}, {{"a", "b"}}), Error);
  CHECK_THROWS_AS(Cdmg({}, {"b"}, {{"x", "b"}}, {}), Error);
  Cdmg empty;
  CHECK(empty.size() == 0);
  CHECK(is_acyclic(empty));
  CHECK(topological_order(empty)->empty());
}

TEST_CASE("topological order puts inputs first") {
  Cdmg chain({"j"}, {"a", "b"}, {{"j", "a"}, {"a", "b"}}, {});
  CHECK(*topological_order(chain) == std::vector<NodeId>{"j", "a", "b"});
  auto order = *topological_order(figure_one());
  auto pos = [&](const NodeId& v) { return std::find(order.begin(), order.end(), v) - order.begin(); };
  CHECK(pos("v1") < 2);
  CHECK(pos("v2") < 2);
  CHECK(pos("v4") < pos("v5"));
  CHECK(pos("v4") < pos("v6"));
  CHECK(pos("v6") < pos("v5"));
}

TEST_CASE("hard intervention") {
  Cdmg g = figure_two();
  CHECK(hard_intervene(g, {}) == g);
  Cdmg h = hard_intervene(g, {"v5"});
  CHECK(h.inputs() == NodeSet{"v2", "v3", "v5"});
  CHECK(parents(h, "v5").empty());
  CHECK(children(h, "v5") == NodeSet{"v7"});
  Cdmg k = hard_intervene(g, {"v1"});
  CHECK(k.bidirected_edges().empty());
  Cdmg all = hard_intervene(g, g.outputs());
  CHECK(all.outputs().empty());
  CHECK(all.directed_edges().empty());
}

TEST_CASE("soft extension") {
  Cdmg g = figure_two();
  CHECK(soft_extend(g, {}) == g);
  Cdmg single({}, {"v"}, {}, {});
  Cdmg s = soft_extend(single, {"v"});
  CHECK(s.inputs() == NodeSet{"I:v"});
  CHECK(s.directed_edges() == EdgeSet{{"I:v", "v"}});
  Cdmg t = soft_extend(g, {"v2"});
  CHECK(t.size() == g.size() + 1);
  CHECK(t.directed_edges() == g.directed_edges());
  Cdmg clash({}, {"v", "I:v"}, {}, {});
  CHECK_THROWS_AS(soft_extend(clash, {"v"}), Error);
}

TEST_CASE("latent projection") {
  Cdmg g = figure_two();
  CHECK(marginalize_graph(g, {}) == g);
  Cdmg chain({}, {"a", "m", "b"}, {{"a", "m"}, {"m", "b"}}, {});
  Cdmg c = marginalize_graph(chain, {"m"});
  CHECK(c.directed_edges() == EdgeSet{{"a", "b"}});
  CHECK(c.bidirected_edges().empty());
  Cdmg fork({}, {"a", "m", "b"}, {{"m", "a"}, {"m", "b"}}, {});
  Cdmg f = marginalize_graph(fork, {"m"});
  CHECK(f.directed_edges().empty());
  CHECK(f.bidirected_edges() == EdgeSet{{"a", "b"}});
  CHECK_THROWS_AS(marginalize_graph(g, {"v2"}), Error);
  // A collider through the latent node adds nothing.
  Cdmg collider({}, {"a", "m", "b"}, {{"a", "m"}, {"b", "m"}}, {});
  Cdmg k = marginalize_graph(collider, {"m"});
  CHECK(k.directed_edges().empty());
  CHECK(k.bidirected_edges().empty());
  // Bidirected edge reached through a latent chain.
  Cdmg spouse({}, {"a", "m", "b"}, {{"m", "a"}}, {{"m", "b"}});
  CHECK(marginalize_graph(spouse, {"m"}).bidirected_edges() == EdgeSet{{"a", "b"}});
}

TEST_CASE("acyclification") {
  Cdmg g = figure_one();
  CHECK(acyclify(g) == g);
  Cdmg c({"p"}, {"v1", "v2"}, {{"p", "v1"}, {"v1", "v2"}, {"v2", "v1"}}, {});
  Cdmg a = acyclify(c);
  CHECK(a.directed_edges() == EdgeSet{{"p", "v1"}, {"p", "v2"}});
  CHECK(a.bidirected_edges() == EdgeSet{{"v1", "v2"}});
  Cdmg three({}, {"v1", "v2", "v3"}, {{"v1", "v2"}, {"v2", "v3"}, {"v3", "v1"}}, {});
  Cdmg t = acyclify(three);
  CHECK(t.directed_edges().empty());
  CHECK(t.bidirected_edges() == EdgeSet{{"v1", "v2"}, {"v1", "v3"}, {"v2", "v3"}});
}

TEST_CASE("graph properties over random graphs") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    Cdmg g = random_cdmg(rng, {1, 7, 2, 30, 15, false, true});
    CHECK(is_acyclic(acyclify(g)));
    NodeMask all = g.all_mask();
    NodeMask a = rng.next() & all, b = a | (rng.next() & all);
    NodeMask anc_a = ancestors_mask(g, a), anc_b = ancestors_mask(g, b);
    CHECK((anc_a & ~anc_b) == 0);
    CHECK(ancestors_mask(g, anc_a) == anc_a);
    CHECK(descendants_mask(g, descendants_mask(g, a)) == descendants_mask(g, a));
    // Latent projection keeps ancestral relations among survivors.
    NodeMask w = rng.next() & all & ~g.input_mask();
    Cdmg m = marginalize_graph(g, g.names(w));
    for (const auto& v1 : m.nodes()) {
      for (const auto& v2 : m.nodes()) {
        CHECK(ancestors(g, {v2}).count(v1) == ancestors(m, {v2}).count(v1));
      }
    }
    // Soft extension sizes.
    NodeMask s = rng.next() & all;
    Cdmg e = soft_extend(g, g.names(s));
    CHECK(e.size() == g.size() + static_cast<std::size_t>(std::popcount(s)));
    CHECK(e.directed_edges().size() ==
          g.directed_edges().size() + static_cast<std::size_t>(std::popcount(s & ~g.input_mask())));
    // Hard intervention then order on acyclic graphs.
    Cdmg ac = acyclify(g);
    Cdmg h = hard_intervene(ac, g.names(s));
    auto order = topological_order(h);
    REQUIRE(order.has_value());
    for (const auto& [x, y] : h.directed_edges()) {
      auto px = std::find(order->begin(), order->end(), x);
      auto py = std::find(order->begin(), order->end(), y);
      CHECK(px < py);
    }
  }
}

#include <algorithm>

#include "doctest.h"
#include "support.hpp"
#include "tci/cbn.hpp"
#include "tci/error.hpp"

using namespace tci;
using testing_support::kernel_of;
using testing_support::space_of;

namespace {

Cbn cbn_on(const Cdmg& g, Rng& rng, const NodeSet& latent = {}, std::size_t outcomes = 2, unsigned zero = 20) {
  Cbn m;
  m.graph = g;
  m.latent = latent;
  for (const auto& v : g.nodes()) m.spaces[v] = make_var(v, outcomes);
  for (const auto& v : g.outputs())
    m.kernels[v] = random_kernel(rng, node_space(m, parents(g, v)), node_space(m, {v}), 12, zero);
  return m;
}

// Product of node kernel entries by enumeration of all assignments.
Rational brute_joint(const Cbn& m, const std::map<NodeId, std::size_t>& value) {
  Rational p = 1;
  for (const auto& [v, k] : m.kernels) {
    std::vector<std::size_t> digits;
    for (const auto& var : k.source().vars()) digits.push_back(value.at(var.name));
    p *= k.at(k.source().encode(digits), value.at(v));
  }
  return p;
}

void check_against_brute_force(const Cbn& m, const Kernel& joint) {
  for (std::size_t s = 0; s < joint.source().size(); ++s)
    for (std::size_t t = 0; t < joint.target().size(); ++t) {
      std::map<NodeId, std::size_t> value;
      auto sd = joint.source().decode(s), td = joint.target().decode(t);
      for (std::size_t i = 0; i < sd.size(); ++i) value[joint.source().vars()[i].name] = sd[i];
      for (std::size_t i = 0; i < td.size(); ++i) value[joint.target().vars()[i].name] = td[i];
      CHECK(joint.at(s, t) == brute_joint(m, value));
    }
}

Kernel chain_kernel(const std::string& from, const std::string& to, const std::vector<std::string>& entries) {
  return kernel_of(space_of({{from, 2}}), space_of({{to, 2}}), entries);
}

}  // namespace

TEST_CASE("joint kernel") {
  Rng rng(1);
  SUBCASE("single node") {
    Cbn m = cbn_on(Cdmg({}, {"a"}, {}, {}), rng);
    CHECK(joint_kernel(m) == m.kernels.at("a"));
  }
  SUBCASE("chain") {
    Cbn m = cbn_on(Cdmg({"j"}, {"a", "b"}, {{"j", "a"}, {"a", "b"}}, {}), rng);
    Kernel k = joint_kernel(m);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          CHECK(k.at(j, k.target().encode({a, b})) == m.kernels.at("a").at(j, a) * m.kernels.at("b").at(a, b));
  }
  SUBCASE("figure one") {
    Cbn m = cbn_on(testing_support::figure_one(), rng);
    Kernel k = joint_kernel(m);
    check_against_brute_force(m, k);
    CHECK(k.source().names() == NodeSet{"v1", "v2"});
  }
  SUBCASE("order invariance") {
    for (int i = 0; i < 30; ++i) {
      Cbn m = random_cbn(rng);
      std::vector<NodeId> outputs;
      const auto topo = topological_order(m.graph);
      for (const auto& v : *topo)
        if (!m.graph.inputs().count(v)) outputs.push_back(v);
      // Another valid order: repeatedly take the largest available node.
      std::vector<NodeId> other;
      NodeSet placed;
      while (other.size() < outputs.size()) {
        for (auto it = outputs.rbegin(); it != outputs.rend(); ++it) {
          if (placed.count(*it)) continue;
          auto pa = parents(m.graph, *it);
          bool ready = std::all_of(pa.begin(), pa.end(),
                                   [&](const NodeId& p) { return m.graph.inputs().count(p) || placed.count(p); });
          if (ready) {
            other.push_back(*it);
            placed.insert(*it);
            break;
          }
        }
      }
      Kernel k = joint_kernel(m, other);
      CHECK(k == joint_kernel(m, outputs));
      check_against_brute_force(m, k);
      std::vector<NodeId> reversed(outputs.rbegin(), outputs.rend());
      if (outputs.size() > 1 && !m.graph.directed_edges().empty()) {
        bool topo = true;
        NodeSet seen;
        for (const auto& v : reversed) {
          for (const auto& p : parents(m.graph, v))
            if (!m.graph.inputs().count(p) && !seen.count(p)) topo = false;
          seen.insert(v);
        }
        if (!topo) CHECK_THROWS_AS(joint_kernel(m, reversed), Error);
      }
    }
  }
}

TEST_CASE("invalid networks are rejected") {
  Rng rng(2);
  Cbn m = cbn_on(Cdmg({"j"}, {"a", "b"}, {{"j", "a"}, {"a", "b"}}, {}), rng);
  Cbn missing = m;
  missing.kernels.erase("b");
  CHECK_THROWS_AS(validate_cbn(missing), Error);
  Cbn wrong = m;
  wrong.kernels["b"] = random_kernel(rng, node_space(m, {"j"}), node_space(m, {"b"}));
  CHECK_THROWS_AS(validate_cbn(wrong), Error);
  Cbn cyclic = cbn_on(testing_support::two_cycle(), rng);
  CHECK_THROWS_AS(joint_kernel(cyclic), Error);
  Cbn latent_input = m;
  latent_input.latent = {"j"};
  CHECK_THROWS_AS(validate_cbn(latent_input), Error);
}

TEST_CASE("observational kernel") {
  Rng rng(3);
  Cbn m = cbn_on(testing_support::figure_one(), rng);
  CHECK(observational_kernel(m) == joint_kernel(m));
  // Latent confounder.
  Cbn conf;
  conf.graph = Cdmg({}, {"a", "b", "u"}, {{"u", "a"}, {"u", "b"}}, {});
  conf.latent = {"u"};
  for (const auto& v : conf.graph.nodes()) conf.spaces[v] = make_var(v, 2);
  conf.kernels["u"] = kernel_of(Space(), space_of({{"u", 2}}), {"1/2", "1/2"});
  conf.kernels["a"] = chain_kernel("u", "a", {"1", "0", "0", "1"});
  conf.kernels["b"] = chain_kernel("u", "b", {"1", "0", "0", "1"});
  Kernel obs = observational_kernel(conf);
  CHECK(obs == kernel_of(Space(), space_of({{"a", 2}, {"b", 2}}), {"1/2", "0", "0", "1/2"}));
  CHECK(observed_graph(conf).bidirected_edges() == EdgeSet{{"a", "b"}});
  // Deterministic kernels give a deterministic joint.
  Cbn det = conf;
  det.latent = {};
  det.kernels["u"] = kernel_of(Space(), space_of({{"u", 2}}), {"0", "1"});
  CHECK(observational_kernel(det).is_deterministic());
}

TEST_CASE("hard interventions") {
  Rng rng(4);
  Cbn chain = cbn_on(Cdmg({"j"}, {"a", "b"}, {{"j", "a"}, {"a", "b"}}, {}), rng);
  Cbn same = hard_intervene_cbn(chain, {});
  CHECK(joint_kernel(same) == joint_kernel(chain));
  Cbn cut = hard_intervene_cbn(chain, {"a"});
  CHECK(cut.graph.inputs() == NodeSet{"a", "j"});
  Kernel do_a = joint_kernel(cut);
  for (std::size_t s = 0; s < do_a.source().size(); ++s) {
    std::size_t a = do_a.source().digit(s, static_cast<std::size_t>(do_a.source().position("a")));
    for (std::size_t b = 0; b < 2; ++b) CHECK(do_a.at(s, b) == chain.kernels.at("b").at(a, b));
  }
  CHECK_THROWS_AS(hard_intervene_cbn(chain, {"zz"}), Error);
  // Confounded pair: P(b|do(a)) differs from P(b|a).
  Cbn conf;
  conf.graph = Cdmg({}, {"a", "b", "u"}, {{"u", "a"}, {"u", "b"}, {"a", "b"}}, {});
  conf.latent = {"u"};
  for (const auto& v : conf.graph.nodes()) conf.spaces[v] = make_var(v, 2);
  conf.kernels["u"] = kernel_of(Space(), space_of({{"u", 2}}), {"1/2", "1/2"});
  conf.kernels["a"] = chain_kernel("u", "a", {"3/4", "1/4", "1/4", "3/4"});
  conf.kernels["b"] = kernel_of(space_of({{"a", 2}, {"u", 2}}), space_of({{"b", 2}}),
                                {"1", "0", "1/2", "1/2", "1/2", "1/2", "0", "1"});
  Kernel interventional = observational_kernel(hard_intervene_cbn(conf, {"a"}));
  Kernel conditional = disintegrate(observational_kernel(conf), {"a"});
  CHECK(interventional.source() == conditional.source());
  CHECK_FALSE(interventional == conditional);
  // By hand: P(b=0|do(a=0)) = 1/2·1 + 1/2·1/2 = 3/4 and P(b=0|a=0) = 3/4·1 + 1/4·1/2 = 7/8.
  CHECK(interventional.at(0, 0) == Rational(3, 4));
  CHECK(conditional.at(0, 0) == Rational(7, 8));
}

TEST_CASE("soft interventions") {
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    Cbn m = random_cbn(rng);
    NodeSet v;
    for (const auto& x : m.graph.outputs())
      if (!m.latent.count(x) && rng.below(2) == 0) v.insert(x);
    Cbn soft = soft_intervene_cbn(m, v);
    Kernel obs = observational_kernel(m), soft_obs = observational_kernel(soft);
    CHECK(soft.graph.inputs().size() == m.graph.inputs().size() + v.size());
    auto to_old = projection_map(soft_obs.source(), obs.source());
    for (std::size_t s = 0; s < soft_obs.source().size(); ++s) {
      // Which soft inputs are at ⋆, and the hard values of the others.
      NodeSet hard_nodes;
      bool all_star = true;
      auto digits = soft_obs.source().decode(s);
      for (std::size_t k = 0; k < digits.size(); ++k) {
        const auto& var = soft_obs.source().vars()[k];
        if (var.name.rfind(kSoftPrefix, 0) != 0) continue;
        if (var.outcomes[digits[k]] != kStarOutcome) {
          all_star = false;
          hard_nodes.insert(var.name.substr(2));
        }
      }
      if (all_star) {
        for (std::size_t t = 0; t < soft_obs.target().size(); ++t) CHECK(soft_obs.at(s, t) == obs.at(to_old[s], t));
      }
      if (hard_nodes.empty()) continue;
      // Compare with the hard intervention at the same values.
      Cbn hard = hard_intervene_cbn(m, hard_nodes);
      Kernel hard_k = observational_kernel(hard);
      std::vector<std::size_t> hd;
      for (const auto& var : hard_k.source().vars()) {
        int pos = soft_obs.source().position(hard_nodes.count(var.name) ? std::string(kSoftPrefix) + var.name : var.name);
        hd.push_back(digits[static_cast<std::size_t>(pos)]);
      }
      std::size_t hs = hard_k.source().encode(hd);
      auto target_map = projection_map(soft_obs.target(), hard_k.target());
      std::vector<Rational> marg(hard_k.target().size());
      for (std::size_t t = 0; t < soft_obs.target().size(); ++t) {
        auto td = soft_obs.target().decode(t);
        bool consistent = true;
        for (const auto& h : hard_nodes) {
          std::size_t pos = static_cast<std::size_t>(soft_obs.target().position(h));
          std::size_t ipos = static_cast<std::size_t>(soft_obs.source().position(std::string(kSoftPrefix) + h));
          if (td[pos] != digits[ipos]) consistent = false;
        }
        if (consistent) marg[target_map[t]] += soft_obs.at(s, t);
        else CHECK(soft_obs.at(s, t) == 0);
      }
      for (std::size_t t = 0; t < hard_k.target().size(); ++t) CHECK(marg[t] == hard_k.at(hs, t));
    }
  }
  Cbn m = random_cbn(rng);
  CHECK(observational_kernel(soft_intervene_cbn(m, {})) == observational_kernel(m));
  Cbn star = cbn_on(Cdmg({}, {"a"}, {}, {}), rng);
  star.spaces["a"].outcomes[0] = kStarOutcome;
  star.kernels["a"] = Kernel(Space(), node_space(star, {"a"}), {Rational(1, 2), Rational(1, 2)});
  CHECK_THROWS_AS(soft_intervene_cbn(star, {"a"}), Error);
}

TEST_CASE("marginalizing networks") {
  Rng rng(6);
  Cbn chain = cbn_on(Cdmg({}, {"a", "m", "b"}, {{"a", "m"}, {"m", "b"}}, {}), rng);
  CHECK(observational_kernel(marginalize_cbn(chain, {})) == observational_kernel(chain));
  Cbn hidden = marginalize_cbn(chain, {"m"});
  CHECK(joint_kernel(hidden) == joint_kernel(chain));
  Kernel ab = observational_kernel(hidden);
  const Kernel &pa = chain.kernels.at("a"), &pm = chain.kernels.at("m"), &pb = chain.kernels.at("b");
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      Rational sum = 0;
      for (std::size_t x = 0; x < 2; ++x) sum += pm.at(a, x) * pb.at(x, b);
      CHECK(ab.at(0, ab.target().encode({a, b})) == pa.at(0, a) * sum);
    }
  CHECK(observed_graph(hidden).directed_edges() == EdgeSet{{"a", "b"}});
}

TEST_CASE("global Markov property") {
  Rng rng(7);
  SUBCASE("figure one") {
    Cbn m = cbn_on(testing_support::figure_one(), rng, {}, 2, 0);
    GmpOptions opts;
    opts.scope = GmpOptions::Scope::Explicit;
    opts.triples = {{{"v7"}, {"v1"}, {"v2"}}, {{"v7"}, {"v1", "v5"}, {"v2", "v4", "v6"}}};
    opts.keep_witnesses = true;
    GmpReport r = gmp_verify(m, opts);
    CHECK(r.separated == 2);
    CHECK(r.violations.empty());
    REQUIRE(r.witnesses.size() == 2);
    // The witness for v7 given v2 is the marginal of v7 from its node kernel and v3.
    const Kernel& w = r.witnesses[0].kernel;
    CHECK(w.source().names() == NodeSet{"v2"});
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t x = 0; x < 2; ++x) {
        Rational expect = 0;
        for (std::size_t v3 = 0; v3 < 2; ++v3)
          expect += m.kernels.at("v3").at(0, v3) * m.kernels.at("v7").at(m.kernels.at("v7").source().encode({s, v3}), x);
        CHECK(w.at(s, x) == expect);
      }
    GmpOptions sample;
    sample.scope = GmpOptions::Scope::Sample;
    sample.samples = 3000;
    GmpReport rs = gmp_verify(m, sample);
    CHECK(rs.sampled);
    CHECK(rs.separated > 0);
    CHECK(rs.violations.empty());
  }
  SUBCASE("empty graph") {
    Cbn m;
    GmpReport r = gmp_verify(m);
    CHECK(r.triples == 0);
    CHECK(r.violations.empty());
  }
  SUBCASE("random networks") {
    for (int i = 0; i < 15; ++i) {
      RandomCbnOptions o;
      o.max_outputs = 4;
      Cbn m = random_cbn(rng, o);
      GmpReport r = gmp_verify(m);
      CHECK_FALSE(r.sampled);
      CHECK(r.violations.empty());
    }
  }
  SUBCASE("ancestral sets") {
    for (int i = 0; i < 30; ++i) {
      Cbn m = random_cbn(rng);
      Cdmg g = observed_graph(m);
      NodeSet seed;
      for (const auto& v : g.nodes())
        if (rng.below(3) == 0) seed.insert(v);
      NodeSet anc = ancestors(g, seed);
      NodeSet j = g.inputs(), va, ja, jout;
      for (const auto& v : anc) (j.count(v) ? ja : va).insert(v);
      for (const auto& v : j)
        if (!anc.count(v)) jout.insert(v);
      if (va.empty() || jout.empty()) continue;
      SepQuery q{va, jout, ja};
      CHECK(sigma_separated(g, q).separated);
      GmpOptions opts;
      opts.scope = GmpOptions::Scope::Explicit;
      opts.triples = {q};
      CHECK(gmp_verify(m, opts).violations.empty());
    }
  }
  SUBCASE("budget") {
    Cbn m = cbn_on(testing_support::figure_one(), rng);
    GmpOptions opts;
    opts.budget_nodes = 4;
    opts.samples = 50;
    GmpReport r = gmp_verify(m, opts);
    CHECK(r.budget_exceeded);
    CHECK(r.sampled);
    GmpOptions capped;
    capped.max_checks = 10;
    GmpReport c = gmp_verify(m, capped);
    CHECK(c.budget_exceeded);
    CHECK(c.triples == 10);
  }
}

TEST_CASE("do-calculus") {
  Rng rng(8);
  SUBCASE("disconnected observation") {
    // b has no path to a once d is fixed.
    Cbn m = cbn_on(Cdmg({}, {"a", "b", "d"}, {{"d", "a"}, {"d", "b"}}, {}), rng);
    DoReport r = do_calculus(m, 1, {{"a"}, {"b"}, {}, {"d"}});
    CHECK(r.applicable);
    CHECK(r.sound);
    CHECK(r.checks.size() == 2);
  }
  SUBCASE("confounder-free exchange") {
    Cbn m = cbn_on(Cdmg({}, {"a", "b"}, {{"b", "a"}}, {}), rng);
    DoReport r = do_calculus(m, 2, {{"a"}, {"b"}, {}, {}});
    REQUIRE(r.applicable);
    CHECK(r.sound);
    REQUIRE(r.kernel.has_value());
    CHECK(*r.kernel == m.kernels.at("a"));
  }
  SUBCASE("premise fails") {
    Cbn m = cbn_on(Cdmg({}, {"a", "b"}, {{"b", "a"}}, {}), rng);
    DoReport r = do_calculus(m, 1, {{"a"}, {"b"}, {}, {}});
    CHECK_FALSE(r.applicable);
    CHECK_FALSE(r.kernel.has_value());
    REQUIRE(r.open_walk.has_value());
    CHECK(r.open_walk->to_string() == "a <- b");
    DoReport r3 = do_calculus(m, 3, {{"a"}, {"b"}, {}, {}});
    CHECK_FALSE(r3.applicable);
  }
  SUBCASE("invalid queries") {
    Cbn m = cbn_on(Cdmg({"j"}, {"a", "b", "u"}, {{"j", "a"}, {"u", "b"}}, {}), rng, {"u"});
    CHECK_THROWS_AS(do_calculus(m, 1, {{"a"}, {"a"}, {}, {}}), Error);
    CHECK_THROWS_AS(do_calculus(m, 1, {{"j"}, {"b"}, {}, {}}), Error);
    CHECK_THROWS_AS(do_calculus(m, 1, {{"a"}, {"u"}, {}, {}}), Error);
    CHECK_THROWS_AS(do_calculus(m, 4, {{"a"}, {"b"}, {}, {}}), Error);
    CHECK_NOTHROW(do_calculus(m, 1, {{"a"}, {"b"}, {}, {"j"}}));
  }
  SUBCASE("random soundness") {
    int applicable = 0;
    for (int i = 0; i < 60; ++i) {
      Cbn m = random_cbn(rng);
      std::vector<NodeId> obs;
      for (const auto& v : m.graph.outputs())
        if (!m.latent.count(v)) obs.push_back(v);
      NodeSet parts[4];
      for (const auto& v : obs) {
        std::size_t k = rng.below(5);
        if (k < 4) parts[k].insert(v);
      }
      for (const auto& j : m.graph.inputs())
        if (rng.below(2)) parts[3].insert(j);
      if (parts[0].empty() || parts[1].empty()) continue;
      for (int rule = 1; rule <= 3; ++rule) {
        DoReport r = do_calculus(m, rule, {parts[0], parts[1], parts[2], parts[3]});
        if (!r.applicable) {
          CHECK(r.open_walk.has_value());
          continue;
        }
        ++applicable;
        CHECK(r.sound);
        CHECK(r.checks.size() == (std::size_t{1} << parts[1].size()));
      }
    }
    CHECK(applicable > 5);
  }
}

TEST_CASE("backdoor adjustment") {
  Rng rng(9);
  SUBCASE("observed confounder") {
    Cbn m = cbn_on(Cdmg({}, {"a", "b", "f"}, {{"f", "a"}, {"f", "b"}, {"a", "b"}}, {}), rng, {}, 2, 0);
    BackdoorReport r = backdoor_adjust(m, {"b"}, {"a"}, {}, {"f"}, {});
    REQUIRE(r.applicable);
    CHECK(r.sound);
    REQUIRE(r.adjusted.has_value());
    Kernel truth = marginalize(observational_kernel(hard_intervene_cbn(m, {"a"})), {"b"});
    CHECK(*r.adjusted == truth);
  }
  SUBCASE("no backdoor") {
    Cbn m = cbn_on(Cdmg({}, {"a", "b"}, {{"a", "b"}}, {}), rng, {}, 2, 0);
    BackdoorReport r = backdoor_adjust(m, {"b"}, {"a"}, {}, {}, {});
    REQUIRE(r.applicable);
    CHECK(r.sound);
    CHECK(*r.adjusted == disintegrate(observational_kernel(m), {"a"}));
  }
  SUBCASE("open backdoor") {
    Cbn m = cbn_on(Cdmg({}, {"a", "b", "u"}, {{"u", "a"}, {"u", "b"}, {"a", "b"}}, {}), rng, {"u"});
    BackdoorReport r = backdoor_adjust(m, {"b"}, {"a"}, {}, {}, {});
    CHECK_FALSE(r.applicable);
    REQUIRE(r.open_walk.has_value());
    CHECK(r.open_walk->to_string() == "b <-> a <- I:a");
  }
  SUBCASE("inputs must be in d") {
    Cbn m = cbn_on(Cdmg({"j"}, {"a", "b"}, {{"j", "a"}, {"a", "b"}}, {}), rng);
    CHECK_THROWS_AS(backdoor_adjust(m, {"b"}, {"a"}, {}, {}, {}), Error);
    CHECK(backdoor_adjust(m, {"b"}, {"a"}, {}, {}, {"j"}).sound);
  }
}

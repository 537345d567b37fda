// Copyright 2026 The causality-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "causality/polytope.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "causality/gallery.hpp"
#include "causality/random_processes.hpp"
#include "oracles.hpp"

namespace causality::polytope {
namespace {

using correlations::flatten;
using correlations::unflatten;

const Scenario kTwo{{"A", "B"}, {2, 2}, {2, 2}};
const Scenario kThree{{"A", "B", "C"}, {2, 2, 2}, {2, 2, 2}};

Game uniform_game(const Scenario& sc, const std::function<Rational(std::size_t, std::size_t)>& payoff) {
  Game g;
  g.scenario = sc;
  const std::size_t ns = sc.num_settings(), no = sc.num_outcomes();
  for (std::size_t s = 0; s < ns; ++s) {
    g.setting_distribution.push_back(Rational(1, static_cast<long>(ns)));
    for (std::size_t o = 0; o < no; ++o) g.payoff.push_back(payoff(s, o));
  }
  return g;
}

// Deterministic one-way table: `first` outputs its setting, the other
// outputs the first party's setting.
ProbabilityTable one_way_copy(std::size_t first) {
  ProbabilityTable t = correlations::zero_table(kTwo);
  for (std::size_t s = 0; s < 4; ++s) {
    const auto sd = unflatten(s, kTwo.settings);
    const std::size_t bit = sd[first];
    t(s, flatten({bit, bit}, kTwo.outcomes)) = 1;
  }
  return t;
}

TEST(MembershipTest, MixtureOfBothOrdersIsCausal) {
  const ProbabilityTable t = correlations::mix_tables({{0.5, one_way_copy(0)}, {0.5, one_way_copy(1)}});
  const auto r = causal_membership(t);
  ASSERT_TRUE(r.causal);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_TRUE(check_witness(t, *r.witness).ok);
  MembershipOptions exact;
  exact.exact = true;
  const auto e = causal_membership(t, exact);
  EXPECT_TRUE(e.causal);
  EXPECT_EQ(e.exact_margin, "0");
}

TEST(MembershipTest, TwoWaySignalingIsRejected) {
  // Each party outputs the other's setting.
  ProbabilityTable t = correlations::zero_table(kTwo);
  for (std::size_t s = 0; s < 4; ++s) {
    const auto sd = unflatten(s, kTwo.settings);
    t(s, flatten({sd[1], sd[0]}, kTwo.outcomes)) = 1;
  }
  const auto r = causal_membership(t);
  EXPECT_FALSE(r.causal);
  EXPECT_GT(r.margin, 0.1);
  EXPECT_FALSE(r.witness.has_value());
  MembershipOptions exact;
  exact.exact = true;
  EXPECT_FALSE(causal_membership(t, exact).causal);
}

TEST(MembershipTest, BranchRestriction) {
  MembershipOptions a_only;
  a_only.branches = std::vector<Branch>{Branch{0, 1}};
  EXPECT_TRUE(causal_membership(one_way_copy(0), a_only).causal);
  EXPECT_FALSE(causal_membership(one_way_copy(1), a_only).causal);
}

TEST(MembershipTest, AgreesWithVertexHull) {
  generators::Rng rng(51);
  const auto vertices = checks::oracles::one_way_vertices(kTwo);
  EXPECT_EQ(vertices.size(), 128u);
  for (int i = 0; i < 30; ++i) {
    const ProbabilityTable t = i % 2 ? generators::random_causal_table(kTwo, rng) : generators::random_table(kTwo, rng);
    const bool inside = checks::oracles::hull_distance(vertices, t.p) <= 1e-6;
    EXPECT_EQ(causal_membership(t).causal, inside) << "table " << i;
  }
}

TEST(MembershipTest, MixingAcceptedTablesStaysAccepted) {
  generators::Rng rng(52);
  for (int i = 0; i < 10; ++i) {
    const ProbabilityTable a = generators::random_causal_table(kThree, rng);
    const ProbabilityTable b = generators::random_dynamical_table(kThree, rng);
    ASSERT_TRUE(causal_membership(a).causal);
    ASSERT_TRUE(causal_membership(b).causal);
    const ProbabilityTable mix = correlations::mix_tables({{0.3, a}, {0.7, b}});
    const auto r = causal_membership(mix);
    ASSERT_TRUE(r.causal);
    EXPECT_TRUE(check_witness(mix, *r.witness).ok);
  }
}

TEST(MembershipTest, DynamicalOrderTableIsCausal) {
  generators::Rng rng(53);
  const ProbabilityTable t = generators::random_dynamical_table(kThree, rng);
  const auto r = causal_membership(t);
  ASSERT_TRUE(r.causal);
  EXPECT_EQ(r.witness->branches.size(), 6u);
  EXPECT_TRUE(check_witness(t, *r.witness).ok);
}

TEST(MembershipTest, PartyCountLimits) {
  generators::Rng rng(54);
  EXPECT_TRUE(causal_membership(generators::random_table(Scenario{{"A"}, {2}, {3}}, rng)).causal);
  const Scenario four{{"A", "B", "C", "D"}, {2, 2, 2, 2}, {2, 2, 2, 2}};
  EXPECT_THROW(causal_membership(generators::random_table(four, rng)), Error);
}

TEST(CheckWitnessTest, DetectsTampering) {
  const ProbabilityTable t = correlations::mix_tables({{0.5, one_way_copy(0)}, {0.5, one_way_copy(1)}});
  auto w = *causal_membership(t).witness;
  w.tables[0][0] += 0.1;
  const auto c = check_witness(t, w);
  EXPECT_FALSE(c.ok);
  EXPECT_NEAR(c.reconstruction_error, 0.1, 1e-12);
}

TEST(CausalBoundTest, OcbGameIsThreeQuarters) {
  const Game g = gallery::ocb_game();
  const auto b = causal_bound(g);
  ASSERT_TRUE(b.exact_value.has_value());
  EXPECT_EQ(*b.exact_value, Rational(3, 4));
  EXPECT_EQ(b.to_string(), "3/4");
  EXPECT_EQ(checks::oracles::deterministic_bound(g), Rational(3, 4));
  BoundOptions flt;
  flt.exact = false;
  EXPECT_NEAR(causal_bound(g, flt).value, 0.75, 1e-7);
  EXPECT_NEAR(game_value(g, b.table), 0.75, 1e-12);
  EXPECT_TRUE(causal_membership(b.table).causal);
}

TEST(CausalBoundTest, ScalesWithPayoff) {
  Game g = gallery::ocb_game();
  for (auto& p : g.payoff) p *= Rational(3, 2);
  EXPECT_EQ(*causal_bound(g).exact_value, Rational(9, 8));
}

TEST(CausalBoundTest, TrivialGames) {
  EXPECT_EQ(*causal_bound(uniform_game(kTwo, [](std::size_t, std::size_t) { return Rational(1); })).exact_value, 1);
  const Game guess = uniform_game(kTwo, [](std::size_t s, std::size_t o) {
    return Rational(unflatten(o, kTwo.outcomes)[1] == unflatten(s, kTwo.settings)[0] ? 1 : 0);
  });
  BoundOptions a_first;
  a_first.branches = std::vector<Branch>{Branch{0, 1}};
  EXPECT_EQ(*causal_bound(guess, a_first).exact_value, 1);
  BoundOptions b_first;
  b_first.branches = std::vector<Branch>{Branch{1, 0}};
  EXPECT_EQ(*causal_bound(guess, b_first).exact_value, Rational(1, 2));
}

TEST(CausalBoundTest, ThreePartyBoundMatchesTwoPartyEmbedding) {
  // Charlie's outcome carries no payoff, so the tripartite bound for the
  // guess-your-neighbour pair game equals the bipartite one.
  const Game g = uniform_game(kThree, [](std::size_t s, std::size_t o) {
    const auto sd = unflatten(s, kThree.settings);
    const auto od = unflatten(o, kThree.outcomes);
    return Rational((od[0] == sd[1] && od[1] == sd[0]) ? 1 : 0);
  });
  EXPECT_EQ(*causal_bound(g).exact_value, Rational(1, 2));
}

TEST(CausalBoundTest, RejectsMalformedGames) {
  Game g = gallery::ocb_game();
  g.setting_distribution[0] += Rational(1, 8);
  EXPECT_THROW(causal_bound(g), Error);
  Game h = gallery::ocb_game();
  h.payoff.pop_back();
  EXPECT_THROW(causal_bound(h), Error);
}

TEST(SeesawTest, OcbViolatesCausalBound) {
  const auto r = optimize_quantum_value(gallery::ocb_process(), gallery::ocb_game());
  EXPECT_GE(r.value, 0.85);
  EXPECT_LE(r.value, (2 + std::sqrt(2.0)) / 4 + 1e-9);
  EXPECT_NEAR(game_value(gallery::ocb_game(), r.table), r.value, 1e-12);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1] - 1e-12);
  const auto table = quantum_table(gallery::ocb_process(), gallery::ocb_game().scenario, r.strategy);
  for (std::size_t i = 0; i < table.p.size(); ++i) EXPECT_NEAR(table.p[i], r.table.p[i], 1e-12);
  EXPECT_FALSE(causal_membership(r.table).causal);
}

TEST(SeesawTest, SeparableProcessStaysBelowBound) {
  generators::Rng rng(55);
  const std::vector<choi::PartySpec> parties = {{"A", 2, 2}, {"B", 2, 2}};
  SeesawConfig cfg;
  cfg.restarts = 3;
  for (int i = 0; i < 3; ++i) {
    const auto w = generators::random_bipartite_separable(parties, 0.5, rng);
    EXPECT_LE(optimize_quantum_value(w, gallery::ocb_game(), cfg).value, 0.75 + 1e-7);
  }
}

TEST(SeesawTest, MaximallyMixedGivesOneHalf) {
  const auto w = procmat::make_process({{"A", 2, 2}, {"B", 2, 2}}, qlinalg::identity(16) / 4.0);
  EXPECT_NEAR(optimize_quantum_value(w, gallery::ocb_game()).value, 0.5, 1e-9);
}

}  // namespace
}  // namespace causality::polytope

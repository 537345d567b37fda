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


#include "causality/correlations.hpp"

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "causality/gallery.hpp"
#include "causality/random_processes.hpp"
#include "oracles.hpp"

namespace causality::correlations {
namespace {

using Cell = std::function<double(const std::vector<std::size_t>&, const std::vector<std::size_t>&)>;

ProbabilityTable make_table(const Scenario& sc, const Cell& cell) {
  ProbabilityTable t = zero_table(sc);
  for (std::size_t s = 0; s < sc.num_settings(); ++s) {
    for (std::size_t o = 0; o < sc.num_outcomes(); ++o) t(s, o) = cell(unflatten(s, sc.settings), unflatten(o, sc.outcomes));
  }
  return t;
}

const Scenario kTwo{{"A", "B"}, {2, 2}, {2, 2}};

// o_B = s_A; Alice's outcome is uniform.
ProbabilityTable channel_table() {
  return make_table(kTwo, [](const auto& s, const auto& o) { return o[1] == s[0] ? 0.5 : 0.0; });
}

ProbabilityTable product_table() {
  return make_table(kTwo, [](const auto& s, const auto& o) {
    const double pa = o[0] == s[0] ? 0.8 : 0.2;
    const double pb = o[1] == 0 ? (s[1] ? 0.3 : 0.6) : (s[1] ? 0.7 : 0.4);
    return pa * pb;
  });
}

// p(o_to | s) does not depend on s_from.
bool setting_ignored(const ProbabilityTable& t, std::size_t from, std::size_t to) {
  const Scenario& sc = t.scenario;
  const std::vector<double> m = marginal(t, {to});
  const std::size_t no = sc.outcomes[to];
  for (std::size_t s = 0; s < sc.num_settings(); ++s) {
    auto digits = unflatten(s, sc.settings);
    digits[from] = 0;
    const std::size_t base = flatten(digits, sc.settings);
    for (std::size_t o = 0; o < no; ++o) {
      if (std::abs(m[s * no + o] - m[base * no + o]) > 1e-12) return false;
    }
  }
  return true;
}

TEST(ScenarioTest, Checks) {
  EXPECT_NO_THROW(check_scenario(kTwo));
  EXPECT_THROW(check_scenario(Scenario{{"A", "A"}, {2, 2}, {2, 2}}), Error);
  EXPECT_THROW(check_scenario(Scenario{{"A"}, {0}, {2}}), Error);
  EXPECT_THROW(check_scenario(Scenario{{}, {}, {}}), Error);
  EXPECT_EQ(flatten({1, 0, 1}, {2, 3, 2}), 7u);
  EXPECT_EQ(unflatten(7, {2, 3, 2}), (std::vector<std::size_t>{1, 0, 1}));
}

TEST(TableTest, CheckNormalization) {
  EXPECT_TRUE(check_table(product_table()).valid);
  ProbabilityTable t = product_table();
  t(0, 0) += 0.1;
  EXPECT_FALSE(check_table(t).valid);
}

TEST(NoSignalingSubsetTest, Examples) {
  const ProbabilityTable product = product_table();
  EXPECT_TRUE(no_signaling_subset(product, std::vector<std::size_t>{0}, {1}).no_signaling);
  EXPECT_TRUE(no_signaling_subset(product, std::vector<std::size_t>{1}, {0}).no_signaling);
  const auto r = no_signaling_subset(channel_table(), std::vector<std::string>{"A"}, {"B"});
  EXPECT_FALSE(r.no_signaling);
  EXPECT_NEAR(r.max_violation, 1.0, 1e-12);
  EXPECT_TRUE(no_signaling_subset(channel_table(), std::vector<std::string>{"B"}, {"A"}).no_signaling);
  EXPECT_THROW(no_signaling_subset(product, std::vector<std::size_t>{0}, {0}), Error);
}

TEST(NoSignalingSubsetTest, ThreePartyConstruction) {
  const ProbabilityTable t = gallery::xor_relay_table();
  EXPECT_TRUE(check_table(t).valid);
  // No party's setting changes any other single party's marginal.
  for (const std::string x : {"A", "B", "C"}) {
    for (const std::string y : {"A", "B", "C"}) {
      if (x != y) {
        EXPECT_TRUE(setting_ignored(t, t.scenario.party_index(x), t.scenario.party_index(y))) << x << "->" << y;
      }
    }
  }
  EXPECT_FALSE(no_signaling_subset(t, std::vector<std::string>{"B"}, {"A", "C"}).no_signaling);
  EXPECT_TRUE(no_signaling_subset(t, std::vector<std::string>{"A"}, {"B", "C"}).no_signaling);
  EXPECT_TRUE(no_signaling_subset(t, std::vector<std::string>{"C"}, {"A", "B"}).no_signaling);
}

TEST(ReducedProcessTest, Examples) {
  const ProbabilityTable a = reduced_process(product_table(), {0});
  ASSERT_EQ(a.scenario.parties, std::vector<std::string>{"A"});
  EXPECT_NEAR(a(0, 0), 0.8, 1e-12);
  EXPECT_NEAR(a(1, 1), 0.8, 1e-12);
  const ProbabilityTable alice = reduced_process(channel_table(), {0});
  EXPECT_NEAR(alice(0, 0), 0.5, 1e-12);
  EXPECT_THROW(reduced_process(channel_table(), {1}), Error);
}

TEST(ConditionalProcessTest, ProductAndChannel) {
  const auto fam = conditional_process(product_table(), {0});
  const ProbabilityTable bob = reduced_process(product_table(), {1});
  for (const auto& c : fam.by_event) {
    ASSERT_TRUE(c.has_value());
    for (std::size_t i = 0; i < bob.p.size(); ++i) EXPECT_NEAR(c->p[i], bob.p[i], 1e-12);
  }
  const auto chan = conditional_process(channel_table(), {0});
  for (std::size_t sa = 0; sa < 2; ++sa) {
    for (std::size_t oa = 0; oa < 2; ++oa) {
      const auto& c = chan.by_event[sa * 2 + oa];
      ASSERT_TRUE(c.has_value());
      for (std::size_t sb = 0; sb < 2; ++sb) EXPECT_NEAR((*c)(sb, sa), 1.0, 1e-12);
    }
  }
}

TEST(ConditionalProcessTest, ZeroProbabilityEventsAreEmpty) {
  const ProbabilityTable t =
      make_table(kTwo, [](const auto& s, const auto& o) { return o[0] == s[0] && o[1] == s[0] ? 1.0 : 0.0; });
  const auto fam = conditional_process(t, {0});
  EXPECT_FALSE(fam.by_event[0 * 2 + 1].has_value());
  EXPECT_TRUE(fam.by_event[0 * 2 + 0].has_value());
  const auto back = recompose(fam, reduced_process(t, {0}), t.scenario);
  for (std::size_t i = 0; i < t.p.size(); ++i) EXPECT_NEAR(back.p[i], t.p[i], 1e-12);
}

TEST(ConditionalProcessTest, RecompositionOnRandomCausalTables) {
  generators::Rng rng(41);
  const Scenario sc{{"A", "B", "C"}, {2, 3, 2}, {2, 2, 3}};
  for (int i = 0; i < 20; ++i) {
    const std::vector<std::size_t> order = {static_cast<std::size_t>(i % 3), static_cast<std::size_t>((i + 1) % 3),
                                            static_cast<std::size_t>((i + 2) % 3)};
    const ProbabilityTable t = generators::random_fixed_order_table(sc, order, rng, i % 2 == 0);
    const std::vector<std::size_t> given = {order[0]};
    const auto back = recompose(conditional_process(t, given), reduced_process(t, given), sc);
    for (std::size_t k = 0; k < t.p.size(); ++k) EXPECT_NEAR(back.p[k], t.p[k], 1e-10);
  }
}

TEST(FixedOrderCausalCheckTest, Examples) {
  const std::vector<std::string> names = {"A", "B"};
  EXPECT_TRUE(fixed_order_causal_check(channel_table(), CausalConfiguration::parse(names, {"A<B"})).compatible);
  const auto r = fixed_order_causal_check(channel_table(), CausalConfiguration::parse(names, {"A||B"}));
  EXPECT_FALSE(r.compatible);
  EXPECT_EQ(r.from, std::vector<std::size_t>{0});
  const auto config = CausalConfiguration::parse({"A", "B", "C"}, {"B<A", "A||C", "B||C"});
  EXPECT_TRUE(fixed_order_causal_check(gallery::xor_relay_table(), config).compatible);
}

TEST(FixedOrderCausalCheckTest, GeneratingOrderPasses) {
  generators::Rng rng(42);
  const Scenario sc{{"A", "B", "C"}, {2, 2, 2}, {2, 2, 2}};
  const std::vector<std::string> names = sc.parties;
  std::vector<std::size_t> order = {0, 1, 2};
  do {
    const auto cfg = CausalConfiguration::parse(names, {names[order[0]] + "<" + names[order[1]],
                                                        names[order[1]] + "<" + names[order[2]],
                                                        names[order[0]] + "<" + names[order[2]]});
    for (int i = 0; i < 3; ++i) {
      const ProbabilityTable t = generators::random_fixed_order_table(sc, order, rng, true);
      EXPECT_TRUE(fixed_order_causal_check(t, cfg).compatible);
      EXPECT_TRUE(checks::oracles::brute_force_fixed_order(t, cfg));
    }
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(FixedOrderCausalCheckTest, MonopartiteIsCausal) {
  generators::Rng rng(43);
  const Scenario one{{"A"}, {3}, {2}};
  EXPECT_TRUE(fixed_order_causal_check(generators::random_table(one, rng), CausalConfiguration::parse({"A"}, {}))
                  .compatible);
}

TEST(MixTablesTest, Examples) {
  const ProbabilityTable t = channel_table();
  const ProbabilityTable same = mix_tables({{1.0, t}});
  for (std::size_t i = 0; i < t.p.size(); ++i) EXPECT_EQ(same.p[i], t.p[i]);
  const ProbabilityTable half = mix_tables({{0.5, t}, {0.5, product_table()}});
  EXPECT_NEAR(half.p[0], 0.5 * t.p[0] + 0.5 * product_table().p[0], 1e-15);
  EXPECT_THROW(mix_tables({{0.6, t}, {0.6, t}}), Error);
  EXPECT_THROW(mix_tables({{-0.5, t}, {1.5, t}}), Error);
  const Scenario other{{"A", "B"}, {2, 2}, {2, 3}};
  generators::Rng rng(44);
  EXPECT_THROW(mix_tables({{0.5, t}, {0.5, generators::random_table(other, rng)}}), Error);
}

}  // namespace
}  // namespace causality::correlations

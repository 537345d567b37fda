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


#include "causality/procmat.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "causality/gallery.hpp"
#include "causality/random_processes.hpp"
#include "oracles.hpp"

namespace causality::procmat {
namespace {

using choi::basis_projector;
using choi::Instrument;
using gallery::pauli;
using gallery::pauli_string;
using qlinalg::identity;
using qlinalg::kron;

const PartySpec kA{"A", 2, 2};
const PartySpec kB{"B", 2, 2};
const PartySpec kC{"C", 2, 2};

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::set<std::string> labels(const std::vector<TermType>& types, const std::vector<PartySpec>& parties) {
  std::set<std::string> out;
  for (const auto& t : types) out.insert(t.label(parties));
  return out;
}

std::set<std::string> present_labels(const ProcessMatrix& w) {
  std::set<std::string> out;
  for (const auto& t : term_types_present(w)) out.insert(t.type.label(w.parties));
  return out;
}

// rho^{A1B1} (x) 1^{A2B2} on slot order (A1, A2, B1, B2).
ProcessMatrix state_process(const ComplexMatrix& rho_ab) {
  const ComplexMatrix w = kron(rho_ab, identity(4));
  const qlinalg::TensorSpace s({{"A1", 2}, {"B1", 2}, {"A2", 2}, {"B2", 2}});
  const std::vector<std::size_t> order = {0, 2, 1, 3};
  return make_process({kA, kB}, qlinalg::permute_slots(w, s, order));
}

Instrument z_measure(const PartySpec& p) {
  const ComplexMatrix out = identity(p.d_out) / static_cast<double>(p.d_out);
  return choi::measure_prepare(p, {basis_projector(2, 0), basis_projector(2, 1)}, {out, out});
}

Instrument single(const choi::CJOperator& m) { return Instrument{m.party, {m.matrix}}; }

ProcessMatrix channel_with_memory(std::uint64_t seed) {
  generators::Rng rng(seed);
  return generators::fixed_order_process({kA, kB}, {0, 1}, {}, rng);
}

TEST(TermTypesTest, SinglePartyHasIdentityAndInput) {
  EXPECT_EQ(labels(allowed_term_types({kA}), {kA}), (std::set<std::string>{"1", "A1"}));
}

TEST(TermTypesTest, TwoPartiesFollowTheRule) {
  // The rule admits A1B1 besides the seven types commonly listed.
  EXPECT_EQ(labels(allowed_term_types({kA, kB}), {kA, kB}),
            (std::set<std::string>{"1", "A1", "B1", "A1B1", "A2B1", "A1B2", "A1A2B1", "A1B1B2"}));
}

TEST(TermTypesTest, CountsFollowFormula) {
  std::vector<PartySpec> parties;
  std::size_t four = 1, three = 1;
  for (char c : std::string("ABCDE")) {
    parties.push_back(PartySpec{std::string(1, c), 2, 2});
    four *= 4;
    three *= 3;
    const auto allowed = allowed_term_types(parties);
    const auto forbidden = forbidden_term_types(parties);
    EXPECT_EQ(allowed.size(), four - three + 1);
    EXPECT_EQ(allowed.size() + forbidden.size(), four);
  }
}

TEST(TermTypesTest, TrivialSlotsCarryNoFlags) {
  const PartySpec charlie{"C", 1, 2};
  for (const auto& t : allowed_term_types({kA, charlie})) EXPECT_FALSE(t.input(1));
  EXPECT_EQ(labels(allowed_term_types({charlie}), {charlie}), (std::set<std::string>{"1"}));
}

TEST(TermTypesPresentTest, Examples) {
  EXPECT_EQ(present_labels(make_process({kA, kB}, identity(16) / 4.0)), (std::set<std::string>{"1"}));
  EXPECT_EQ(present_labels(gallery::ocb_process()), (std::set<std::string>{"1", "A1B1B2", "A2B1"}));
  const auto space = process_space({kA, kB});
  const ProcessMatrix perturbed = make_process({kA, kB}, identity(16) / 4.0 + 0.1 * pauli_string(space, "IIIz"));
  EXPECT_EQ(present_labels(perturbed), (std::set<std::string>{"1", "B2"}));
}

TEST(TermTypesPresentTest, AgreesWithPauliOracle) {
  generators::Rng rng(21);
  const ProcessMatrix w = generators::random_tripartite_ecs({kA, kB, kC}, rng);
  const auto oracle = checks::oracles::term_type_weights(w.matrix, w.space().dims());
  const auto present = term_types_present(w);
  ASSERT_EQ(present.size(), oracle.size());
  for (const auto& t : present) {
    ASSERT_TRUE(oracle.count(t.type.mask));
    EXPECT_NEAR(t.max_abs_coefficient, oracle.at(t.type.mask), 1e-12);
  }
}

TEST(ValidateTest, Examples) {
  EXPECT_TRUE(validate(gallery::ocb_process()).valid);
  EXPECT_TRUE(validate(gallery::switch_process()).valid);
  const auto space = process_space({kA, kB});
  const ProcessMatrix bad = make_process({kA, kB}, identity(16) / 4.0 + 0.1 * pauli_string(space, "IzII"));
  const auto report = validate(bad);
  EXPECT_FALSE(report.valid);
  ASSERT_EQ(report.forbidden_terms.size(), 1u);
  EXPECT_EQ(report.forbidden_terms[0].type.label(bad.parties), "A2");
}

TEST(ValidateTest, DetectsWrongTraceAndNegativity) {
  const ProcessMatrix scaled = make_process({kA, kB}, identity(16) / 2.0);
  const auto r1 = validate(scaled);
  EXPECT_FALSE(r1.valid);
  EXPECT_NEAR(r1.trace, 8, 1e-12);
  const auto space = process_space({kA, kB});
  const ProcessMatrix negative = make_process({kA, kB}, identity(16) / 4.0 + 0.5 * pauli_string(space, "zIzI"));
  const auto r2 = validate(negative);
  EXPECT_FALSE(r2.valid);
  EXPECT_LT(r2.min_eigenvalue, 0);
  EXPECT_TRUE(r2.forbidden_terms.empty());
}

TEST(ValidateTest, RejectsMismatchedDimensions) { EXPECT_THROW(make_process({kA, kB}, identity(8)), Error); }

TEST(ProbabilitiesTest, StateMeasurement) {
  const ComplexMatrix rho = kron(basis_projector(2, 0), basis_projector(2, 0));
  const auto dist = probabilities(state_process(rho), {z_measure(kA), z_measure(kB)});
  ASSERT_EQ(dist.p.size(), 4u);
  EXPECT_NEAR(dist.p[0], 1, 1e-12);
}

TEST(ProbabilitiesTest, SingleOutcomeChannelsGiveOne) {
  generators::Rng rng(22);
  for (int i = 0; i < 10; ++i) {
    const ProcessMatrix w = i % 2 ? gallery::ocb_process() : generators::random_bipartite_separable({kA, kB}, 0.3, rng);
    const auto dist = probabilities(w, {single(generators::random_cptp(kA, rng)), single(generators::random_cptp(kB, rng))});
    ASSERT_EQ(dist.p.size(), 1u);
    EXPECT_NEAR(dist.p[0], 1, 1e-9);
  }
}

TEST(ProbabilitiesTest, ChannelCarriesAliceOutputToBob) {
  // |0><0|^{A1} (x) phi+^{A2B1} (x) 1^{B2}; Alice applies sigma_x, Bob measures z.
  const ComplexMatrix w = kron(kron(basis_projector(2, 0), choi::maximally_entangled(2, false)), identity(2));
  const ProcessMatrix proc = make_process({kA, kB}, w);
  ASSERT_TRUE(validate(proc).valid);
  const Instrument flip = single(choi::choi_from_kraus(kA, {pauli('x')}));
  const auto dist = probabilities(proc, {flip, z_measure(kB)});
  ASSERT_EQ(dist.p.size(), 2u);
  EXPECT_NEAR(dist.p[1], 1, 1e-12);
}

TEST(ProbabilitiesTest, RejectsMismatchedInstruments) {
  EXPECT_THROW(probabilities(gallery::ocb_process(), {z_measure(kA)}), Error);
  EXPECT_THROW(probabilities(gallery::ocb_process(), {z_measure(kA), z_measure(PartySpec{"B", 2, 1})}), Error);
}

TEST(NoSignalingMatrixTest, Examples) {
  const auto ocb = no_signaling_matrix(gallery::ocb_process(), {"B"}, {"A"});
  EXPECT_FALSE(ocb.no_signaling);
  std::set<std::string> offending;
  for (const auto& t : ocb.offending) offending.insert(t.type.label({kA, kB}));
  EXPECT_TRUE(offending.count("A1B1B2"));
  EXPECT_TRUE(no_signaling_matrix(channel_with_memory(23), {"B"}, {"A"}).no_signaling);
  generators::Rng rng(24);
  const ProcessMatrix state = state_process(generators::random_density(4, 0, rng));
  EXPECT_TRUE(no_signaling_matrix(state, {"A"}, {"B"}).no_signaling);
  EXPECT_TRUE(no_signaling_matrix(state, {"B"}, {"A"}).no_signaling);
  EXPECT_THROW(no_signaling_matrix(state, {"A"}, {"A"}), Error);
}

// Largest change of the receiving marginal over random instruments of `from`.
double marginal_spread(const ProcessMatrix& w, std::size_t from, std::size_t to, generators::Rng& rng, int trials) {
  const Instrument fixed = generators::random_instrument(w.parties[to], 2, rng);
  std::vector<double> first;
  double spread = 0;
  for (int i = 0; i < trials; ++i) {
    std::vector<Instrument> inst(2);
    inst[to] = fixed;
    inst[from] = generators::random_instrument(w.parties[from], 2, rng);
    const auto dist = probabilities(w, inst);
    std::vector<double> marginal(2, 0.0);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) marginal[to == 0 ? a : b] += dist.p[a * 2 + b];
    }
    if (first.empty()) first = marginal;
    for (std::size_t k = 0; k < 2; ++k) spread = std::max(spread, std::abs(marginal[k] - first[k]));
  }
  return spread;
}

TEST(NoSignalingMatrixTest, StatisticalAgreement) {
  generators::Rng rng(25);
  const ProcessMatrix channel = channel_with_memory(26);
  EXPECT_LE(marginal_spread(channel, 1, 0, rng, 50), 1e-9);
  EXPECT_GE(marginal_spread(channel, 0, 1, rng, 50), 1e-3);
  EXPECT_GE(marginal_spread(gallery::ocb_process(), 1, 0, rng, 50), 1e-3);
}

TEST(ReducedMatrixTest, SwitchGivesFixedOrderMixture) {
  const ProcessMatrix reduced = reduced_matrix(gallery::switch_process(), {"A", "B"});
  EXPECT_LE(max_diff(reduced.matrix, checks::oracles::switch_mixture(ComplexVector::Unit(2, 0))), 1e-12);
  EXPECT_TRUE(validate(reduced).valid);
}

TEST(ReducedMatrixTest, StateMarginal) {
  generators::Rng rng(27);
  const ComplexMatrix rho = generators::random_density(4, 0, rng);
  const ProcessMatrix reduced = reduced_matrix(state_process(rho), {"A"});
  const qlinalg::TensorSpace s({{"A1", 2}, {"B1", 2}});
  const ComplexMatrix rho_a = qlinalg::partial_trace(rho, s, std::vector<std::size_t>{0});
  EXPECT_LE(max_diff(reduced.matrix, kron(rho_a, identity(2))), 1e-12);
}

TEST(ReducedMatrixTest, UndefinedWhenDiscardedPartySignals) {
  const ProcessMatrix w = channel_with_memory(28);
  ASSERT_TRUE(present_labels(w).count("A2B1"));
  EXPECT_THROW(reduced_matrix(w, {"B"}), Error);
  EXPECT_NO_THROW(reduced_matrix(w, {"A"}));
}

TEST(ConditionOnEventTest, CharliePreparationGivesDiagonalMatrix) {
  const ProcessMatrix w = gallery::ocb_tripartite();
  const choi::CJOperator prep{w.parties[2], basis_projector(2, 0)};
  const auto cond = condition_on_event(w, "C", prep);
  EXPECT_TRUE(cond.report.valid);
  EXPECT_NEAR(cond.probability, 1, 1e-12);
  ComplexMatrix off = cond.matrix.matrix;
  off.diagonal().setZero();
  EXPECT_LE(off.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ConditionOnEventTest, TrashEventLeavesProductUnchanged) {
  generators::Rng rng(29);
  const ProcessMatrix ab = gallery::ocb_process();
  const PartySpec charlie{"C", 2, 1};
  const ComplexMatrix rho = generators::random_density(2, 0, rng);
  const ProcessMatrix w = make_process({kA, kB, charlie}, kron(ab.matrix, rho));
  const auto cond = condition_on_event(w, "C", choi::CJOperator{charlie, identity(2)});
  EXPECT_NEAR(cond.probability, 1, 1e-12);
  EXPECT_LE(max_diff(cond.matrix.matrix, ab.matrix), 1e-12);
}

TEST(ConditionOnEventTest, Errors) {
  const ProcessMatrix w = gallery::ocb_tripartite();
  EXPECT_THROW(condition_on_event(w, "C", choi::CJOperator{w.parties[2], ComplexMatrix::Zero(2, 2)}), Error);
  // Charlie in the switch receives signaling from A and B.
  const ProcessMatrix sw = gallery::switch_process();
  EXPECT_THROW(condition_on_event(sw, "C", choi::CJOperator{sw.parties[2], identity(4)}), Error);
}

TEST(ExtendWithAncillaTest, Examples) {
  const ProcessMatrix w = gallery::ocb_process();
  const ProcessMatrix pure = extend_with_ancilla(w, basis_projector(2, 0), {{"A", 2}});
  EXPECT_TRUE(validate(pure).valid);
  EXPECT_EQ(pure.parties[0].d_in, 4u);
  const ProcessMatrix mixed = extend_with_ancilla(w, identity(2) / 2.0, {{"B", 2}});
  EXPECT_TRUE(validate(mixed).valid);
  // Term types keep their pattern: the ancilla sits inside B's input slot.
  EXPECT_EQ(present_labels(mixed), (std::set<std::string>{"1", "A1B1B2", "A2B1"}));
  EXPECT_THROW(extend_with_ancilla(w, 2 * identity(2), {{"A", 2}}), Error);
  EXPECT_THROW(extend_with_ancilla(w, identity(3) / 3.0, {{"A", 2}}), Error);
}

TEST(ExtendWithAncillaTest, ExtendedOcbMatchesConstruction) {
  const ProcessMatrix ext = extend_with_ancilla(gallery::ocb_tripartite(), choi::maximally_entangled(2, true),
                                                {{"C", 2}, {"B", 2}});
  EXPECT_LE(max_diff(ext.matrix, gallery::ocb_extended().matrix), 1e-15);
  EXPECT_TRUE(validate(ext).valid);
}

TEST(ExtendWithAncillaTest, IgnoringAncillaKeepsStatistics) {
  generators::Rng rng(30);
  const ProcessMatrix w = gallery::ocb_process();
  const ComplexMatrix rho = generators::random_density(2, 0, rng);
  const ProcessMatrix ext = extend_with_ancilla(w, rho, {{"A", 2}});
  for (int i = 0; i < 5; ++i) {
    const Instrument a = generators::random_instrument(kA, 2, rng);
    const Instrument b = generators::random_instrument(kB, 2, rng);
    Instrument a_ext{ext.parties[0], {}};
    // Slot order (A1, ancilla, A2): the ancilla is traced out.
    const qlinalg::TensorSpace s({{"A1", 2}, {"A2", 2}});
    for (const auto& m : a.outcomes) {
      const ComplexMatrix lifted = kron(identity(2), m);
      const qlinalg::TensorSpace ls({{"x", 2}, {"A1", 2}, {"A2", 2}});
      a_ext.outcomes.push_back(qlinalg::permute_slots(lifted, ls, std::vector<std::size_t>{1, 0, 2}));
    }
    const auto p = probabilities(w, {a, b});
    const auto q = probabilities(ext, {a_ext, b});
    for (std::size_t k = 0; k < p.p.size(); ++k) EXPECT_NEAR(p.p[k], q.p[k], 1e-10);
  }
}

TEST(FixedOrderCompatibleTest, Examples) {
  const std::vector<std::string> names = {"A", "B"};
  const auto a_first = CausalConfiguration::parse(names, {"A<B"});
  const auto b_first = CausalConfiguration::parse(names, {"B<A"});
  const auto unordered = CausalConfiguration::parse(names, {"A||B"});
  EXPECT_TRUE(fixed_order_compatible(channel_with_memory(31), a_first).compatible);
  EXPECT_FALSE(fixed_order_compatible(channel_with_memory(31), b_first).compatible);
  const ProcessMatrix ocb = gallery::ocb_process();
  EXPECT_FALSE(fixed_order_compatible(ocb, a_first).compatible);
  EXPECT_FALSE(fixed_order_compatible(ocb, b_first).compatible);
  EXPECT_FALSE(fixed_order_compatible(ocb, unordered).compatible);
  generators::Rng rng(32);
  EXPECT_TRUE(fixed_order_compatible(state_process(generators::random_density(4, 0, rng)), unordered).compatible);
}

TEST(FixedOrderCompatibleTest, RejectsInvalidOrder) {
  EXPECT_THROW(CausalConfiguration::parse({"A", "B", "C"}, {"A<B", "B<C"}), Error);
  EXPECT_THROW(CausalConfiguration::parse({"A", "B"}, {"A<B", "B<A"}), Error);
}

TEST(ValidityInvariantTest, RandomProcessesNormalize) {
  generators::Rng rng(33);
  for (int i = 0; i < 5; ++i) {
    const ProcessMatrix w = generators::random_tripartite_ecs({kA, kB, kC}, rng);
    EXPECT_TRUE(validate(w).valid);
    const auto dist = probabilities(w, {single(generators::random_cptp(kA, rng)), single(generators::random_cptp(kB, rng)),
                                        single(generators::random_cptp(kC, rng))});
    EXPECT_NEAR(dist.p[0], 1, 1e-9);
  }
}

}  // namespace
}  // namespace causality::procmat

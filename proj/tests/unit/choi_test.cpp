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


#include "causality/choi.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "causality/gallery.hpp"
#include "causality/qlinalg.hpp"
#include "causality/random_processes.hpp"

namespace causality::choi {
namespace {

using qlinalg::identity;
using qlinalg::kron;

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

ComplexVector ket(std::initializer_list<Complex> v) {
  ComplexVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& x : v) out(i++) = x;
  return out;
}

TEST(ChoiFromKrausTest, IdentityChannel) {
  const PartySpec q{"A", 2, 2};
  const CJOperator m = choi_from_kraus(q, {identity(2)});
  EXPECT_LE(max_diff(m.matrix, maximally_entangled(2, false)), 0);
}

TEST(ChoiFromKrausTest, TraceAndPrepare) {
  const PartySpec q{"A", 2, 2};
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2), k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1;
  k1(0, 1) = 1;
  const CJOperator m = choi_from_kraus(q, {k0, k1});
  EXPECT_LE(max_diff(m.matrix, kron(identity(2), basis_projector(2, 0))), 1e-15);
}

TEST(ChoiFromKrausTest, ProjectiveOutcomeWithTrivialOutput) {
  const PartySpec q{"A", 2, 1};
  ComplexMatrix e(1, 2);
  e << 1, 0;
  const CJOperator m = choi_from_kraus(q, {e});
  EXPECT_LE(max_diff(m.matrix, basis_projector(2, 0)), 0);
}

TEST(ChoiFromKrausTest, Errors) {
  const PartySpec q{"A", 2, 2};
  EXPECT_THROW(choi_from_kraus(q, {identity(3)}), Error);
  EXPECT_THROW(choi_from_kraus(q, {identity(2), identity(2)}), Error);
}

TEST(ChoiFromKrausTest, TransposeConventionOnComplexKraus) {
  // M = [1 (x) M(phi+)]^T for a Kraus operator with complex entries.
  const PartySpec q{"A", 2, 2};
  const ComplexMatrix y = gallery::pauli('y');
  const CJOperator m = choi_from_kraus(q, {y});
  const ComplexMatrix phi = maximally_entangled(2, false);
  const ComplexMatrix applied = kron(identity(2), y) * phi * kron(identity(2), y).adjoint();
  EXPECT_LE(max_diff(m.matrix, applied.transpose()), 1e-15);
}

TEST(IsCptpTest, Examples) {
  const PartySpec q{"A", 2, 2};
  EXPECT_TRUE(is_cptp(CJOperator{q, maximally_entangled(2, false)}).cptp);
  EXPECT_TRUE(is_cptp(CJOperator{q, identity(4) / 2.0}).cptp);
  const CptpReport half = is_cptp(CJOperator{q, maximally_entangled(2, true)});
  EXPECT_FALSE(half.cptp);
  EXPECT_NEAR(half.trace_condition_error, 0.5, 1e-12);
  EXPECT_FALSE(half.message.empty());
}

TEST(IsCptpTest, RandomKrausSets) {
  generators::Rng rng(11);
  const PartySpec p{"A", 2, 3};
  for (int i = 0; i < 20; ++i) {
    const auto kraus = generators::random_kraus(2, 3, 0, rng);
    const CJOperator m = choi_from_kraus(p, kraus);
    EXPECT_GE(qlinalg::min_eigenvalue(m.matrix), -1e-12);
    EXPECT_TRUE(is_cptp(m).cptp);
    // Dropping a Kraus operator keeps CP but breaks trace preservation.
    std::vector<ComplexMatrix> partial(kraus.begin(), kraus.end() - 1);
    EXPECT_FALSE(is_cptp(choi_from_kraus(p, partial)).cptp);
  }
}

TEST(MeasurePrepareTest, Examples) {
  const PartySpec q{"A", 2, 2};
  const Instrument trivial = measure_prepare(q, {identity(2)}, {basis_projector(2, 0)});
  ASSERT_EQ(trivial.size(), 1u);
  EXPECT_LE(max_diff(trivial.outcomes[0], kron(identity(2), basis_projector(2, 0))), 0);

  const Instrument z = measure_prepare(q, {basis_projector(2, 0), basis_projector(2, 1)},
                                       {basis_projector(2, 0), basis_projector(2, 1)});
  EXPECT_LE(max_diff(z.outcomes[0], kron(basis_projector(2, 0), basis_projector(2, 0))), 0);
  EXPECT_LE(max_diff(z.outcomes[1], kron(basis_projector(2, 1), basis_projector(2, 1))), 0);
  EXPECT_TRUE(check_instrument(z).cptp);

  const double r = 1 / std::sqrt(2.0);
  const ComplexMatrix plus = projector(ket({r, r}));
  const ComplexMatrix minus = projector(ket({r, -r}));
  const Instrument zx = measure_prepare(q, {basis_projector(2, 0), basis_projector(2, 1)}, {plus, minus});
  EXPECT_LE(max_diff(zx.outcomes[0], kron(basis_projector(2, 0), plus)), 1e-15);
  EXPECT_LE(max_diff(zx.outcomes[1], kron(basis_projector(2, 1), minus)), 1e-15);
}

TEST(MeasurePrepareTest, RejectsIncompletePovm) {
  const PartySpec q{"A", 2, 2};
  EXPECT_THROW(measure_prepare(q, {basis_projector(2, 0)}, {basis_projector(2, 0)}), Error);
  EXPECT_THROW(measure_prepare(q, {identity(2)}, {basis_projector(2, 0), basis_projector(2, 1)}), Error);
}

TEST(MaximallyEntangledTest, Examples) {
  const ComplexMatrix n2 = maximally_entangled(2, true);
  EXPECT_NEAR(n2.trace().real(), 1, 1e-15);
  const auto e = qlinalg::eig_hermitian(n2);
  EXPECT_LE(e.values.head(3).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(maximally_entangled(2, false).trace().real(), 2, 1e-15);
  const qlinalg::TensorSpace s({{"a", 4}, {"b", 4}});
  const ComplexMatrix marginal =
      qlinalg::partial_trace(maximally_entangled(4, true), s, std::vector<std::size_t>{0});
  EXPECT_LE(max_diff(marginal, identity(4) / 4.0), 1e-15);
}

TEST(InstrumentTest, OutcomeProbabilitiesSumIndependentOfInstrument) {
  // With a valid process matrix the outcome sum does not depend on the instrument.
  generators::Rng rng(12);
  const auto w = gallery::ocb_process();
  for (int i = 0; i < 10; ++i) {
    const Instrument a = generators::random_instrument(w.parties[0], 3, rng);
    const Instrument b = generators::random_instrument(w.parties[1], 2, rng);
    EXPECT_TRUE(check_instrument(a).cptp);
    const auto dist = procmat::probabilities(w, {a, b});
    double total = 0;
    for (double p : dist.p) total += p;
    EXPECT_NEAR(total, 1, 1e-9);
  }
}

}  // namespace
}  // namespace causality::choi

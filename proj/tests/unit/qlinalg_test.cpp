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


#include "causality/qlinalg.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "causality/gallery.hpp"
#include "causality/random_processes.hpp"

namespace causality::qlinalg {
namespace {

using gallery::pauli;

ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng) {
  const ComplexMatrix g = generators::random_ginibre(d, d, rng);
  return g + g.adjoint();
}

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

TensorSpace qubits(std::size_t n) {
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < n; ++i) slots.push_back({"q" + std::to_string(i), 2});
  return TensorSpace(slots);
}

TEST(TensorSpaceTest, DimensionIsProductAndLabelsUnique) {
  const TensorSpace s({{"a", 2}, {"b", 3}, {"c", 1}});
  EXPECT_EQ(s.dim(), 6u);
  EXPECT_EQ(s.index_of("b"), 1u);
  EXPECT_THROW(s.index_of("z"), Error);
  EXPECT_THROW(TensorSpace({{"a", 2}, {"a", 2}}), Error);
}

TEST(KronTest, Examples) {
  EXPECT_LE(max_diff(kron(identity(2), identity(2)), identity(4)), 0);
  ComplexMatrix zz = ComplexMatrix::Zero(4, 4);
  zz.diagonal() << 1, -1, -1, 1;
  EXPECT_LE(max_diff(kron(pauli('z'), pauli('z')), zz), 0);
  const ComplexMatrix m = kron(pauli('x'), choi::basis_projector(2, 0));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(2, 0) = 1;
  expected(0, 2) = 1;
  EXPECT_LE(max_diff(m, expected), 0);
}

TEST(PartialTraceTest, Examples) {
  const TensorSpace two = qubits(2);
  const std::vector<std::size_t> first = {0};
  EXPECT_LE(max_diff(partial_trace(choi::maximally_entangled(2, true), two, first), identity(2) / 2.0), 1e-15);
  std::mt19937_64 rng(1);
  const ComplexMatrix a = random_hermitian(2, rng);
  const ComplexMatrix b = random_hermitian(2, rng);
  EXPECT_LE(max_diff(partial_trace(kron(a, b), two, first), a * b.trace()), 1e-12);
  const ComplexMatrix m = random_hermitian(4, rng);
  const ComplexMatrix all = partial_trace(m, two, std::vector<std::size_t>{});
  ASSERT_EQ(all.rows(), 1);
  EXPECT_NEAR(std::abs(all(0, 0) - m.trace()), 0, 1e-12);
  EXPECT_THROW(partial_trace(m, two, std::vector<std::string>{"nope"}), Error);
}

TEST(PartialTraceTest, CommutesWithSlotReordering) {
  std::mt19937_64 rng(2);
  const TensorSpace s({{"a", 2}, {"b", 3}, {"c", 2}});
  const ComplexMatrix m = random_hermitian(12, rng);
  const std::vector<std::size_t> order = {2, 0, 1};
  const ComplexMatrix permuted = permute_slots(m, s, order);
  const TensorSpace ps({{"c", 2}, {"a", 2}, {"b", 3}});
  const ComplexMatrix direct = partial_trace(m, s, std::vector<std::string>{"c", "a"});
  const ComplexMatrix via = partial_trace(permuted, ps, std::vector<std::string>{"c", "a"});
  EXPECT_LE(max_diff(direct, via), 1e-12);
}

TEST(HsBasisTest, NormalizationAndOrder) {
  for (std::size_t d : {1u, 2u, 3u, 4u}) {
    const auto basis = hs_basis(d);
    ASSERT_EQ(basis.size(), d * d);
    EXPECT_LE(max_diff(basis[0], identity(d)), 0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      EXPECT_LE(hermiticity_error(basis[i]), 1e-15);
      if (i > 0) {
        EXPECT_NEAR(std::abs(basis[i].trace()), 0, 1e-12);
      }
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const Complex g = (basis[i] * basis[j]).trace();
        EXPECT_NEAR(std::abs(g - Complex(i == j ? d : 0, 0)), 0, 1e-12);
      }
    }
  }
  const auto paulis = hs_basis(2);
  EXPECT_LE(max_diff(paulis[1], pauli('x')), 0);
  EXPECT_LE(max_diff(paulis[2], pauli('y')), 0);
  EXPECT_LE(max_diff(paulis[3], pauli('z')), 0);
}

TEST(HsExpandTest, Examples) {
  const auto id = hs_expand(identity(4), qubits(2));
  EXPECT_NEAR(id.values(0), 1, 1e-15);
  EXPECT_NEAR(id.values.cwiseAbs().sum(), 1, 1e-15);
  const auto zz = hs_expand(kron(pauli('z'), pauli('z')), qubits(2));
  const std::vector<std::size_t> mu = {3, 3};
  EXPECT_NEAR(zz.at(mu), 1, 1e-15);
  EXPECT_NEAR(zz.values.cwiseAbs().sum(), 1, 1e-15);
  const auto w = gallery::ocb_process();
  const auto ocb = hs_expand(w.matrix, w.space());
  const double c = 1 / (4 * std::sqrt(2.0));
  std::size_t nonzero = 0;
  for (Eigen::Index i = 0; i < ocb.values.size(); ++i) nonzero += std::abs(ocb.values(i)) > 1e-12;
  EXPECT_EQ(nonzero, 3u);
  EXPECT_NEAR(ocb.at(std::vector<std::size_t>{0, 0, 0, 0}), 0.25, 1e-15);
  EXPECT_NEAR(ocb.at(std::vector<std::size_t>{3, 0, 1, 3}), c, 1e-15);
  EXPECT_NEAR(ocb.at(std::vector<std::size_t>{0, 3, 3, 0}), c, 1e-15);
}

TEST(HsExpandTest, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1;
  EXPECT_THROW(hs_expand(m, qubits(1)), Error);
}

TEST(HsExpandTest, RoundTripAndParseval) {
  std::mt19937_64 rng(3);
  const std::vector<TensorSpace> spaces = {qubits(1), TensorSpace({{"a", 3}}), TensorSpace({{"a", 2}, {"b", 3}}),
                                           TensorSpace({{"a", 4}, {"b", 1}, {"c", 4}}), qubits(6)};
  for (const auto& s : spaces) {
    const ComplexMatrix m = random_hermitian(s.dim(), rng);
    const auto c = hs_expand(m, s);
    EXPECT_LE(max_diff(hs_reconstruct(c), m), 1e-10);
    const double parseval = c.values.squaredNorm() * static_cast<double>(s.dim());
    const double tr = (m * m).trace().real();
    EXPECT_NEAR(parseval / tr, 1, 1e-8);
  }
}

TEST(HsTransformTest, ForwardMatchesDirectTraces) {
  std::mt19937_64 rng(4);
  const TensorSpace s({{"a", 2}, {"b", 3}});
  const HSTransform t(s);
  const ComplexMatrix m = generators::random_ginibre(6, 6, rng);
  const ComplexVector w = t.forward(m);
  const auto b2 = hs_basis(2);
  const auto b3 = hs_basis(3);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      const std::vector<std::size_t> mu = {i, j};
      const Complex direct = (m * kron(b2[i], b3[j])).trace() / 6.0;
      EXPECT_NEAR(std::abs(w(static_cast<Eigen::Index>(t.flat_index(mu))) - direct), 0, 1e-12);
    }
  }
  EXPECT_LE(max_diff(t.inverse(w), m), 1e-12);
}

TEST(EigTest, Examples) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d.diagonal() << 2, 1;
  const auto e = eig_hermitian(d);
  EXPECT_NEAR(e.values(0), 1, 1e-15);
  EXPECT_NEAR(e.values(1), 2, 1e-15);
  const auto x = eig_hermitian(pauli('x'));
  EXPECT_NEAR(x.values(0), -1, 1e-15);
  EXPECT_NEAR(x.values(1), 1, 1e-15);
  const auto sw = eig_hermitian(gallery::switch_process().matrix);
  EXPECT_NEAR(sw.values(63), 4, 1e-10);
  EXPECT_LE(sw.values.head(63).cwiseAbs().maxCoeff(), 1e-10);
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = 1;
  EXPECT_THROW(eig_hermitian(bad), Error);
}

TEST(EigTest, Reconstruction) {
  std::mt19937_64 rng(5);
  const ComplexMatrix m = random_hermitian(16, rng);
  const auto e = eig_hermitian(m);
  const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  EXPECT_LE((back - m).norm(), 1e-9 * m.norm());
}

TEST(ProjectPsdTest, Examples) {
  const ComplexMatrix rho = choi::maximally_entangled(2, true);
  EXPECT_LE(max_diff(project_psd(rho), rho), 1e-12);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d.diagonal() << 1, -1;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 1;
  EXPECT_LE(max_diff(project_psd(d), expected), 1e-15);
  EXPECT_LE(max_diff(project_psd(pauli('x')), (identity(2) + pauli('x')) / 2.0), 1e-15);
}

TEST(ProjectPsdTest, IdempotentAndNonexpansive) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix a = random_hermitian(6, rng);
    const ComplexMatrix b = random_hermitian(6, rng);
    const ComplexMatrix pa = project_psd(a);
    EXPECT_LE(max_diff(project_psd(pa), pa), 1e-12);
    EXPECT_LE((pa - project_psd(b)).norm(), (a - b).norm() + 1e-12);
    EXPECT_GE(min_eigenvalue(pa), -1e-12);
  }
}

TEST(LinkProductTest, ComposesChannels) {
  // Identity channel linked with a state reproduces the state on the output.
  const TensorSpace in_space({{"in", 2}});
  const TensorSpace chan_space({{"in", 2}, {"out", 2}});
  std::mt19937_64 rng(7);
  const ComplexMatrix rho = generators::random_density(2, 0, rng);
  TensorSpace result;
  const ComplexMatrix out = link_product(rho, in_space, choi::maximally_entangled(2, false), chan_space, &result);
  ASSERT_EQ(result.num_slots(), 1u);
  EXPECT_EQ(result.slot(0).label, "out");
  EXPECT_LE(max_diff(out, rho), 1e-12);
}

TEST(EmbedTest, PlacesIdentityOnMissingSlots) {
  const TensorSpace small({{"b", 2}});
  const TensorSpace big({{"a", 3}, {"b", 2}});
  const ComplexMatrix z = pauli('z');
  EXPECT_LE(max_diff(embed(z, small, big), kron(identity(3), z)), 0);
}

}  // namespace
}  // namespace causality::qlinalg

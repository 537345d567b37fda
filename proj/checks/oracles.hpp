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


#ifndef CAUSALITY_CHECKS_ORACLES_HPP_
#define CAUSALITY_CHECKS_ORACLES_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causality/causal_order.hpp"
#include "causality/common.hpp"
#include "causality/convexsep.hpp"
#include "causality/correlations.hpp"
#include "causality/polytope.hpp"
#include "causality/procmat.hpp"

// Reference computations used to cross-check the library. They avoid the
// library's own algorithms: the functions below work from raw matrix entries
// and table cells.
namespace causality::checks::oracles {

/// Which local (input, output) patterns give a zero contribution for every
/// qubit CPTP map, estimated by sampling `samples` random channels.
struct LocalVanishing {
  bool always_zero[2][2] = {{false, false}, {false, false}};
};
LocalVanishing sample_local_vanishing(std::uint64_t seed, std::size_t samples = 20);

/// Masks (bit 2k input, 2k+1 output of party k) whose expansion terms keep
/// the probability rule normalized, derived from the local pattern table:
/// the identity, or a product with at least one vanishing local factor.
std::vector<std::uint64_t> normalization_preserving_masks(std::size_t num_parties,
                                                          const LocalVanishing& local);

/// Coefficients Tr(M P)/D for every Pauli string P on `num_qubits` qubits,
/// indexed by x * 2^n + z with P = i^{|x&z|} X^x Z^z (qubit 0 most significant).
std::vector<Complex> pauli_coefficients(const ComplexMatrix& m, std::size_t num_qubits);

/// Qubit layout for a list of slot dimensions, each a power of two.
struct QubitLayout {
  std::size_t num_qubits = 0;
  std::vector<std::size_t> first_qubit;  // per slot
  std::vector<std::size_t> width;        // qubits per slot
  /// Slot mask (bit i = slot i) touched by a qubit-level support pattern.
  std::uint64_t slot_mask(std::uint64_t qubit_support) const;
};
QubitLayout qubit_layout(const std::vector<std::size_t>& slot_dims);

/// Largest |coefficient| per slot mask, skipping entries below `floor`.
std::map<std::uint64_t, double> term_type_weights(const ComplexMatrix& m, const std::vector<std::size_t>& slot_dims,
                                                  double floor = 1e-10);

/// Deterministic one-way strategies of a bipartite scenario, as flat tables
/// laid out like ProbabilityTable (both directions, duplicates kept).
std::vector<std::vector<double>> one_way_vertices(const correlations::Scenario& scenario);

/// Euclidean distance from `target` to the convex hull of `points`
/// (Wolfe's minimum-norm-point method).
double hull_distance(const std::vector<std::vector<double>>& points, const std::vector<double>& target);

/// Exact maximum of the game value over deterministic one-way strategies.
lp::Rational deterministic_bound(const polytope::Game& game);

/// Signaling restrictions of a fixed causal configuration evaluated with
/// direct sums over table cells, for the full table and every reduced table
/// that is well defined.
bool brute_force_fixed_order(const correlations::ProbabilityTable& t, const CausalConfiguration& config,
                             double tol = 1e-9);

/// The two-sided fixed-order mixture of the switch with target state psi,
/// assembled entry by entry on slots (A1, A2, B1, B2).
ComplexMatrix switch_mixture(const ComplexVector& psi);

/// Dense Kronecker product of Pauli matrices named by `ops` ('I','x','y','z').
ComplexMatrix pauli_product(const std::string& ops);

struct WitnessRecheck {
  bool ok = false;
  double min_eigenvalue = 0;
  double sum_error = 0;
  /// Largest coefficient of a group sum on a type the group may not carry.
  double forbidden_weight = 0;
  std::string detail;
};
/// Re-checks a separability witness from its blocks alone. Blocks are grouped
/// by the party named first in the block name; every group sum may only carry
/// types that are valid for all parties and, restricted to the other parties,
/// valid for them. Requires qubit-power slot dimensions.
WitnessRecheck recheck_witness(const procmat::ProcessMatrix& target, const convexsep::FeasibilityReport& report,
                               double psd_tol = 1e-8, double sum_tol = 1e-6, double span_tol = 1e-8);

}  // namespace causality::checks::oracles

#endif  // CAUSALITY_CHECKS_ORACLES_HPP_

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


#ifndef CAUSALITY_GALLERY_HPP_
#define CAUSALITY_GALLERY_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causality/choi.hpp"
#include "causality/common.hpp"
#include "causality/convexsep.hpp"
#include "causality/correlations.hpp"
#include "causality/polytope.hpp"
#include "causality/procmat.hpp"

namespace causality::gallery {

/// Pauli matrix by name: 'I', 'x', 'y' or 'z'.
ComplexMatrix pauli(char name);

/// Tensor product of Paulis, one character per slot of `space` ('I' for
/// slots of dimension other than 2 is allowed and means the identity).
ComplexMatrix pauli_string(const qlinalg::TensorSpace& space, const std::string& ops);

/// OCB matrix on two qubit-in/qubit-out parties A, B.
procmat::ProcessMatrix ocb_process();

/// Tripartite variant with Charlie (trivial input, qubit output).
procmat::ProcessMatrix ocb_tripartite();

/// ocb_tripartite extended with half a maximally entangled pair shared
/// between Charlie's and Bob's inputs. Bob's input becomes (B1, B1') and
/// Charlie's becomes C1'.
procmat::ProcessMatrix ocb_extended();

/// Closed form of the bipartite matrix obtained from ocb_extended after
/// Charlie's identity-channel event, normalized to trace 4.
procmat::ProcessMatrix ocb_conditional_closed_form();

/// Charlie's identity-channel event |phi+><phi+| on (C1', C2).
choi::CJOperator charlie_identity_event();

struct SwitchParams {
  ComplexVector psi = ComplexVector::Unit(2, 0);
};
void check_switch_params(const SwitchParams& p);

/// Rank-one switch matrix on A(2,2), B(2,2), C(4,1). Charlie's input is one
/// 4-dimensional slot ordered as (control, system).
procmat::ProcessMatrix switch_process(const SwitchParams& params = {});

/// Equal mixture of the two fixed orders of the switch with Charlie
/// discarded.
procmat::ProcessMatrix switch_reduced_closed_form(const SwitchParams& params = {});

/// Guessing game: Alice (a -> x), Bob ((b, b') -> y, b the high digit).
/// Payoff [x = b] when b' = 0 and [y = a] when b' = 1, uniform settings, so
/// the value is the average success probability.
polytope::Game ocb_game();

/// Three classical parties; setting = bit sent out, outcome = bit received.
/// Bob and Charlie receive uniform bits; Alice receives Bob's bit XOR
/// Charlie's received bit.
correlations::ProbabilityTable xor_relay_table();

struct ProbeResult {
  double p_plus = 0;   // control found in |+>
  double p_minus = 0;  // control found in |->
};
/// Single use of each unitary in the switch; Charlie measures the control in
/// the +/- basis and discards the target.
ProbeResult unitary_commutation_probe(const ComplexMatrix& ua, const ComplexMatrix& ub,
                                      const SwitchParams& params = {});

struct StageResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PipelineReport {
  std::string pipeline;
  std::vector<StageResult> stages;
  std::map<std::string, double> metrics;
  std::string verdict;
  bool passed() const;
};

struct PipelineOptions {
  std::uint64_t seed = 20260101;
  std::size_t charlie_events = 20;
  polytope::SeesawConfig seesaw;
  convexsep::DykstraOptions dykstra;
  Tolerances tolerances = default_tolerances();
};

PipelineReport ocb_pipeline(const PipelineOptions& options = {});
PipelineReport ocb_tripartite_pipeline(const PipelineOptions& options = {});
PipelineReport switch_nonseparability_pipeline(const SwitchParams& params = {},
                                               const PipelineOptions& options = {});
PipelineReport activation_pipeline(const PipelineOptions& options = {});

/// Bob's instrument for the extended process: z-measurement on B1, then the
/// original instrument on B1' -> B2, conjugated by sigma_y when B1 gave 1.
choi::Instrument adaptive_bob_instrument(const choi::Instrument& original);

}  // namespace causality::gallery

#endif  // CAUSALITY_GALLERY_HPP_

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


#ifndef CAUSALITY_RANDOM_PROCESSES_HPP_
#define CAUSALITY_RANDOM_PROCESSES_HPP_

#include <cstddef>
#include <random>
#include <vector>

#include "causality/choi.hpp"
#include "causality/common.hpp"
#include "causality/correlations.hpp"
#include "causality/procmat.hpp"
#include "causality/qlinalg.hpp"

namespace causality::generators {

using Rng = std::mt19937_64;

/// Operator together with the labeled space it acts on.
struct LabeledOperator {
  qlinalg::TensorSpace space;
  ComplexMatrix matrix;
};

ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);
/// Haar-distributed isometry from C^{d_in} into C^{d_out}; requires d_out >= d_in.
ComplexMatrix random_isometry(std::size_t d_in, std::size_t d_out, Rng& rng);
ComplexMatrix random_unitary(std::size_t d, Rng& rng);
ComplexVector random_pure_state(std::size_t d, Rng& rng);
/// Unit-trace density matrix of the given rank (0 means full rank).
ComplexMatrix random_density(std::size_t d, std::size_t rank, Rng& rng);
/// Kraus operators of a random channel d_in -> d_out (rank 0 means d_in * d_out).
std::vector<ComplexMatrix> random_kraus(std::size_t d_in, std::size_t d_out, std::size_t rank, Rng& rng);
/// Choi operator sum_k |K_k>><<K_k| on (input, output).
ComplexMatrix channel_choi(const std::vector<ComplexMatrix>& kraus);

LabeledOperator random_state_on(const std::vector<qlinalg::Slot>& slots, std::size_t rank, Rng& rng);
LabeledOperator random_channel_on(const std::vector<qlinalg::Slot>& in, const std::vector<qlinalg::Slot>& out,
                                  std::size_t rank, Rng& rng);
/// Two CP maps whose sum is a channel.
std::vector<LabeledOperator> random_binary_instrument_on(const std::vector<qlinalg::Slot>& in,
                                                         const std::vector<qlinalg::Slot>& out, Rng& rng);
LabeledOperator link(const LabeledOperator& a, const LabeledOperator& b);
/// Places an operator on the process space, with identity on missing slots.
procmat::ProcessMatrix to_process(const LabeledOperator& op, const std::vector<choi::PartySpec>& parties);

struct ChainOptions {
  std::size_t memory_dim = 2;  // 1 disables the memory line
  std::size_t kraus_rank = 0;  // 0 means full rank
  std::size_t state_rank = 0;  // 0 means full rank
};

/// Circuit in which the parties act in `order`, connected by channels with
/// memory; the last party's output is discarded.
procmat::ProcessMatrix fixed_order_process(const std::vector<choi::PartySpec>& parties,
                                           const std::vector<std::size_t>& order, const ChainOptions& options,
                                           Rng& rng);

/// q W[A before B] + (1 - q) W[B before A] with random circuits.
procmat::ProcessMatrix random_bipartite_separable(const std::vector<choi::PartySpec>& parties, double q,
                                                  Rng& rng, const ChainOptions& options = {});

/// Tripartite mixture over the first party. In each component the first
/// party's output steers a quantum instrument whose outcome fixes the order
/// of the remaining two.
/// When `blocks` is given it receives the six weighted blocks, ordered by
/// first party and then by which of the other two acts last (in party order).
procmat::ProcessMatrix random_tripartite_ecs(const std::vector<choi::PartySpec>& parties, Rng& rng,
                                             const ChainOptions& options = {},
                                             std::vector<LabeledOperator>* blocks = nullptr);

/// Random CP map (part of a random instrument) for the given party, in the
/// instrument convention.
choi::CJOperator random_cp_event(const choi::PartySpec& party, Rng& rng);

/// Random CPTP map for the given party, in the instrument convention.
choi::CJOperator random_cptp(const choi::PartySpec& party, Rng& rng);

/// Random instrument with the given number of outcomes.
choi::Instrument random_instrument(const choi::PartySpec& party, std::size_t outcomes, Rng& rng);

std::vector<double> random_distribution(std::size_t n, Rng& rng);

/// Table with independent uniformly random distributions per setting.
correlations::ProbabilityTable random_table(const correlations::Scenario& scenario, Rng& rng);

/// Each party's response depends on its setting and all earlier settings
/// and outcomes in `order`.
correlations::ProbabilityTable random_fixed_order_table(const correlations::Scenario& scenario,
                                                        const std::vector<std::size_t>& order, Rng& rng,
                                                        bool deterministic = false);

/// Mixture of fixed-order tables over random orders.
correlations::ProbabilityTable random_causal_table(const correlations::Scenario& scenario, Rng& rng,
                                                   std::size_t components = 3);

/// Tripartite table in which the first party's setting and outcome decide
/// the order of the other two; mixed over the first party.
correlations::ProbabilityTable random_dynamical_table(const correlations::Scenario& scenario, Rng& rng,
                                                      std::size_t components = 3);

}  // namespace causality::generators

#endif  // CAUSALITY_RANDOM_PROCESSES_HPP_

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


#ifndef CAUSALITY_PROCMAT_HPP_
#define CAUSALITY_PROCMAT_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "causality/causal_order.hpp"
#include "causality/choi.hpp"
#include "causality/common.hpp"
#include "causality/qlinalg.hpp"

namespace causality::procmat {

using choi::PartySpec;

/// W on slot order (1_1, 1_2, 2_1, 2_2, ...).
struct ProcessMatrix {
  std::vector<PartySpec> parties;
  ComplexMatrix matrix;

  qlinalg::TensorSpace space() const;
  std::size_t party_index(const std::string& name) const;
  std::vector<std::string> party_names() const;
  /// Product of output dimensions, which is Tr W for a valid W.
  double expected_trace() const;
};

/// Throws when the matrix dimension does not fit the parties.
ProcessMatrix make_process(std::vector<PartySpec> parties, ComplexMatrix matrix);
qlinalg::TensorSpace process_space(const std::vector<PartySpec>& parties);

/// Which slots carry a non-identity basis element. Bit 2k is party k's
/// input, bit 2k+1 its output.
struct TermType {
  std::uint64_t mask = 0;
  std::size_t num_parties = 0;

  bool input(std::size_t k) const { return (mask >> (2 * k)) & 1u; }
  bool output(std::size_t k) const { return (mask >> (2 * k + 1)) & 1u; }
  /// e.g. "A1B1B2"; the identity type is "1".
  std::string label(const std::vector<PartySpec>& parties) const;

  auto operator<=>(const TermType&) const = default;
};

std::uint64_t party_bits(std::size_t k);
std::uint64_t parties_bits(const std::vector<std::size_t>& parties);

/// The validity rule: identity, or some party whose input is nontrivial
/// while its output is trivial. `parties` restricts the rule to a subset.
/// Expects `mask` to carry bits of `parties` only.
bool is_allowed_mask(std::uint64_t mask, const std::vector<std::size_t>& parties);
bool is_allowed_mask(std::uint64_t mask, std::size_t num_parties);

std::vector<TermType> allowed_term_types(const std::vector<PartySpec>& parties);
std::vector<TermType> forbidden_term_types(const std::vector<PartySpec>& parties);

struct PresentTerm {
  TermType type;
  double max_abs_coefficient = 0;
};

std::vector<PresentTerm> term_types_present(const ProcessMatrix& w,
                                            const Tolerances& tol = default_tolerances());

struct ValidationReport {
  bool valid = false;
  double hermiticity_error = 0;
  double min_eigenvalue = 0;
  double trace = 0;
  double expected_trace = 0;
  double identity_coefficient = 0;
  double expected_identity_coefficient = 0;
  std::vector<PresentTerm> forbidden_terms;
  std::vector<std::string> failures;
};

ValidationReport validate(const ProcessMatrix& w, const Tolerances& tol = default_tolerances());

/// Outcome distribution for one instrument per party; flat index with
/// party 0 most significant.
struct OutcomeDistribution {
  std::vector<std::size_t> outcome_counts;
  std::vector<double> p;
};

OutcomeDistribution probabilities(const ProcessMatrix& w,
                                  const std::vector<choi::Instrument>& instruments);

struct SignalingReport {
  bool no_signaling = true;
  std::vector<PresentTerm> offending;
};

/// Matrix-level no-signaling from `from` to its complement `to`.
SignalingReport no_signaling_matrix(const ProcessMatrix& w, const std::vector<std::string>& from,
                                    const std::vector<std::string>& to,
                                    const Tolerances& tol = default_tolerances());

/// Tr_discarded(W) divided by the discarded output dimensions. Throws when
/// the discarded parties can signal into the kept set's marginal.
ProcessMatrix reduced_matrix(const ProcessMatrix& w, const std::vector<std::string>& keep,
                             const Tolerances& tol = default_tolerances());

struct ConditionalResult {
  ProcessMatrix matrix;
  double probability = 0;
  ValidationReport report;
};

ConditionalResult condition_on_event(const ProcessMatrix& w, const std::string& party,
                                     const choi::CJOperator& event,
                                     const Tolerances& tol = default_tolerances());

struct AncillaSlot {
  std::string party;
  std::size_t dim = 1;
};

/// W (x) rho, with each ancilla slot appended to its party's input system
/// (original input first, then ancillas in listed order).
ProcessMatrix extend_with_ancilla(const ProcessMatrix& w, const ComplexMatrix& rho,
                                  const std::vector<AncillaSlot>& ancillas,
                                  const Tolerances& tol = default_tolerances());

struct FixedOrderReport {
  bool compatible = true;
  std::vector<std::string> kept;
  std::vector<std::string> from;
  std::vector<std::string> to;
};

FixedOrderReport fixed_order_compatible(const ProcessMatrix& w, const CausalConfiguration& config,
                                        const Tolerances& tol = default_tolerances());

}  // namespace causality::procmat

#endif  // CAUSALITY_PROCMAT_HPP_

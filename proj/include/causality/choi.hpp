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


#ifndef CAUSALITY_CHOI_HPP_
#define CAUSALITY_CHOI_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "causality/common.hpp"
#include "causality/qlinalg.hpp"

namespace causality::choi {

/// A laboratory with input system X1 and output system X2. Dimension 1
/// encodes a trivial system; such slots are kept, never elided.
struct PartySpec {
  std::string name;
  std::size_t d_in = 1;
  std::size_t d_out = 1;

  std::string input_label() const { return name + "1"; }
  std::string output_label() const { return name + "2"; }
  /// Slot order (X1, X2).
  qlinalg::TensorSpace space() const;

  bool operator==(const PartySpec&) const = default;
};

void check_party(const PartySpec& party);

/// CJ operator of a CP map on slot order (X1, X2), with the transpose
/// convention M = [1 (x) M(phi+)]^T, phi+ = sum_j |jj> unnormalized.
struct CJOperator {
  PartySpec party;
  ComplexMatrix matrix;
};

struct Instrument {
  PartySpec party;
  std::vector<ComplexMatrix> outcomes;

  std::size_t size() const { return outcomes.size(); }
  CJOperator outcome(std::size_t j) const { return CJOperator{party, outcomes.at(j)}; }
  ComplexMatrix total() const;
};

/// Kraus operators are d_out x d_in. Throws on a shape mismatch or when
/// sum E^dagger E exceeds the identity beyond tolerance.
CJOperator choi_from_kraus(const PartySpec& party, const std::vector<ComplexMatrix>& kraus,
                           double tol = default_tolerances().cptp);

struct CptpReport {
  bool cptp = false;
  bool hermitian = false;
  double min_eigenvalue = 0;
  /// max-entry deviation of Tr_{X2} M from the identity on X1.
  double trace_condition_error = 0;
  std::string message;
};

CptpReport is_cptp(const CJOperator& m, const Tolerances& tol = default_tolerances());

/// Every outcome PSD and the outcome sum CPTP.
CptpReport check_instrument(const Instrument& instrument,
                            const Tolerances& tol = default_tolerances());

/// Outcome j is the CJ operator of s -> Tr(E_j s) rho_j, which is
/// E_j (x) rho_j^T in the transpose convention above.
Instrument measure_prepare(const PartySpec& party, const std::vector<ComplexMatrix>& povm,
                           const std::vector<ComplexMatrix>& preparations,
                           const Tolerances& tol = default_tolerances());

/// |phi+><phi+| with |phi+> = sum_j |jj>, divided by d when normalized.
ComplexMatrix maximally_entangled(std::size_t d, bool normalized);

/// |psi><psi| for a vector given as a column.
ComplexMatrix projector(const ComplexVector& psi);
ComplexMatrix basis_projector(std::size_t d, std::size_t k);

}  // namespace causality::choi

#endif  // CAUSALITY_CHOI_HPP_

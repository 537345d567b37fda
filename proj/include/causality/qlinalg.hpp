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


#ifndef CAUSALITY_QLINALG_HPP_
#define CAUSALITY_QLINALG_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "causality/common.hpp"

namespace causality::qlinalg {

struct Slot {
  std::string label;
  std::size_t dim = 1;

  bool operator==(const Slot&) const = default;
};

/// Ordered list of labeled tensor factors. Slot 0 is the most significant
/// digit of a flat index.
class TensorSpace {
 public:
  TensorSpace() = default;
  explicit TensorSpace(std::vector<Slot> slots);

  std::size_t num_slots() const { return slots_.size(); }
  const Slot& slot(std::size_t i) const { return slots_.at(i); }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t dim() const { return dim_; }
  std::vector<std::size_t> dims() const;

  /// Throws Error for an unknown label.
  std::size_t index_of(const std::string& label) const;
  bool contains(const std::string& label) const;
  std::vector<std::size_t> indices_of(const std::vector<std::string>& labels) const;

  TensorSpace subspace(std::span<const std::size_t> indices) const;

  bool operator==(const TensorSpace& other) const { return slots_ == other.slots_; }

 private:
  std::vector<Slot> slots_;
  std::size_t dim_ = 1;
};

ComplexMatrix identity(std::size_t d);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors);

/// Traces out every slot not listed in `keep`. The result's slot order is the
/// order of `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorSpace& space,
                            std::span<const std::size_t> keep);
ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorSpace& space,
                            const std::vector<std::string>& keep_labels);

/// Reorders tensor factors: slot i of the result is slot order[i] of the input.
ComplexMatrix permute_slots(const ComplexMatrix& m, const TensorSpace& space,
                            std::span<const std::size_t> order);

/// Tr_S[(op_S (x) 1) m] where S = `slots` (op given in the order of `slots`).
ComplexMatrix contract(const ComplexMatrix& m, const TensorSpace& space,
                       std::span<const std::size_t> slots, const ComplexMatrix& op);

/// Transpose on the listed slots only.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const TensorSpace& space,
                                std::span<const std::size_t> slots);

/// m on `space` embedded as m (x) 1 on `target`, whose slots must contain
/// every slot of `space` (matched by label).
ComplexMatrix embed(const ComplexMatrix& m, const TensorSpace& space, const TensorSpace& target);

/// Link product over the labels the two spaces share:
/// A * B = Tr_shared[(A^{T_shared} (x) 1)(1 (x) B)]. Result lives on the
/// union of slots, ordered as a's unshared slots followed by b's unshared.
ComplexMatrix link_product(const ComplexMatrix& a, const TensorSpace& space_a,
                           const ComplexMatrix& b, const TensorSpace& space_b,
                           TensorSpace* result_space);

double hermiticity_error(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = default_tolerances().hermiticity);

/// Generalized Pauli basis normalized as Tr(s_mu s_nu) = d delta_{mu nu}.
std::vector<ComplexMatrix> hs_basis(std::size_t d);

/// Precomputed fast transform between a matrix on a tensor space and its
/// coefficients in the product Hilbert-Schmidt basis.
class HSTransform {
 public:
  explicit HSTransform(TensorSpace space);

  const TensorSpace& space() const { return space_; }
  std::size_t num_coefficients() const { return num_coefficients_; }

  /// Complex coefficients Tr(m s_alpha)/D.
  ComplexVector forward(const ComplexMatrix& m) const;
  /// Sum_alpha w_alpha s_alpha.
  ComplexMatrix inverse(const ComplexVector& w) const;
  ComplexMatrix inverse(const RealVector& w) const;

  /// Per-slot basis indices of a flat coefficient index.
  std::vector<std::size_t> multi_index(std::size_t flat) const;
  std::size_t flat_index(std::span<const std::size_t> mu) const;
  /// Bit i set iff slot i carries a non-identity basis element.
  std::uint64_t support_mask(std::size_t flat) const;

 private:
  TensorSpace space_;
  std::vector<std::size_t> dims_;
  std::size_t num_coefficients_ = 1;
  std::vector<ComplexMatrix> to_coeff_;    // d^2 x d^2 per slot
  std::vector<ComplexMatrix> from_coeff_;  // d^2 x d^2 per slot
  // Offsets of row and column indices in the slot-pair interleaved layout.
  std::vector<std::size_t> row_base_;
  std::vector<std::size_t> col_base_;
  std::vector<std::size_t> pair_sizes_;
};

struct HSCoefficients {
  TensorSpace space;
  RealVector values;

  double at(std::span<const std::size_t> mu) const;
  std::vector<std::size_t> multi_index(std::size_t flat) const;
};

/// Throws Error when imaginary parts exceed the hermiticity tolerance.
HSCoefficients hs_expand(const ComplexMatrix& m, const TensorSpace& space,
                         double tol = default_tolerances().hermiticity);
ComplexMatrix hs_reconstruct(const HSCoefficients& coefficients);

struct EigenDecomposition {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns
};

/// Throws Error on non-Hermitian input.
EigenDecomposition eig_hermitian(const ComplexMatrix& m,
                                 double tol = default_tolerances().hermiticity);
double min_eigenvalue(const ComplexMatrix& m);
ComplexMatrix project_psd(const ComplexMatrix& m, double tol = default_tolerances().hermiticity);

}  // namespace causality::qlinalg

#endif  // CAUSALITY_QLINALG_HPP_

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

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace causality::qlinalg {
namespace {

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

// Offsets of every multi-index over the listed slots, enumerated with the
// first listed slot most significant.
std::vector<std::size_t> offsets_over(const std::vector<std::size_t>& dims,
                                      const std::vector<std::size_t>& strides,
                                      std::span<const std::size_t> slots) {
  std::size_t count = 1;
  for (std::size_t s : slots) count *= dims[s];
  std::vector<std::size_t> out(count, 0);
  std::vector<std::size_t> digit(slots.size(), 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) off += digit[i] * strides[slots[i]];
    out[flat] = off;
    for (std::size_t i = slots.size(); i-- > 0;) {
      if (++digit[i] < dims[slots[i]]) break;
      digit[i] = 0;
    }
  }
  return out;
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> slots) {
  std::vector<bool> used(n, false);
  for (std::size_t s : slots) {
    if (s >= n) throw Error("slot index out of range");
    if (used[s]) throw Error("slot listed twice");
    used[s] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) rest.push_back(i);
  }
  return rest;
}

void check_dim(const ComplexMatrix& m, const TensorSpace& space) {
  if (static_cast<std::size_t>(m.rows()) != space.dim() ||
      static_cast<std::size_t>(m.cols()) != space.dim()) {
    throw Error("matrix dimension " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                " does not match tensor space dimension " + std::to_string(space.dim()));
  }
}

// Applies op (q x q) along mode k of a row-major tensor with mode sizes q.
void apply_mode(std::vector<Complex>& data, const std::vector<std::size_t>& sizes, std::size_t k,
                const ComplexMatrix& op) {
  std::size_t outer = 1;
  for (std::size_t l = 0; l < k; ++l) outer *= sizes[l];
  std::size_t inner = 1;
  for (std::size_t l = k + 1; l < sizes.size(); ++l) inner *= sizes[l];
  const std::size_t q = sizes[k];
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor scratch(q, inner);
  for (std::size_t o = 0; o < outer; ++o) {
    Eigen::Map<RowMajor> block(data.data() + o * q * inner, q, inner);
    scratch.noalias() = op * block;
    block = scratch;
  }
}

}  // namespace

TensorSpace::TensorSpace(std::vector<Slot> slots) : slots_(std::move(slots)) {
  std::set<std::string> seen;
  for (const Slot& s : slots_) {
    if (s.dim < 1) throw Error("slot '" + s.label + "' has dimension 0");
    if (!seen.insert(s.label).second) throw Error("duplicate slot label '" + s.label + "'");
    dim_ *= s.dim;
  }
}

std::vector<std::size_t> TensorSpace::dims() const {
  std::vector<std::size_t> d;
  d.reserve(slots_.size());
  for (const Slot& s : slots_) d.push_back(s.dim);
  return d;
}

std::size_t TensorSpace::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].label == label) return i;
  }
  throw Error("unknown slot label '" + label + "'");
}

bool TensorSpace::contains(const std::string& label) const {
  return std::any_of(slots_.begin(), slots_.end(),
                     [&](const Slot& s) { return s.label == label; });
}

std::vector<std::size_t> TensorSpace::indices_of(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index_of(l));
  return out;
}

TensorSpace TensorSpace::subspace(std::span<const std::size_t> indices) const {
  std::vector<Slot> sub;
  for (std::size_t i : indices) sub.push_back(slots_.at(i));
  return TensorSpace(std::move(sub));
}

ComplexMatrix identity(std::size_t d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorSpace& space,
                            std::span<const std::size_t> keep) {
  check_dim(m, space);
  const auto dims = space.dims();
  const auto strides = strides_of(dims);
  const auto traced = complement(dims.size(), keep);
  const auto kept_off = offsets_over(dims, strides, keep);
  const auto traced_off = offsets_over(dims, strides, traced);
  const auto n = static_cast<Eigen::Index>(kept_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      Complex acc = 0;
      for (std::size_t t : traced_off) acc += m(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorSpace& space,
                            const std::vector<std::string>& keep_labels) {
  const auto keep = space.indices_of(keep_labels);
  return partial_trace(m, space, keep);
}

ComplexMatrix permute_slots(const ComplexMatrix& m, const TensorSpace& space,
                            std::span<const std::size_t> order) {
  check_dim(m, space);
  if (order.size() != space.num_slots() || !complement(space.num_slots(), order).empty()) {
    throw Error("permutation must list every slot exactly once");
  }
  const auto dims = space.dims();
  const auto map = offsets_over(dims, strides_of(dims), order);
  const auto n = static_cast<Eigen::Index>(map.size());
  ComplexMatrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) out(r, c) = m(map[r], map[c]);
  }
  return out;
}

ComplexMatrix contract(const ComplexMatrix& m, const TensorSpace& space,
                       std::span<const std::size_t> slots, const ComplexMatrix& op) {
  check_dim(m, space);
  const auto dims = space.dims();
  const auto strides = strides_of(dims);
  const auto rest = complement(dims.size(), slots);
  const auto s_off = offsets_over(dims, strides, slots);
  const auto k_off = offsets_over(dims, strides, rest);
  if (static_cast<std::size_t>(op.rows()) != s_off.size() || op.rows() != op.cols()) {
    throw Error("contracted operator has the wrong dimension");
  }
  const auto n = static_cast<Eigen::Index>(k_off.size());
  const auto ds = static_cast<Eigen::Index>(s_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < ds; ++a) {
    for (Eigen::Index b = 0; b < ds; ++b) {
      const Complex w = op(a, b);
      if (w == Complex(0)) continue;
      for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) out(r, c) += w * m(s_off[b] + k_off[r], s_off[a] + k_off[c]);
      }
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const TensorSpace& space,
                                std::span<const std::size_t> slots) {
  check_dim(m, space);
  const auto dims = space.dims();
  const auto strides = strides_of(dims);
  complement(dims.size(), slots);  // validates
  const std::size_t d = space.dim();
  std::vector<std::size_t> part(d, 0);
  for (std::size_t flat = 0; flat < d; ++flat) {
    std::size_t off = 0;
    for (std::size_t s : slots) off += ((flat / strides[s]) % dims[s]) * strides[s];
    part[flat] = off;
  }
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) {
      out(r, c) = m(r - part[r] + part[c], c - part[c] + part[r]);
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& m, const TensorSpace& space, const TensorSpace& target) {
  check_dim(m, space);
  std::vector<Slot> combined = space.slots();
  for (const Slot& s : target.slots()) {
    if (space.contains(s.label)) {
      if (space.slot(space.index_of(s.label)).dim != s.dim) {
        throw Error("slot '" + s.label + "' has mismatched dimensions");
      }
    } else {
      combined.push_back(s);
    }
  }
  if (combined.size() != target.num_slots()) throw Error("embedding target lacks a source slot");
  const TensorSpace combined_space(combined);
  const ComplexMatrix full = kron(m, identity(target.dim() / space.dim()));
  std::vector<std::size_t> order;
  for (const Slot& s : target.slots()) order.push_back(combined_space.index_of(s.label));
  return permute_slots(full, combined_space, order);
}

ComplexMatrix link_product(const ComplexMatrix& a, const TensorSpace& space_a,
                           const ComplexMatrix& b, const TensorSpace& space_b,
                           TensorSpace* result_space) {
  std::vector<Slot> a_only, shared, b_only;
  std::vector<std::size_t> shared_in_a;
  for (std::size_t i = 0; i < space_a.num_slots(); ++i) {
    const Slot& s = space_a.slot(i);
    if (space_b.contains(s.label)) {
      if (space_b.slot(space_b.index_of(s.label)).dim != s.dim) {
        throw Error("linked slot '" + s.label + "' has mismatched dimensions");
      }
      shared.push_back(s);
      shared_in_a.push_back(i);
    } else {
      a_only.push_back(s);
    }
  }
  for (const Slot& s : space_b.slots()) {
    if (!space_a.contains(s.label)) b_only.push_back(s);
  }
  std::vector<Slot> all = a_only;
  all.insert(all.end(), shared.begin(), shared.end());
  all.insert(all.end(), b_only.begin(), b_only.end());
  const TensorSpace full(all);
  const ComplexMatrix at = partial_transpose(a, space_a, shared_in_a);
  const ComplexMatrix product = embed(at, space_a, full) * embed(b, space_b, full);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < a_only.size(); ++i) keep.push_back(i);
  for (std::size_t i = 0; i < b_only.size(); ++i) keep.push_back(a_only.size() + shared.size() + i);
  std::vector<Slot> kept = a_only;
  kept.insert(kept.end(), b_only.begin(), b_only.end());
  if (result_space != nullptr) *result_space = TensorSpace(kept);
  return partial_trace(product, full, keep);
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return hermiticity_error(m) <= tol; }

std::vector<ComplexMatrix> hs_basis(std::size_t d) {
  if (d < 1) throw Error("basis dimension must be positive");
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<ComplexMatrix> basis;
  basis.push_back(identity(d));
  if (d == 1) return basis;
  const double scale = std::sqrt(static_cast<double>(d) / 2.0);
  const Complex i_unit(0, 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      s(j, k) = s(k, j) = scale;
      basis.push_back(s);
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      s(j, k) = -i_unit * scale;
      s(k, j) = i_unit * scale;
      basis.push_back(s);
    }
  }
  for (Eigen::Index l = 1; l < n; ++l) {
    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    const double c = scale * std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) s(j, j) = c;
    s(l, l) = -c * static_cast<double>(l);
    basis.push_back(s);
  }
  return basis;
}

namespace {

struct PairLayout {
  std::vector<std::size_t> row_base;
  std::vector<std::size_t> col_base;
  std::vector<std::size_t> sizes;
};

PairLayout pair_layout(const std::vector<std::size_t>& dims) {
  PairLayout layout;
  std::vector<std::size_t> pair_strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) pair_strides[k - 1] = pair_strides[k] * dims[k] * dims[k];
  for (std::size_t d : dims) layout.sizes.push_back(d * d);
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  const auto strides = strides_of(dims);
  layout.row_base.assign(total, 0);
  layout.col_base.assign(total, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const std::size_t digit = (flat / strides[k]) % dims[k];
      layout.row_base[flat] += digit * dims[k] * pair_strides[k];
      layout.col_base[flat] += digit * pair_strides[k];
    }
  }
  return layout;
}

}  // namespace

HSTransform::HSTransform(TensorSpace space) : space_(std::move(space)), dims_(space_.dims()) {
  for (std::size_t d : dims_) {
    num_coefficients_ *= d * d;
    const auto basis = hs_basis(d);
    const auto q = static_cast<Eigen::Index>(d * d);
    ComplexMatrix to(q, q), from(q, q);
    for (Eigen::Index mu = 0; mu < q; ++mu) {
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
          const auto p = static_cast<Eigen::Index>(r * d + c);
          to(mu, p) = basis[mu](c, r);
          from(p, mu) = basis[mu](r, c);
        }
      }
    }
    to_coeff_.push_back(std::move(to));
    from_coeff_.push_back(std::move(from));
  }
  PairLayout layout = pair_layout(dims_);
  row_base_ = std::move(layout.row_base);
  col_base_ = std::move(layout.col_base);
  pair_sizes_ = std::move(layout.sizes);
}

ComplexVector HSTransform::forward(const ComplexMatrix& m) const {
  check_dim(m, space_);
  const std::size_t d = space_.dim();
  std::vector<Complex> data(num_coefficients_);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) data[row_base_[r] + col_base_[c]] = m(r, c);
  }
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (dims_[k] > 1) apply_mode(data, pair_sizes_, k, to_coeff_[k]);
  }
  ComplexVector out(static_cast<Eigen::Index>(num_coefficients_));
  const double inv = 1.0 / static_cast<double>(d);
  for (std::size_t i = 0; i < num_coefficients_; ++i) out[i] = data[i] * inv;
  return out;
}

ComplexMatrix HSTransform::inverse(const ComplexVector& w) const {
  if (static_cast<std::size_t>(w.size()) != num_coefficients_) throw Error("coefficient count mismatch");
  std::vector<Complex> data(w.data(), w.data() + w.size());
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (dims_[k] > 1) apply_mode(data, pair_sizes_, k, from_coeff_[k]);
  }
  const std::size_t d = space_.dim();
  ComplexMatrix m(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) m(r, c) = data[row_base_[r] + col_base_[c]];
  }
  return m;
}

ComplexMatrix HSTransform::inverse(const RealVector& w) const {
  return inverse(ComplexVector(w.cast<Complex>()));
}

std::vector<std::size_t> HSTransform::multi_index(std::size_t flat) const {
  std::vector<std::size_t> mu(dims_.size(), 0);
  for (std::size_t k = dims_.size(); k-- > 0;) {
    const std::size_t q = dims_[k] * dims_[k];
    mu[k] = flat % q;
    flat /= q;
  }
  return mu;
}

std::size_t HSTransform::flat_index(std::span<const std::size_t> mu) const {
  if (mu.size() != dims_.size()) throw Error("basis index has the wrong number of slots");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    const std::size_t q = dims_[k] * dims_[k];
    if (mu[k] >= q) throw Error("basis index out of range");
    flat = flat * q + mu[k];
  }
  return flat;
}

std::uint64_t HSTransform::support_mask(std::size_t flat) const {
  std::uint64_t mask = 0;
  for (std::size_t k = dims_.size(); k-- > 0;) {
    const std::size_t q = dims_[k] * dims_[k];
    if (flat % q != 0) mask |= std::uint64_t{1} << k;
    flat /= q;
  }
  return mask;
}

double HSCoefficients::at(std::span<const std::size_t> mu) const {
  return values[static_cast<Eigen::Index>(HSTransform(space).flat_index(mu))];
}

std::vector<std::size_t> HSCoefficients::multi_index(std::size_t flat) const {
  return HSTransform(space).multi_index(flat);
}

HSCoefficients hs_expand(const ComplexMatrix& m, const TensorSpace& space, double tol) {
  const HSTransform transform(space);
  const ComplexVector w = transform.forward(m);
  const double imag = w.imag().cwiseAbs().maxCoeff();
  if (imag > tol) {
    throw Error("matrix is not Hermitian: imaginary basis coefficient " + std::to_string(imag));
  }
  return HSCoefficients{space, w.real()};
}

ComplexMatrix hs_reconstruct(const HSCoefficients& coefficients) {
  return HSTransform(coefficients.space).inverse(coefficients.values);
}

EigenDecomposition eig_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw Error("eigendecomposition needs a square matrix");
  const double herm = hermiticity_error(m);
  if (herm > tol) throw Error("matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition did not converge");
  return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const ComplexMatrix& m) {
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

ComplexMatrix project_psd(const ComplexMatrix& m, double tol) {
  const EigenDecomposition e = eig_hermitian(m, tol);
  const RealVector clamped = e.values.cwiseMax(0.0);
  return e.vectors * clamped.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

}  // namespace causality::qlinalg

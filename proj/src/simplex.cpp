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


#include "causality/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace causality::lp {
namespace {

template <typename Scalar>
struct Arith;

template <>
struct Arith<double> {
  static double magnitude(double v) { return std::abs(v); }
  static double tolerance(double t) { return t; }
  static constexpr bool kExact = false;
};

template <>
struct Arith<Rational> {
  static Rational magnitude(const Rational& v) { return abs(v); }
  static Rational tolerance(double) { return Rational(0); }
  static constexpr bool kExact = true;
};

template <typename Scalar>
class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram<Scalar>& program, const SimplexOptions& options)
      : program_(program), options_(options), tol_(Arith<Scalar>::tolerance(options.tolerance)) {
    m_ = program.rows.size();
    n_ = program.num_vars;
    if (program.rhs.size() != m_) throw std::invalid_argument("LP row/rhs count mismatch");
    if (program.cost.size() != n_) throw std::invalid_argument("LP cost vector has the wrong length");
    sign_.assign(m_, 1);
    b_.resize(m_);
    cols_.assign(n_ + m_, {});
    for (std::size_t i = 0; i < m_; ++i) {
      if (program.rhs[i] < 0) sign_[i] = -1;
      b_[i] = sign_[i] < 0 ? Scalar(-program.rhs[i]) : program.rhs[i];
      for (const auto& [j, v] : program.rows[i]) {
        if (j >= n_) throw std::invalid_argument("LP entry refers to an unknown variable");
        if (v == 0) continue;
        cols_[j].emplace_back(i, sign_[i] < 0 ? Scalar(-v) : v);
      }
      cols_[n_ + i].emplace_back(i, Scalar(1));
    }
  }

  LpResult<Scalar> run() {
    LpResult<Scalar> result;
    basis_.resize(m_);
    position_.assign(n_ + m_, kNonBasic);
    binv_.assign(m_ * m_, Scalar(0));
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      position_[n_ + i] = i;
      binv_[i * m_ + i] = 1;
    }
    xb_ = b_;

    std::vector<Scalar> phase1(n_ + m_, Scalar(0));
    for (std::size_t i = 0; i < m_; ++i) phase1[n_ + i] = 1;
    LpStatus status = iterate(phase1, true, &result.iterations);
    if (status == LpStatus::kIterationLimit) {
      result.status = status;
      return result;
    }
    Scalar infeasibility = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) infeasibility += xb_[i];
    }
    result.infeasibility = infeasibility;
    if (infeasibility > (Arith<Scalar>::kExact ? Scalar(0) : Scalar(options_.tolerance * (1.0 + m_)))) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    drive_out_artificials();

    std::vector<Scalar> phase2(n_ + m_, Scalar(0));
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = program_.cost[j];
    status = iterate(phase2, false, &result.iterations);
    result.status = status;
    if (status != LpStatus::kOptimal) return result;

    result.x.assign(n_, Scalar(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) result.x[basis_[i]] = xb_[i];
    }
    result.objective = 0;
    for (std::size_t j = 0; j < n_; ++j) result.objective += program_.cost[j] * result.x[j];
    const std::vector<Scalar> y = duals(phase2);
    result.duals.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) result.duals[i] = sign_[i] < 0 ? Scalar(-y[i]) : y[i];
    return result;
  }

 private:
  static constexpr std::size_t kNonBasic = std::numeric_limits<std::size_t>::max();

  std::vector<Scalar> duals(const std::vector<Scalar>& cost) const {
    std::vector<Scalar> y(m_, Scalar(0));
    for (std::size_t i = 0; i < m_; ++i) {
      const Scalar& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv_[i * m_ + k];
    }
    return y;
  }

  std::vector<Scalar> column_in_basis(std::size_t q) const {
    std::vector<Scalar> u(m_, Scalar(0));
    for (const auto& [r, v] : cols_[q]) {
      for (std::size_t i = 0; i < m_; ++i) {
        const Scalar& b = binv_[i * m_ + r];
        if (b != 0) u[i] += b * v;
      }
    }
    return u;
  }

  void pivot(std::size_t r, std::size_t q, const std::vector<Scalar>& u) {
    const Scalar pivot_value = u[r];
    Scalar* row_r = &binv_[r * m_];
    for (std::size_t k = 0; k < m_; ++k) row_r[k] /= pivot_value;
    const Scalar theta = xb_[r] / pivot_value;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || u[i] == 0) continue;
      const Scalar f = u[i];
      Scalar* row_i = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) {
        if (row_r[k] != 0) row_i[k] -= f * row_r[k];
      }
      xb_[i] -= f * theta;
      if constexpr (!Arith<Scalar>::kExact) {
        if (xb_[i] < 0 && xb_[i] > -tol_) xb_[i] = 0;
      }
    }
    xb_[r] = theta;
    position_[basis_[r]] = kNonBasic;
    basis_[r] = q;
    position_[q] = r;
  }

  void refactor() {
    if constexpr (!Arith<Scalar>::kExact) {
      // Gauss-Jordan on [B | I] with partial pivoting.
      std::vector<double> a(m_ * m_, 0.0), inv(m_ * m_, 0.0);
      for (std::size_t i = 0; i < m_; ++i) {
        for (const auto& [r, v] : cols_[basis_[i]]) a[r * m_ + i] = v;
        inv[i * m_ + i] = 1.0;
      }
      for (std::size_t c = 0; c < m_; ++c) {
        std::size_t best = c;
        for (std::size_t r = c + 1; r < m_; ++r) {
          if (std::abs(a[r * m_ + c]) > std::abs(a[best * m_ + c])) best = r;
        }
        if (std::abs(a[best * m_ + c]) < 1e-14) return;  // keep the updated inverse
        if (best != c) {
          for (std::size_t k = 0; k < m_; ++k) {
            std::swap(a[best * m_ + k], a[c * m_ + k]);
            std::swap(inv[best * m_ + k], inv[c * m_ + k]);
          }
        }
        const double p = a[c * m_ + c];
        for (std::size_t k = 0; k < m_; ++k) {
          a[c * m_ + k] /= p;
          inv[c * m_ + k] /= p;
        }
        for (std::size_t r = 0; r < m_; ++r) {
          if (r == c) continue;
          const double f = a[r * m_ + c];
          if (f == 0.0) continue;
          for (std::size_t k = 0; k < m_; ++k) {
            a[r * m_ + k] -= f * a[c * m_ + k];
            inv[r * m_ + k] -= f * inv[c * m_ + k];
          }
        }
      }
      binv_ = inv;
      for (std::size_t i = 0; i < m_; ++i) {
        double acc = 0;
        for (std::size_t k = 0; k < m_; ++k) acc += binv_[i * m_ + k] * b_[k];
        xb_[i] = acc < 0 && acc > -options_.tolerance ? 0.0 : acc;
      }
    }
  }

  LpStatus iterate(const std::vector<Scalar>& cost, bool allow_artificial, std::size_t* iterations) {
    std::size_t since_refactor = 0;
    while (true) {
      if (*iterations >= options_.max_iterations) return LpStatus::kIterationLimit;
      const std::vector<Scalar> y = duals(cost);
      // Bland: the lowest-index improving column enters.
      std::size_t q = kNonBasic;
      const std::size_t limit = allow_artificial ? n_ + m_ : n_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (position_[j] != kNonBasic) continue;
        Scalar d = cost[j];
        for (const auto& [r, v] : cols_[j]) d -= y[r] * v;
        if (d < -tol_) {
          q = j;
          break;
        }
      }
      if (q == kNonBasic) return LpStatus::kOptimal;
      const std::vector<Scalar> u = column_in_basis(q);
      std::size_t r = kNonBasic;
      Scalar best_ratio = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!(u[i] > tol_)) continue;
        const Scalar ratio = xb_[i] / u[i];
        if (r == kNonBasic || ratio < best_ratio - tol_) {
          r = i;
          best_ratio = ratio;
        } else if (!(ratio > best_ratio + tol_) && basis_[i] < basis_[r]) {
          r = i;
          if (ratio < best_ratio) best_ratio = ratio;
        }
      }
      if (r == kNonBasic) return LpStatus::kUnbounded;
      pivot(r, q, u);
      ++*iterations;
      if (++since_refactor >= options_.refactor_period) {
        refactor();
        since_refactor = 0;
      }
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (position_[j] != kNonBasic) continue;
        Scalar entry = 0;
        for (const auto& [row, v] : cols_[j]) entry += binv_[r * m_ + row] * v;
        if (Arith<Scalar>::magnitude(entry) > (Arith<Scalar>::kExact ? Scalar(0) : Scalar(1e-7))) {
          pivot(r, j, column_in_basis(j));
          break;
        }
      }
    }
    refactor();
  }

  const LinearProgram<Scalar>& program_;
  SimplexOptions options_;
  Scalar tol_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<int> sign_;
  std::vector<Scalar> b_;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> cols_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> position_;
  std::vector<Scalar> binv_;
  std::vector<Scalar> xb_;
};

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

template <typename Scalar>
LpResult<Scalar> solve(const LinearProgram<Scalar>& program, const SimplexOptions& options) {
  return RevisedSimplex<Scalar>(program, options).run();
}

template LpResult<double> solve(const LinearProgram<double>&, const SimplexOptions&);
template LpResult<Rational> solve(const LinearProgram<Rational>&, const SimplexOptions&);

Rational to_rational(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot convert a non-finite value to a rational");
  Rational r(v);  // mpq_set_d is exact
  return r;
}

}  // namespace causality::lp

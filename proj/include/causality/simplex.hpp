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


#ifndef CAUSALITY_SIMPLEX_HPP_
#define CAUSALITY_SIMPLEX_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace causality::lp {

using Rational = mpq_class;

/// minimize cost.x subject to A x = rhs, x >= 0. A is stored by rows.
template <typename Scalar>
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<Scalar> cost;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> rows;
  std::vector<Scalar> rhs;

  std::size_t add_variable(const Scalar& c) {
    cost.push_back(c);
    return num_vars++;
  }
  std::size_t add_row(std::vector<std::pair<std::size_t, Scalar>> entries, const Scalar& b) {
    rows.push_back(std::move(entries));
    rhs.push_back(b);
    return rows.size() - 1;
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus status);

template <typename Scalar>
struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  Scalar objective = 0;
  std::vector<Scalar> x;
  /// Row multipliers y with reduced costs c - A^T y >= 0 at the optimum.
  std::vector<Scalar> duals;
  /// Optimal phase-one value (sum of artificials); zero when feasible.
  Scalar infeasibility = 0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  /// Pivot and feasibility tolerance for the floating backend; the exact
  /// backend ignores it.
  double tolerance = 1e-9;
  std::size_t max_iterations = 500000;
  std::size_t refactor_period = 64;
};

/// Two-phase revised simplex with an explicit basis inverse and Bland's
/// anti-cycling rule.
template <typename Scalar>
LpResult<Scalar> solve(const LinearProgram<Scalar>& program, const SimplexOptions& options = {});

extern template LpResult<double> solve(const LinearProgram<double>&, const SimplexOptions&);
extern template LpResult<Rational> solve(const LinearProgram<Rational>&, const SimplexOptions&);

/// Exact rational value of a double (every finite double is a dyadic
/// rational).
Rational to_rational(double v);

}  // namespace causality::lp

#endif  // CAUSALITY_SIMPLEX_HPP_

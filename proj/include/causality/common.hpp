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

#ifndef CAUSALITY_COMMON_HPP_
#define CAUSALITY_COMMON_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace causality {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical thresholds used throughout the library. Every check that
/// compares against zero reads its threshold from here.
struct Tolerances {
  double hermiticity = 1e-9;
  double psd_min_eigenvalue = -1e-10;
  double coefficient_zero = 1e-10;
  double trace = 1e-9;
  double cptp = 1e-9;
  double probability_sum = 1e-9;
  double probability_floor = -1e-10;
  double marginal = 1e-9;
  double zero_probability = 1e-12;
  double rank_one = 1e-10;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances kDefaults;
  return kDefaults;
}

}  // namespace causality

#endif  // CAUSALITY_COMMON_HPP_

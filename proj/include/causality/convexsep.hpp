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


#ifndef CAUSALITY_CONVEXSEP_HPP_
#define CAUSALITY_CONVEXSEP_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "causality/common.hpp"
#include "causality/procmat.hpp"
#include "causality/qlinalg.hpp"

namespace causality::convexsep {

/// Predicate on term masks over the target space's slots (bit i = slot i
/// nontrivial).
using MaskPredicate = std::function<bool(std::uint64_t)>;

/// A PSD block embedded as 1_{identity slots} (x) X. X lives on the target
/// space with the identity slots removed, restricted to the masks accepted
/// by `span`.
struct BlockSpec {
  std::string name;
  std::vector<std::size_t> identity_slots;
  MaskPredicate span;
  std::size_t group = 0;
};

/// The sum of a group's blocks may only contain types accepted by `allowed`.
struct GroupSpec {
  std::string name;
  MaskPredicate allowed;
};

struct SeparabilitySpec {
  qlinalg::TensorSpace space;
  std::vector<BlockSpec> blocks;
  std::vector<GroupSpec> groups;
};

struct DykstraOptions {
  std::size_t max_iterations = 20000;
  double residual_tolerance = 1e-7;
  double psd_tolerance = 1e-8;
  std::size_t log_period = 10;
};

enum class Status { kFeasible, kInconclusive, kCertifiedInfeasible };
const char* to_string(Status s);

struct Certificate {
  std::string kind;
  std::string reason;
  double largest_eigenvalue = 0;
  double second_eigenvalue = 0;
  /// Parties that receive signaling from the rest.
  std::vector<std::string> signaled_parties;
};

struct WitnessBlock {
  std::string name;
  qlinalg::TensorSpace space;  // reduced space of the block
  std::vector<std::string> identity_labels;
  ComplexMatrix matrix;
};

struct FeasibilityReport {
  Status status = Status::kInconclusive;
  /// Frobenius distance between the last cone iterate and its projection
  /// onto the affine constraints.
  double residual = 0;
  std::size_t iterations = 0;
  std::vector<WitnessBlock> blocks;
  std::optional<Certificate> certificate;
  std::vector<double> residual_log;
  std::string note;
};

FeasibilityReport solve_separability(const SeparabilitySpec& spec, const ComplexMatrix& target,
                                     const DykstraOptions& options = {});

struct WitnessValidation {
  bool ok = false;
  double min_eigenvalue = 0;
  double span_error = 0;
  double sum_error = 0;
};

/// Embeds every witness block on the full space and re-checks positivity,
/// span membership and the sum, without touching solver state.
WitnessValidation validate_witness(const SeparabilitySpec& spec, const ComplexMatrix& target,
                                   const FeasibilityReport& report, double psd_tol = 1e-8,
                                   double span_tol = 1e-8, double sum_tol = 1e-7);

SeparabilitySpec bipartite_spec(const procmat::ProcessMatrix& w);
SeparabilitySpec fixed_first_spec(const procmat::ProcessMatrix& w, std::size_t first);
SeparabilitySpec tripartite_ecs_spec(const procmat::ProcessMatrix& w);

FeasibilityReport bipartite_causal_sep(const procmat::ProcessMatrix& w, const DykstraOptions& options = {});
/// Throws when w has types that are not allowed with `first` acting first.
FeasibilityReport fixed_first_ecs(const procmat::ProcessMatrix& w, const std::string& first,
                                  const DykstraOptions& options = {},
                                  const Tolerances& tol = default_tolerances());

struct EcsOptions {
  DykstraOptions dykstra;
  /// Try the rank-one certificate before projecting.
  bool use_certificate = true;
};

FeasibilityReport tripartite_ecs(const procmat::ProcessMatrix& w, const EcsOptions& options = {},
                                 const Tolerances& tol = default_tolerances());

std::optional<Certificate> rank1_nonseparability_certificate(const procmat::ProcessMatrix& w,
                                                             const Tolerances& tol = default_tolerances());

}  // namespace causality::convexsep

#endif  // CAUSALITY_CONVEXSEP_HPP_

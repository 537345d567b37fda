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


#ifndef CAUSALITY_CHECKS_ACCEPTANCE_HPP_
#define CAUSALITY_CHECKS_ACCEPTANCE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace causality::checks {

inline constexpr int kNumCriteria = 9;

struct AcceptanceConfig {
  std::uint64_t seed = 20260101;
};

struct SubCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<SubCheck> checks;
  double seconds = 0;
  double limit_seconds = 0;
  /// All sub-checks passed and the run finished within the time limit.
  bool passed = false;
  std::string error;  // set when the criterion threw
};

CriterionResult run_criterion(int id, const AcceptanceConfig& config = {});
std::vector<CriterionResult> run_all(const AcceptanceConfig& config = {});

/// One line: "criterion N [PASS|FAIL] title (x.xx s / limit s)".
std::string summary_line(const CriterionResult& r);

}  // namespace causality::checks

#endif  // CAUSALITY_CHECKS_ACCEPTANCE_HPP_

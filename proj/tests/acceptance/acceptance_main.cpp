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


#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  using causality::checks::CriterionResult;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance_suite [--criterion N]...\n";
      return 64;
    }
  }
  if (ids.empty()) {
    for (int id = 1; id <= causality::checks::kNumCriteria; ++id) ids.push_back(id);
  }
  bool all = true;
  for (int id : ids) {
    const CriterionResult r = causality::checks::run_criterion(id);
    std::cout << causality::checks::summary_line(r) << "\n";
    for (const auto& c : r.checks) {
      std::cout << "    " << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << c.detail << "\n";
    }
    if (!r.error.empty()) std::cout << "    error: " << r.error << "\n";
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

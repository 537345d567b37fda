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


#ifndef CAUSALITY_CAUSAL_ORDER_HPP_
#define CAUSALITY_CAUSAL_ORDER_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace causality {

enum class Relation { kPrecedes, kSucceeds, kUnordered };

struct PairRelation {
  std::string first;
  Relation relation = Relation::kUnordered;
  std::string second;
};

/// A deterministic causal configuration given as its list of pairwise
/// relations. Pairs left out are causally unordered. The relation must
/// already be a strict partial order: transitivity is checked, not closed.
class CausalConfiguration {
 public:
  CausalConfiguration(std::vector<std::string> parties, const std::vector<PairRelation>& relations);

  /// Relations written as "A<B", "A>B" or "A||B".
  static CausalConfiguration parse(std::vector<std::string> parties,
                                   const std::vector<std::string>& relations);

  const std::vector<std::string>& parties() const { return parties_; }
  std::size_t index_of(const std::string& party) const;
  bool precedes(std::size_t i, std::size_t j) const { return before_[i][j]; }
  bool precedes(const std::string& a, const std::string& b) const;
  /// Some member of `from` precedes some member of `to`.
  bool any_precedes(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) const;

 private:
  std::vector<std::string> parties_;
  std::vector<std::vector<bool>> before_;
};

}  // namespace causality

#endif  // CAUSALITY_CAUSAL_ORDER_HPP_

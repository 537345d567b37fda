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


#include "causality/causal_order.hpp"

#include <set>

#include "causality/common.hpp"

namespace causality {

CausalConfiguration::CausalConfiguration(std::vector<std::string> parties,
                                         const std::vector<PairRelation>& relations)
    : parties_(std::move(parties)) {
  const std::size_t n = parties_.size();
  std::set<std::string> seen(parties_.begin(), parties_.end());
  if (seen.size() != n) throw Error("causal configuration lists a party twice");
  before_.assign(n, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> stated(n, std::vector<bool>(n, false));
  for (const PairRelation& r : relations) {
    const std::size_t a = index_of(r.first);
    const std::size_t b = index_of(r.second);
    if (a == b) throw Error("causal configuration relates '" + r.first + "' to itself");
    const bool a_before_b = r.relation == Relation::kPrecedes;
    const bool b_before_a = r.relation == Relation::kSucceeds;
    if (stated[a][b] && (before_[a][b] != a_before_b || before_[b][a] != b_before_a)) {
      throw Error("conflicting relations for '" + r.first + "' and '" + r.second + "'");
    }
    stated[a][b] = stated[b][a] = true;
    before_[a][b] = a_before_b;
    before_[b][a] = b_before_a;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!before_[a][b]) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (before_[b][c] && !before_[a][c]) {
          throw Error("causal configuration is not transitive: " + parties_[a] + "<" + parties_[b] +
                      " and " + parties_[b] + "<" + parties_[c] + " but not " + parties_[a] + "<" +
                      parties_[c]);
        }
      }
    }
  }
}

CausalConfiguration CausalConfiguration::parse(std::vector<std::string> parties,
                                               const std::vector<std::string>& relations) {
  std::vector<PairRelation> parsed;
  for (const std::string& text : relations) {
    PairRelation r;
    std::size_t pos;
    if ((pos = text.find("||")) != std::string::npos) {
      r = {text.substr(0, pos), Relation::kUnordered, text.substr(pos + 2)};
    } else if ((pos = text.find('<')) != std::string::npos) {
      r = {text.substr(0, pos), Relation::kPrecedes, text.substr(pos + 1)};
    } else if ((pos = text.find('>')) != std::string::npos) {
      r = {text.substr(0, pos), Relation::kSucceeds, text.substr(pos + 1)};
    } else {
      throw Error("cannot parse causal relation '" + text + "'");
    }
    parsed.push_back(r);
  }
  return CausalConfiguration(std::move(parties), parsed);
}

std::size_t CausalConfiguration::index_of(const std::string& party) const {
  for (std::size_t i = 0; i < parties_.size(); ++i) {
    if (parties_[i] == party) return i;
  }
  throw Error("unknown party '" + party + "' in causal configuration");
}

bool CausalConfiguration::precedes(const std::string& a, const std::string& b) const {
  return before_[index_of(a)][index_of(b)];
}

bool CausalConfiguration::any_precedes(const std::vector<std::size_t>& from,
                                       const std::vector<std::size_t>& to) const {
  for (std::size_t a : from) {
    for (std::size_t b : to) {
      if (before_[a][b]) return true;
    }
  }
  return false;
}

}  // namespace causality

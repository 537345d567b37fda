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


#ifndef CAUSALITY_CORRELATIONS_HPP_
#define CAUSALITY_CORRELATIONS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causality/causal_order.hpp"
#include "causality/common.hpp"

namespace causality::correlations {

struct Scenario {
  std::vector<std::string> parties;
  std::vector<std::size_t> settings;
  std::vector<std::size_t> outcomes;

  std::size_t num_parties() const { return parties.size(); }
  std::size_t num_settings() const;  // joint
  std::size_t num_outcomes() const;  // joint
  std::size_t party_index(const std::string& name) const;
  Scenario restricted(const std::vector<std::size_t>& parties) const;

  bool operator==(const Scenario&) const = default;
};

/// Throws on empty scenarios, zero cardinalities, or duplicate names.
void check_scenario(const Scenario& s);

/// Mixed-radix helpers; digit 0 is most significant.
std::vector<std::size_t> unflatten(std::size_t flat, const std::vector<std::size_t>& radices);
std::size_t flatten(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& radices);

/// p(o | s) stored densely at index flat(s) * |O| + flat(o).
struct ProbabilityTable {
  Scenario scenario;
  std::vector<double> p;

  double operator()(std::size_t s, std::size_t o) const { return p[s * scenario.num_outcomes() + o]; }
  double& operator()(std::size_t s, std::size_t o) { return p[s * scenario.num_outcomes() + o]; }
};

ProbabilityTable zero_table(const Scenario& s);

struct TableCheck {
  bool valid = true;
  double max_normalization_error = 0;
  double min_entry = 0;
};

TableCheck check_table(const ProbabilityTable& t, const Tolerances& tol = default_tolerances());

/// Marginal over the parties in `keep` (in that order) for every joint
/// setting of all parties: entry (s_all, o_keep).
std::vector<double> marginal(const ProbabilityTable& t, const std::vector<std::size_t>& keep);

struct SignalingResult {
  bool no_signaling = true;
  double max_violation = 0;
};

SignalingResult no_signaling_subset(const ProbabilityTable& t, const std::vector<std::size_t>& from,
                                    const std::vector<std::size_t>& to,
                                    const Tolerances& tol = default_tolerances());
SignalingResult no_signaling_subset(const ProbabilityTable& t, const std::vector<std::string>& from,
                                    const std::vector<std::string>& to,
                                    const Tolerances& tol = default_tolerances());

/// Throws "reduced process undefined" when the discarded parties signal
/// to the kept ones.
ProbabilityTable reduced_process(const ProbabilityTable& t, const std::vector<std::size_t>& keep,
                                 const Tolerances& tol = default_tolerances());

/// Processes for the remaining parties, one per event (s_given, o_given)
/// of positive reduced probability.
struct ConditionalFamily {
  std::vector<std::size_t> given;
  std::vector<std::size_t> rest;
  Scenario given_scenario;
  Scenario rest_scenario;
  /// Indexed by flat(s_given) * |O_given| + flat(o_given); empty for
  /// zero-probability events. Each table is over rest_scenario and may
  /// depend on the event.
  std::vector<std::optional<ProbabilityTable>> by_event;
};

ConditionalFamily conditional_process(const ProbabilityTable& t, const std::vector<std::size_t>& given,
                                      const Tolerances& tol = default_tolerances());

/// Composition law: p = p(rest | event) p(event), and 0 for zero-probability
/// events. Party order of the result is the original table's.
ProbabilityTable recompose(const ConditionalFamily& family, const ProbabilityTable& reduced,
                           const Scenario& full);

struct FixedOrderResult {
  bool compatible = true;
  std::vector<std::size_t> kept;
  std::vector<std::size_t> from;
  std::vector<std::size_t> to;
  double violation = 0;
};

FixedOrderResult fixed_order_causal_check(const ProbabilityTable& t, const CausalConfiguration& config,
                                          const Tolerances& tol = default_tolerances());

ProbabilityTable mix_tables(const std::vector<std::pair<double, ProbabilityTable>>& parts,
                            double tol = 1e-9);

}  // namespace causality::correlations

#endif  // CAUSALITY_CORRELATIONS_HPP_

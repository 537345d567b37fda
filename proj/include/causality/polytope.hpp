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


#ifndef CAUSALITY_POLYTOPE_HPP_
#define CAUSALITY_POLYTOPE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causality/choi.hpp"
#include "causality/correlations.hpp"
#include "causality/procmat.hpp"
#include "causality/simplex.hpp"

namespace causality::polytope {

using correlations::ProbabilityTable;
using correlations::Scenario;
using lp::Rational;

/// A term of the canonical causal decomposition. For two parties only
/// `first` matters; for three, `second` names the party acting second.
struct Branch {
  std::size_t first = 0;
  std::size_t second = 0;

  bool operator==(const Branch&) const = default;
};

std::vector<Branch> all_branches(std::size_t num_parties);
std::string branch_label(const Branch& b, const Scenario& s);

struct Game {
  Scenario scenario;
  /// Weight per (s, o) cell, indexed like ProbabilityTable.
  std::vector<Rational> payoff;
  /// Probability per joint setting.
  std::vector<Rational> setting_distribution;
};

/// Throws when sizes mismatch or the setting distribution is not a
/// probability vector.
void check_game(const Game& g);
double game_value(const Game& g, const ProbabilityTable& t);

/// Unnormalized branch tables; their sum reconstructs the input table.
struct CausalWitness {
  std::vector<Branch> branches;
  std::vector<std::vector<double>> tables;
};

struct MembershipOptions {
  bool exact = false;
  double tolerance = 1e-9;
  /// Restricts the decomposition to the listed branches.
  std::optional<std::vector<Branch>> branches;
};

struct MembershipReport {
  bool causal = false;
  bool exact = false;
  /// Minimal L1 distance from the table to the (possibly restricted)
  /// causal polytope, i.e. the optimal value of the membership LP.
  double margin = 0;
  std::string exact_margin;  // rational, exact mode only
  std::optional<CausalWitness> witness;
  std::size_t lp_iterations = 0;

  std::string status() const { return causal ? "feasible" : "infeasible"; }
};

/// Throws for more than three parties.
MembershipReport causal_membership(const ProbabilityTable& t, const MembershipOptions& options = {});

struct WitnessCheck {
  bool ok = false;
  double min_entry = 0;
  double reconstruction_error = 0;
  double first_party_violation = 0;
  double nested_violation = 0;
};

/// Re-checks a witness against the causal decomposition constraints with
/// direct sums over the tables; shares no code with the LP builder.
WitnessCheck check_witness(const ProbabilityTable& t, const CausalWitness& w, double tol = 1e-8);

struct BoundOptions {
  bool exact = true;
  std::optional<std::vector<Branch>> branches;
};

struct BoundResult {
  double value = 0;
  std::optional<Rational> exact_value;
  /// Maximizing causal table (normalized).
  ProbabilityTable table;
  std::string to_string() const;
};

BoundResult causal_bound(const Game& g, const BoundOptions& options = {});

/// Per party, one instrument per setting.
using Strategy = std::vector<std::vector<choi::Instrument>>;

ProbabilityTable quantum_table(const procmat::ProcessMatrix& w, const Scenario& scenario,
                               const Strategy& strategy);

struct SeesawConfig {
  std::size_t max_sweeps = 200;
  std::size_t restarts = 6;
  std::size_t inner_iterations = 8;
  double convergence_tolerance = 1e-10;
  std::uint64_t seed = 20260101;
};

struct SeesawResult {
  double value = 0;
  bool converged = false;
  std::size_t sweeps = 0;
  Strategy strategy;
  ProbabilityTable table;
  /// Game value after each sweep of the best restart.
  std::vector<double> history;
};

/// Alternating ascent over measure-and-prepare instruments (rank-one
/// projective measurement on the input, outcome-dependent pure preparation).
SeesawResult optimize_quantum_value(const procmat::ProcessMatrix& w, const Game& g,
                                    const SeesawConfig& config = {});

}  // namespace causality::polytope

#endif  // CAUSALITY_POLYTOPE_HPP_

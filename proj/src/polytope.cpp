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


#include "causality/polytope.hpp"

#include <algorithm>
#include <cmath>

namespace causality::polytope {

using correlations::flatten;
using correlations::unflatten;

std::vector<Branch> all_branches(std::size_t n) {
  std::vector<Branch> out;
  if (n == 1) return {Branch{0, 0}};
  if (n == 2) return {Branch{0, 1}, Branch{1, 0}};
  if (n == 3) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        if (i != j) out.push_back(Branch{i, j});
      }
    }
    return out;
  }
  throw Error("causal decompositions are implemented for at most three parties");
}

std::string branch_label(const Branch& b, const Scenario& s) {
  if (s.num_parties() <= 2) return s.parties.at(b.first) + " first";
  return s.parties.at(b.first) + " first, " + s.parties.at(b.second) + " second";
}

void check_game(const Game& g) {
  correlations::check_scenario(g.scenario);
  const std::size_t ns = g.scenario.num_settings();
  if (g.payoff.size() != ns * g.scenario.num_outcomes()) throw Error("game payoff has the wrong size");
  if (g.setting_distribution.size() != ns) throw Error("game setting distribution has the wrong size");
  Rational total = 0;
  for (const auto& q : g.setting_distribution) {
    if (q < 0) throw Error("game setting distribution has a negative entry");
    total += q;
  }
  if (total != 1) throw Error("game setting distribution does not sum to 1");
}

double game_value(const Game& g, const ProbabilityTable& t) {
  check_game(g);
  if (!(t.scenario.settings == g.scenario.settings) || !(t.scenario.outcomes == g.scenario.outcomes)) {
    throw Error("table and game have different scenarios");
  }
  const std::size_t no = g.scenario.num_outcomes();
  double v = 0;
  for (std::size_t s = 0; s < g.scenario.num_settings(); ++s) {
    const double pi = g.setting_distribution[s].get_d();
    if (pi == 0) continue;
    for (std::size_t o = 0; o < no; ++o) v += pi * g.payoff[s * no + o].get_d() * t(s, o);
  }
  return v;
}

namespace {

struct Layout {
  std::size_t ns = 0;
  std::size_t no = 0;
  std::vector<std::vector<std::size_t>> s_digits;
  std::vector<std::vector<std::size_t>> o_digits;
};

Layout layout_of(const Scenario& sc) {
  Layout l;
  l.ns = sc.num_settings();
  l.no = sc.num_outcomes();
  for (std::size_t s = 0; s < l.ns; ++s) l.s_digits.push_back(unflatten(s, sc.settings));
  for (std::size_t o = 0; o < l.no; ++o) l.o_digits.push_back(unflatten(o, sc.outcomes));
  return l;
}

void check_branches(const std::vector<Branch>& branches, std::size_t n) {
  if (branches.empty()) throw Error("at least one causal branch is required");
  const auto all = all_branches(n);
  for (const auto& b : branches) {
    if (std::find(all.begin(), all.end(), b) == all.end()) throw Error("invalid causal branch");
  }
}

// Linear constraints of the causal decomposition on the branch variables
// var(b, s, o) = b * ns * no + s * no + o.
template <typename Scalar>
void add_decomposition_constraints(lp::LinearProgram<Scalar>& prog, const Scenario& sc,
                                   const std::vector<Branch>& branches) {
  const std::size_t n = sc.num_parties();
  if (n == 1) return;
  const Layout l = layout_of(sc);
  const std::size_t cells = l.ns * l.no;
  auto var = [&](std::size_t b, std::size_t s, std::size_t o) { return b * cells + s * l.no + o; };

  // First-party marginals independent of everybody else's settings.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> group;
    for (std::size_t b = 0; b < branches.size(); ++b) {
      if (branches[b].first == i) group.push_back(b);
    }
    if (group.empty()) continue;
    for (std::size_t s = 0; s < l.ns; ++s) {
      auto ref_digits = l.s_digits[s];
      bool is_ref = true;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i && ref_digits[k] != 0) {
          ref_digits[k] = 0;
          is_ref = false;
        }
      }
      if (is_ref) continue;
      const std::size_t ref = flatten(ref_digits, sc.settings);
      for (std::size_t oi = 0; oi < sc.outcomes[i]; ++oi) {
        std::vector<std::pair<std::size_t, Scalar>> row;
        for (std::size_t b : group) {
          for (std::size_t o = 0; o < l.no; ++o) {
            if (l.o_digits[o][i] != oi) continue;
            row.emplace_back(var(b, s, o), Scalar(1));
            row.emplace_back(var(b, ref, o), Scalar(-1));
          }
        }
        prog.add_row(std::move(row), Scalar(0));
      }
    }
  }
  if (n < 3) return;
  // Per ordered branch, the first two parties' marginal is independent of
  // the last party's setting.
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const std::size_t i = branches[b].first;
    const std::size_t j = branches[b].second;
    const std::size_t k = 3 - i - j;
    for (std::size_t s = 0; s < l.ns; ++s) {
      if (l.s_digits[s][k] == 0) continue;
      auto ref_digits = l.s_digits[s];
      ref_digits[k] = 0;
      const std::size_t ref = flatten(ref_digits, sc.settings);
      for (std::size_t oi = 0; oi < sc.outcomes[i]; ++oi) {
        for (std::size_t oj = 0; oj < sc.outcomes[j]; ++oj) {
          std::vector<std::pair<std::size_t, Scalar>> row;
          for (std::size_t o = 0; o < l.no; ++o) {
            if (l.o_digits[o][i] != oi || l.o_digits[o][j] != oj) continue;
            row.emplace_back(var(b, s, o), Scalar(1));
            row.emplace_back(var(b, ref, o), Scalar(-1));
          }
          prog.add_row(std::move(row), Scalar(0));
        }
      }
    }
  }
}

template <typename Scalar>
Scalar from_double(double v) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return v;
  } else {
    return lp::to_rational(v);
  }
}

template <typename Scalar>
double to_double(const Scalar& v) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return v;
  } else {
    return v.get_d();
  }
}

template <typename Scalar>
MembershipReport membership(const ProbabilityTable& t, const std::vector<Branch>& branches,
                            const MembershipOptions& options) {
  const Scenario& sc = t.scenario;
  const std::size_t cells = sc.num_settings() * sc.num_outcomes();
  lp::LinearProgram<Scalar> prog;
  for (std::size_t v = 0; v < branches.size() * cells; ++v) prog.add_variable(Scalar(0));
  const std::size_t slack = prog.num_vars;
  for (std::size_t c = 0; c < 2 * cells; ++c) prog.add_variable(Scalar(1));
  for (std::size_t c = 0; c < cells; ++c) {
    std::vector<std::pair<std::size_t, Scalar>> row;
    for (std::size_t b = 0; b < branches.size(); ++b) row.emplace_back(b * cells + c, Scalar(1));
    row.emplace_back(slack + 2 * c, Scalar(1));
    row.emplace_back(slack + 2 * c + 1, Scalar(-1));
    prog.add_row(std::move(row), from_double<Scalar>(t.p[c]));
  }
  add_decomposition_constraints(prog, sc, branches);
  lp::SimplexOptions lp_options;
  lp_options.tolerance = std::min(options.tolerance, 1e-9);
  const auto result = lp::solve(prog, lp_options);
  if (result.status != lp::LpStatus::kOptimal) {
    throw Error(std::string("membership LP did not reach an optimum: ") + lp::to_string(result.status));
  }
  MembershipReport report;
  report.exact = std::is_same_v<Scalar, Rational>;
  report.lp_iterations = result.iterations;
  report.margin = to_double(result.objective);
  if constexpr (std::is_same_v<Scalar, Rational>) {
    report.exact_margin = result.objective.get_str();
    report.causal = result.objective == 0;
  } else {
    report.causal = result.objective <= options.tolerance;
  }
  if (report.causal) {
    CausalWitness w;
    w.branches = branches;
    for (std::size_t b = 0; b < branches.size(); ++b) {
      std::vector<double> table(cells);
      for (std::size_t c = 0; c < cells; ++c) table[c] = to_double(result.x[b * cells + c]);
      w.tables.push_back(std::move(table));
    }
    report.witness = std::move(w);
  }
  return report;
}

template <typename Scalar>
BoundResult bound(const Game& g, const std::vector<Branch>& branches) {
  const Scenario& sc = g.scenario;
  const std::size_t ns = sc.num_settings();
  const std::size_t no = sc.num_outcomes();
  const std::size_t cells = ns * no;
  lp::LinearProgram<Scalar> prog;
  for (std::size_t b = 0; b < branches.size(); ++b) {
    for (std::size_t c = 0; c < cells; ++c) {
      const Rational w = -g.setting_distribution[c / no] * g.payoff[c];
      if constexpr (std::is_same_v<Scalar, Rational>) {
        prog.add_variable(w);
      } else {
        prog.add_variable(w.get_d());
      }
    }
  }
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<std::pair<std::size_t, Scalar>> row;
    for (std::size_t b = 0; b < branches.size(); ++b) {
      for (std::size_t o = 0; o < no; ++o) row.emplace_back(b * cells + s * no + o, Scalar(1));
    }
    prog.add_row(std::move(row), Scalar(1));
  }
  add_decomposition_constraints(prog, sc, branches);
  const auto result = lp::solve(prog);
  if (result.status == lp::LpStatus::kUnbounded) {
    throw Error("causal bound LP is unbounded, which indicates a constraint bug");
  }
  if (result.status != lp::LpStatus::kOptimal) {
    throw Error(std::string("causal bound LP failed: ") + lp::to_string(result.status));
  }
  BoundResult out;
  out.value = -to_double(result.objective);
  if constexpr (std::is_same_v<Scalar, Rational>) out.exact_value = Rational(-result.objective);
  out.table = correlations::zero_table(sc);
  for (std::size_t b = 0; b < branches.size(); ++b) {
    for (std::size_t c = 0; c < cells; ++c) out.table.p[c] += to_double(result.x[b * cells + c]);
  }
  return out;
}

}  // namespace

MembershipReport causal_membership(const ProbabilityTable& t, const MembershipOptions& options) {
  correlations::check_scenario(t.scenario);
  const std::size_t n = t.scenario.num_parties();
  if (n > 3) throw Error("causal membership is unsupported for more than three parties");
  if (t.p.size() != t.scenario.num_settings() * t.scenario.num_outcomes()) {
    throw Error("table size does not match its scenario");
  }
  const std::vector<Branch> branches = options.branches ? *options.branches : all_branches(n);
  check_branches(branches, n);
  if (n == 1) {
    // Every monopartite process is causal; the witness is the table itself.
    MembershipReport r;
    r.causal = correlations::check_table(t).valid;
    r.exact = options.exact;
    if (r.causal) r.witness = CausalWitness{branches, {t.p}};
    return r;
  }
  return options.exact ? membership<Rational>(t, branches, options) : membership<double>(t, branches, options);
}

WitnessCheck check_witness(const ProbabilityTable& t, const CausalWitness& w, double tol) {
  const Scenario& sc = t.scenario;
  const std::size_t n = sc.num_parties();
  const std::size_t ns = sc.num_settings();
  const std::size_t no = sc.num_outcomes();
  WitnessCheck c;
  if (w.tables.size() != w.branches.size()) return c;
  for (const auto& tab : w.tables) {
    if (tab.size() != ns * no) return c;
    for (double v : tab) c.min_entry = std::min(c.min_entry, v);
  }
  for (std::size_t i = 0; i < ns * no; ++i) {
    double sum = 0;
    for (const auto& tab : w.tables) sum += tab[i];
    c.reconstruction_error = std::max(c.reconstruction_error, std::abs(sum - t.p[i]));
  }
  // Direct marginal sums per joint setting, compared across settings.
  auto marg = [&](const std::vector<std::size_t>& tables, std::size_t s,
                  const std::vector<std::size_t>& parties, const std::vector<std::size_t>& values) {
    double m = 0;
    for (std::size_t o = 0; o < no; ++o) {
      const auto od = unflatten(o, sc.outcomes);
      bool match = true;
      for (std::size_t q = 0; q < parties.size(); ++q) match = match && od[parties[q]] == values[q];
      if (!match) continue;
      for (std::size_t b : tables) m += w.tables[b][s * no + o];
    }
    return m;
  };
  if (n >= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> group;
      for (std::size_t b = 0; b < w.branches.size(); ++b) {
        if (w.branches[b].first == i) group.push_back(b);
      }
      if (group.empty()) continue;
      for (std::size_t s1 = 0; s1 < ns; ++s1) {
        for (std::size_t s2 = s1 + 1; s2 < ns; ++s2) {
          const auto d1 = unflatten(s1, sc.settings);
          const auto d2 = unflatten(s2, sc.settings);
          if (d1[i] != d2[i]) continue;
          for (std::size_t oi = 0; oi < sc.outcomes[i]; ++oi) {
            c.first_party_violation = std::max(
                c.first_party_violation, std::abs(marg(group, s1, {i}, {oi}) - marg(group, s2, {i}, {oi})));
          }
        }
      }
    }
  }
  if (n == 3) {
    for (std::size_t b = 0; b < w.branches.size(); ++b) {
      const std::size_t i = w.branches[b].first;
      const std::size_t j = w.branches[b].second;
      for (std::size_t s1 = 0; s1 < ns; ++s1) {
        for (std::size_t s2 = s1 + 1; s2 < ns; ++s2) {
          const auto d1 = unflatten(s1, sc.settings);
          const auto d2 = unflatten(s2, sc.settings);
          if (d1[i] != d2[i] || d1[j] != d2[j]) continue;
          for (std::size_t oi = 0; oi < sc.outcomes[i]; ++oi) {
            for (std::size_t oj = 0; oj < sc.outcomes[j]; ++oj) {
              c.nested_violation = std::max(c.nested_violation, std::abs(marg({b}, s1, {i, j}, {oi, oj}) -
                                                                         marg({b}, s2, {i, j}, {oi, oj})));
            }
          }
        }
      }
    }
  }
  c.ok = c.min_entry >= -tol && c.reconstruction_error <= tol && c.first_party_violation <= tol &&
         c.nested_violation <= tol;
  return c;
}

std::string BoundResult::to_string() const {
  if (exact_value) return exact_value->get_str();
  return std::to_string(value);
}

BoundResult causal_bound(const Game& g, const BoundOptions& options) {
  check_game(g);
  const std::size_t n = g.scenario.num_parties();
  if (n < 2 || n > 3) throw Error("causal bounds are implemented for two or three parties");
  const std::vector<Branch> branches = options.branches ? *options.branches : all_branches(n);
  check_branches(branches, n);
  return options.exact ? bound<Rational>(g, branches) : bound<double>(g, branches);
}

ProbabilityTable quantum_table(const procmat::ProcessMatrix& w, const Scenario& scenario,
                               const Strategy& strategy) {
  correlations::check_scenario(scenario);
  const std::size_t n = scenario.num_parties();
  if (w.parties.size() != n || strategy.size() != n) throw Error("strategy does not match the parties");
  for (std::size_t k = 0; k < n; ++k) {
    if (strategy[k].size() != scenario.settings[k]) throw Error("strategy needs one instrument per setting");
    for (const auto& inst : strategy[k]) {
      if (inst.size() != scenario.outcomes[k]) throw Error("instrument outcome count does not match the scenario");
    }
  }
  ProbabilityTable t = correlations::zero_table(scenario);
  for (std::size_t s = 0; s < scenario.num_settings(); ++s) {
    const auto sd = unflatten(s, scenario.settings);
    std::vector<choi::Instrument> chosen;
    for (std::size_t k = 0; k < n; ++k) chosen.push_back(strategy[k][sd[k]]);
    const auto dist = procmat::probabilities(w, chosen);
    for (std::size_t o = 0; o < dist.p.size(); ++o) t(s, o) = dist.p[o];
  }
  return t;
}

}  // namespace causality::polytope

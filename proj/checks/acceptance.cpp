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


#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

#include "causality/causal_order.hpp"
#include "causality/convexsep.hpp"
#include "causality/correlations.hpp"
#include "causality/gallery.hpp"
#include "causality/polytope.hpp"
#include "causality/procmat.hpp"
#include "causality/random_processes.hpp"
#include "oracles.hpp"

namespace causality::checks {
namespace {

using choi::PartySpec;
using correlations::ProbabilityTable;
using correlations::Scenario;
using procmat::ProcessMatrix;

const std::set<std::string> kBipartiteListed = {"1", "A1", "B1", "A2B1", "A1B2", "A1A2B1", "A1B1B2"};

const std::set<std::string> kTripartiteAllowed = {
    "C1",         "B2C1",       "B1",           "B1C2",           "B1C1",     "B1C1C2",       "B1B2C1",
    "A2C1",       "A2B2C1",     "A2B1",         "A2B1C2",         "A2B1C1",   "A2B1C1C2",     "A2B1B2C1",
    "A1",         "A1C2",       "A1C1",         "A1C1C2",         "A1B2",     "A1B2C2",       "A1B2C1",
    "A1B2C1C2",   "A1B1",       "A1B1C2",       "A1B1C1",         "A1B1C1C2", "A1B1B2",       "A1B1B2C2",
    "A1B1B2C1",   "A1B1B2C1C2", "A1A2C1",       "A1A2B2C1",       "A1A2B1",   "A1A2B1C2",     "A1A2B1C1",
    "A1A2B1C1C2", "A1A2B1B2C1", "1"};

const std::set<std::string> kTripartiteForbidden = {
    "C2",         "C1C2",         "B2",         "B2C2",           "B2C1C2",       "B1B2",           "B1B2C2",
    "B1B2C1C2",   "A2",           "A2C2",       "A2C1C2",         "A2B2",         "A2B2C2",         "A2B2C1C2",
    "A2B1B2",     "A2B1B2C2",     "A2B1B2C1C2", "A1A2",           "A1A2C2",       "A1A2C1C2",       "A1A2B2",
    "A1A2B2C2",   "A1A2B2C1C2",   "A1A2B1B2",   "A1A2B1B2C2",     "A1A2B1B2C1C2"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out.empty() ? "-" : out;
}

class Recorder {
 public:
  explicit Recorder(CriterionResult& r) : r_(r) {}
  void check(const std::string& name, bool passed, const std::string& detail) {
    r_.checks.push_back(SubCheck{name, passed, detail});
  }

 private:
  CriterionResult& r_;
};

std::vector<PartySpec> qubit_parties(std::size_t n) {
  std::vector<PartySpec> parties;
  for (std::size_t k = 0; k < n; ++k) parties.push_back(PartySpec{std::string(1, static_cast<char>('A' + k)), 2, 2});
  return parties;
}

std::set<std::string> labels_of(const std::vector<procmat::TermType>& types, const std::vector<PartySpec>& parties) {
  std::set<std::string> out;
  for (const auto& t : types) out.insert(t.label(parties));
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  return (a - b).cwiseAbs().maxCoeff();
}

std::string set_diff_detail(const std::set<std::string>& got, const std::set<std::string>& want) {
  std::set<std::string> extra, missing;
  std::set_difference(got.begin(), got.end(), want.begin(), want.end(), std::inserter(extra, extra.end()));
  std::set_difference(want.begin(), want.end(), got.begin(), got.end(), std::inserter(missing, missing.end()));
  return std::to_string(got.size()) + " types; extra {" + join(extra) + "}, missing {" + join(missing) + "}";
}

void criterion_term_types(Recorder& rec, const AcceptanceConfig& cfg) {
  const auto one = qubit_parties(1);
  const auto n1 = labels_of(procmat::allowed_term_types(one), one);
  rec.check("one party has exactly the types 1 and A1", n1 == std::set<std::string>{"1", "A1"},
            set_diff_detail(n1, {"1", "A1"}));
  const auto two = qubit_parties(2);
  const auto n2 = labels_of(procmat::allowed_term_types(two), two);
  rec.check("two parties give exactly the seven listed types", n2 == kBipartiteListed,
            set_diff_detail(n2, kBipartiteListed));
  const auto three = qubit_parties(3);
  const auto n3 = labels_of(procmat::allowed_term_types(three), three);
  rec.check("three parties give the 38 tabulated allowed types", n3 == kTripartiteAllowed,
            set_diff_detail(n3, kTripartiteAllowed));
  const auto f3 = labels_of(procmat::forbidden_term_types(three), three);
  rec.check("three parties give the 26 tabulated forbidden types", f3 == kTripartiteForbidden,
            set_diff_detail(f3, kTripartiteForbidden));
  const oracles::LocalVanishing local = oracles::sample_local_vanishing(cfg.seed);
  const bool local_ok = local.always_zero[1][0] && !local.always_zero[0][0] && !local.always_zero[0][1] &&
                        !local.always_zero[1][1];
  rec.check("sampled channels annihilate exactly the input-only local pattern", local_ok,
            "20 random qubit channels");
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto parties = qubit_parties(n);
    const auto lib = procmat::allowed_term_types(parties);
    const auto oracle = oracles::normalization_preserving_masks(n, local);
    std::size_t formula = 1;
    std::size_t four = 1, three_pow = 1;
    for (std::size_t k = 0; k < n; ++k) {
      four *= 4;
      three_pow *= 3;
    }
    formula = four - three_pow + 1;
    std::set<std::uint64_t> lib_masks;
    for (const auto& t : lib) lib_masks.insert(t.mask);
    const std::set<std::uint64_t> oracle_masks(oracle.begin(), oracle.end());
    rec.check("n=" + std::to_string(n) + " count is 4^n-3^n+1 and matches the sampled oracle",
              lib.size() == formula && oracle.size() == formula && lib_masks == oracle_masks,
              "library " + std::to_string(lib.size()) + ", oracle " + std::to_string(oracle.size()) + ", formula " +
                  std::to_string(formula));
  }
}

// Independent validity evidence: Eigen spectrum, raw trace, and Pauli-oracle
// term types checked against the sampled normalization rule.
void check_valid(Recorder& rec, const std::string& name, const ProcessMatrix& w,
                 const oracles::LocalVanishing& local) {
  const auto report = procmat::validate(w);
  const ComplexMatrix h = 0.5 * (w.matrix + w.matrix.adjoint());
  const double lo = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h).eigenvalues().minCoeff();
  double expected = 1;
  for (const auto& p : w.parties) expected *= static_cast<double>(p.d_out);
  const double trace_err = std::abs(w.matrix.trace().real() - expected);
  const auto allowed = oracles::normalization_preserving_masks(w.parties.size(), local);
  const std::set<std::uint64_t> allowed_set(allowed.begin(), allowed.end());
  std::size_t bad = 0;
  for (const auto& [mask, weight] : oracles::term_type_weights(w.matrix, w.space().dims())) {
    if (!allowed_set.count(mask)) ++bad;
  }
  rec.check(name + " is a valid process matrix",
            report.valid && lo >= -1e-10 && trace_err <= 1e-9 && bad == 0,
            "min eigenvalue " + fmt(lo) + ", trace error " + fmt(trace_err) + ", oracle forbidden types " +
                std::to_string(bad));
}

void criterion_validity(Recorder& rec, const AcceptanceConfig& cfg) {
  const oracles::LocalVanishing local = oracles::sample_local_vanishing(cfg.seed);
  check_valid(rec, "OCB matrix", gallery::ocb_process(), local);
  check_valid(rec, "tripartite OCB variant", gallery::ocb_tripartite(), local);
  check_valid(rec, "extended tripartite OCB matrix", gallery::ocb_extended(), local);
  check_valid(rec, "switch matrix", gallery::switch_process(), local);

  generators::Rng rng(cfg.seed);
  const char paulis[3] = {'x', 'y', 'z'};
  std::size_t caught = 0;
  std::string failures;
  for (int trial = 0; trial < 10; ++trial) {
    const ProcessMatrix base = trial % 2 == 0 ? gallery::ocb_process() : gallery::ocb_tripartite();
    const auto dims = base.space().dims();
    const std::size_t n = base.parties.size();
    const auto allowed = oracles::normalization_preserving_masks(n, local);
    std::vector<std::uint64_t> candidates;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << (2 * n)); ++m) {
      bool fits = true;
      for (std::size_t s = 0; s < dims.size(); ++s) fits = fits && (!((m >> s) & 1u) || dims[s] == 2);
      if (fits && std::find(allowed.begin(), allowed.end(), m) == allowed.end()) candidates.push_back(m);
    }
    const std::uint64_t mask = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    std::string ops;
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if (dims[s] != 2) continue;
      ops += ((mask >> s) & 1u) ? paulis[std::uniform_int_distribution<int>(0, 2)(rng)] : 'I';
    }
    ProcessMatrix perturbed = base;
    perturbed.matrix += 1e-3 * oracles::pauli_product(ops);
    const std::string injected = procmat::TermType{mask, n}.label(base.parties);
    const auto report = procmat::validate(perturbed);
    std::set<std::string> offending;
    for (const auto& t : report.forbidden_terms) offending.insert(t.type.label(base.parties));
    const auto weights = oracles::term_type_weights(perturbed.matrix, dims);
    const bool oracle_sees = weights.count(mask) && std::abs(weights.at(mask) - 1e-3) <= 1e-12;
    if (!report.valid && offending == std::set<std::string>{injected} && oracle_sees) {
      ++caught;
    } else {
      failures += " " + injected + "->{" + join(offending) + "}";
    }
  }
  rec.check("ten perturbed matrices fail with the injected type", caught == 10,
            std::to_string(caught) + "/10 caught" + failures);
}

void criterion_switch(Recorder& rec, const AcceptanceConfig& cfg) {
  gallery::PipelineOptions opts;
  opts.seed = cfg.seed;
  const std::vector<std::pair<std::string, ComplexVector>> targets = {
      {"|0>", ComplexVector::Unit(2, 0)}, {"|+>", ComplexVector::Constant(2, Complex(1 / std::sqrt(2.0), 0))}};
  for (const auto& [name, psi] : targets) {
    gallery::SwitchParams params;
    params.psi = psi;
    const ProcessMatrix w = gallery::switch_process(params);
    const ProcessMatrix reduced = procmat::reduced_matrix(w, {"A", "B"});
    const double diff = max_abs_diff(reduced.matrix, oracles::switch_mixture(psi));
    rec.check("target " + name + ": reduced matrix equals the fixed-order mixture", diff <= 1e-12,
              "max entry difference " + fmt(diff));
    const auto cert = convexsep::rank1_nonseparability_certificate(w);
    rec.check("target " + name + ": rank-one certificate fires", cert.has_value(),
              cert ? cert->reason : "no certificate");
    std::string detail;
    bool all = true;
    for (const std::string x : {"A", "B", "C"}) {
      std::vector<std::string> rest;
      for (const std::string o : {"A", "B", "C"}) {
        if (o != x) rest.push_back(o);
      }
      const bool signaled = !procmat::no_signaling_matrix(w, rest, {x}).no_signaling;
      all = all && signaled;
      detail += x + (signaled ? " signaled " : " not signaled ");
    }
    rec.check("target " + name + ": the others signal to each of A, B, C", all, detail);
    const auto sep = convexsep::bipartite_causal_sep(reduced);
    const auto recheck = oracles::recheck_witness(reduced, sep);
    rec.check("target " + name + ": reduced matrix causally separable",
              sep.status == convexsep::Status::kFeasible && sep.residual <= 1e-7 && recheck.ok,
              std::string(convexsep::to_string(sep.status)) + ", residual " + fmt(sep.residual) + "; oracle " +
                  recheck.detail);
    const auto pipeline = gallery::switch_nonseparability_pipeline(params, opts);
    rec.check("target " + name + ": verdict", pipeline.verdict == "causal, not causally separable",
              "\"" + pipeline.verdict + "\"");
  }
}

void criterion_bound(Recorder& rec, const AcceptanceConfig&) {
  const polytope::Game game = gallery::ocb_game();
  const auto bound = polytope::causal_bound(game);
  const bool exact = bound.exact_value.has_value() && *bound.exact_value == lp::Rational(3, 4);
  rec.check("exact LP bound is 3/4", exact && bound.to_string() == "3/4", "bound " + bound.to_string());
  const lp::Rational oracle = oracles::deterministic_bound(game);
  rec.check("deterministic one-way strategies give the same bound",
            bound.exact_value.has_value() && *bound.exact_value == oracle, "oracle " + oracle.get_str());
}

void criterion_violation(Recorder& rec, const AcceptanceConfig& cfg) {
  const polytope::Game game = gallery::ocb_game();
  polytope::SeesawConfig sc;
  sc.max_sweeps = 200;
  sc.seed = cfg.seed;
  const auto seesaw = polytope::optimize_quantum_value(gallery::ocb_process(), game, sc);
  lp::Rational direct = 0;
  const std::size_t no = game.scenario.num_outcomes();
  for (std::size_t cell = 0; cell < seesaw.table.p.size(); ++cell) {
    direct += game.setting_distribution[cell / no] * game.payoff[cell] * lp::to_rational(seesaw.table.p[cell]);
  }
  rec.check("seesaw reaches at least 0.85 within 200 sweeps",
            seesaw.value >= 0.85 && seesaw.sweeps <= 200 && std::abs(direct.get_d() - seesaw.value) <= 1e-9,
            "value " + fmt(seesaw.value) + " after " + std::to_string(seesaw.sweeps) + " sweeps, table value " +
                fmt(direct.get_d()));
  const auto flt = polytope::causal_membership(seesaw.table);
  polytope::MembershipOptions ex_opts;
  ex_opts.exact = true;
  const auto ex = polytope::causal_membership(seesaw.table, ex_opts);
  rec.check("float membership rejects with margin at least 1e-4", !flt.causal && flt.margin >= 1e-4,
            "margin " + fmt(flt.margin));
  rec.check("exact membership is infeasible", !ex.causal, "status " + ex.status() + ", margin " + ex.exact_margin);
  const double dist = oracles::hull_distance(oracles::one_way_vertices(game.scenario), seesaw.table.p);
  rec.check("table lies outside the one-way vertex hull", dist > 1e-4, "distance " + fmt(dist));
}

void criterion_activation(Recorder& rec, const AcceptanceConfig& cfg) {
  gallery::PipelineOptions opts;
  opts.seed = cfg.seed;
  const auto report = gallery::activation_pipeline(opts);
  const auto metric = [&](const std::string& key) {
    const auto it = report.metrics.find(key);
    return it == report.metrics.end() ? NAN : it->second;
  };
  rec.check("activation pipeline passes every stage", report.passed(), "\"" + report.verdict + "\"");
  const auto cond = procmat::condition_on_event(gallery::ocb_extended(), "C", gallery::charlie_identity_event());
  const double r = 1 / std::sqrt(2.0);
  const ComplexMatrix closed =
      0.125 * (oracles::pauli_product("IIIII") + r * oracles::pauli_product("zIzxz") +
               r * oracles::pauli_product("IzzzI"));
  const double diff = max_abs_diff(cond.matrix.matrix, closed);
  rec.check("conditional matrix equals the closed form", diff <= 1e-12, "max entry difference " + fmt(diff));
  const double table_diff = metric("adaptive_table_max_abs_diff");
  rec.check("adaptive strategy reproduces the direct OCB table", table_diff <= 1e-9,
            "max table difference " + fmt(table_diff));

  const ProcessMatrix pre = gallery::ocb_tripartite();
  generators::Rng rng(cfg.seed + 1);
  std::size_t separable = 0;
  double worst_offdiag = 0, worst_residual = 0;
  for (int e = 0; e < 20; ++e) {
    const auto event = generators::random_cp_event(pre.parties[pre.party_index("C")], rng);
    const auto c = procmat::condition_on_event(pre, "C", event);
    ComplexMatrix off = c.matrix.matrix;
    off.diagonal().setZero();
    worst_offdiag = std::max(worst_offdiag, off.cwiseAbs().maxCoeff());
    const auto sep = convexsep::bipartite_causal_sep(c.matrix);
    worst_residual = std::max(worst_residual, sep.residual);
    if (c.report.valid && sep.status == convexsep::Status::kFeasible && sep.residual <= 1e-6 &&
        oracles::recheck_witness(c.matrix, sep).ok) {
      ++separable;
    }
  }
  rec.check("20 Charlie events leave diagonal, causally separable conditionals",
            separable == 20 && worst_offdiag <= 1e-12,
            std::to_string(separable) + "/20 separable, max off-diagonal " + fmt(worst_offdiag) +
                ", max residual " + fmt(worst_residual));
  rec.check("post-extension table rejected by the causal polytope", metric("membership_margin") > 0,
            "margin " + fmt(metric("membership_margin")));
}

void criterion_polytope(Recorder& rec, const AcceptanceConfig& cfg) {
  const Scenario sc{{"A", "B"}, {2, 2}, {2, 2}};
  const auto vertices = oracles::one_way_vertices(sc);
  generators::Rng rng(cfg.seed);
  std::size_t disagreements = 0, accepted = 0, witnesses_ok = 0;
  double worst_inside = 0;
  for (int i = 0; i < 200; ++i) {
    const ProbabilityTable t = i < 100 ? generators::random_causal_table(sc, rng) : generators::random_table(sc, rng);
    const auto m = polytope::causal_membership(t);
    const double dist = oracles::hull_distance(vertices, t.p);
    if (i < 100) worst_inside = std::max(worst_inside, dist);
    const bool oracle_inside = dist <= 1e-6;
    if (oracle_inside != m.causal) ++disagreements;
    if (m.causal) {
      ++accepted;
      if (m.witness && polytope::check_witness(t, *m.witness).ok) ++witnesses_ok;
    }
  }
  rec.check("bipartite membership agrees with the vertex hull on 200 tables", disagreements == 0,
            std::to_string(disagreements) + " disagreements, " + std::to_string(accepted) +
                " accepted, largest hull distance of a constructed table " + fmt(worst_inside));
  rec.check("every accepted bipartite table carries a valid witness", witnesses_ok == accepted,
            std::to_string(witnesses_ok) + "/" + std::to_string(accepted));

  const Scenario tri{{"A", "B", "C"}, {2, 2, 2}, {2, 2, 2}};
  std::size_t ok = 0;
  double worst_reconstruction = 0;
  for (int i = 0; i < 50; ++i) {
    const ProbabilityTable t = generators::random_dynamical_table(tri, rng);
    const auto m = polytope::causal_membership(t);
    if (!m.causal || !m.witness) continue;
    std::vector<double> sum(t.p.size(), 0.0);
    double min_entry = 0;
    for (const auto& table : m.witness->tables) {
      for (std::size_t k = 0; k < table.size(); ++k) {
        sum[k] += table[k];
        min_entry = std::min(min_entry, table[k]);
      }
    }
    double err = 0;
    for (std::size_t k = 0; k < sum.size(); ++k) err = std::max(err, std::abs(sum[k] - t.p[k]));
    worst_reconstruction = std::max(worst_reconstruction, err);
    if (polytope::check_witness(t, *m.witness).ok && err <= 1e-8 && min_entry >= -1e-9) ++ok;
  }
  rec.check("50 dynamical-order tripartite tables accepted with valid witnesses", ok == 50,
            std::to_string(ok) + "/50, worst reconstruction error " + fmt(worst_reconstruction));
}

void criterion_generators(Recorder& rec, const AcceptanceConfig& cfg) {
  generators::Rng rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto two = qubit_parties(2);
  std::size_t ok2 = 0, recheck2 = 0;
  double worst2 = 0;
  for (int i = 0; i < 50; ++i) {
    const ProcessMatrix w = generators::random_bipartite_separable(two, unit(rng), rng);
    const auto r = convexsep::bipartite_causal_sep(w);
    worst2 = std::max(worst2, r.residual);
    if (r.status == convexsep::Status::kFeasible && r.residual <= 1e-6) ++ok2;
    if (oracles::recheck_witness(w, r).ok) ++recheck2;
  }
  rec.check("50 bipartite mixtures accepted", ok2 == 50,
            std::to_string(ok2) + "/50 feasible, worst residual " + fmt(worst2));
  rec.check("bipartite witnesses re-validated by the oracle", recheck2 == 50, std::to_string(recheck2) + "/50");
  const auto three = qubit_parties(3);
  std::size_t ok3 = 0, recheck3 = 0;
  double worst3 = 0;
  for (int i = 0; i < 50; ++i) {
    const ProcessMatrix w = generators::random_tripartite_ecs(three, rng);
    const auto r = convexsep::tripartite_ecs(w);
    worst3 = std::max(worst3, r.residual);
    if (r.status == convexsep::Status::kFeasible && r.residual <= 1e-6) ++ok3;
    if (oracles::recheck_witness(w, r).ok) ++recheck3;
  }
  rec.check("50 tripartite mixtures accepted", ok3 == 50,
            std::to_string(ok3) + "/50 feasible, worst residual " + fmt(worst3));
  rec.check("tripartite witnesses re-validated by the oracle", recheck3 == 50, std::to_string(recheck3) + "/50");
}

std::vector<CausalConfiguration> three_party_configurations() {
  const std::vector<std::string> names = {"A", "B", "C"};
  std::vector<CausalConfiguration> out;
  out.push_back(CausalConfiguration::parse(names, {}));
  std::vector<std::size_t> perm = {0, 1, 2};
  do {
    const auto& a = names[perm[0]];
    const auto& b = names[perm[1]];
    const auto& c = names[perm[2]];
    out.push_back(CausalConfiguration::parse(names, {a + "<" + b, b + "<" + c, a + "<" + c}));
    out.push_back(CausalConfiguration::parse(names, {a + "<" + b}));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

void criterion_recomposition(Recorder& rec, const AcceptanceConfig& cfg) {
  const Scenario sc{{"A", "B", "C"}, {2, 2, 2}, {2, 2, 2}};
  generators::Rng rng(cfg.seed);
  const auto configs = three_party_configurations();
  double worst = 0;
  std::size_t recompositions = 0, tables_without = 0, disagreements = 0, compatible = 0, total = 0;
  for (int i = 0; i < 100; ++i) {
    const ProbabilityTable t = generators::random_causal_table(sc, rng, i < 50 ? 1 : 2);
    bool any = false;
    for (std::size_t g = 1; g + 1 < 8; ++g) {
      std::vector<std::size_t> given, rest;
      for (std::size_t k = 0; k < 3; ++k) ((g >> k) & 1u ? given : rest).push_back(k);
      if (!correlations::no_signaling_subset(t, rest, given).no_signaling) continue;
      const auto family = correlations::conditional_process(t, given);
      const auto reduced = correlations::reduced_process(t, given);
      const auto back = correlations::recompose(family, reduced, sc);
      for (std::size_t k = 0; k < t.p.size(); ++k) worst = std::max(worst, std::abs(back.p[k] - t.p[k]));
      ++recompositions;
      any = true;
    }
    if (i < 50 && !any) ++tables_without;
    for (const auto& config : configs) {
      const bool lib = correlations::fixed_order_causal_check(t, config).compatible;
      const bool oracle = oracles::brute_force_fixed_order(t, config);
      if (lib != oracle) ++disagreements;
      if (lib) ++compatible;
      ++total;
    }
  }
  rec.check("recomposition identity on 100 tables", worst <= 1e-10 && tables_without == 0 && recompositions > 0,
            std::to_string(recompositions) + " recompositions, max difference " + fmt(worst));
  rec.check("fixed-order check agrees with the brute-force evaluation", disagreements == 0 && compatible > 0 &&
                                                                             compatible < total,
            std::to_string(disagreements) + " disagreements over " + std::to_string(total) + " pairs, " +
                std::to_string(compatible) + " compatible");
}

struct CriterionDef {
  const char* title;
  double limit_seconds;
  std::function<void(Recorder&, const AcceptanceConfig&)> body;
};

const std::vector<CriterionDef>& definitions() {
  static const std::vector<CriterionDef> defs = {
      {"term-type algebra", 1, criterion_term_types},
      {"validity", 5, criterion_validity},
      {"switch reproduction", 10, criterion_switch},
      {"causal bound", 10, criterion_bound},
      {"quantum violation", 20, criterion_violation},
      {"activation", 30, criterion_activation},
      {"polytope soundness and completeness", 30, criterion_polytope},
      {"separability generators", 30, criterion_generators},
      {"classical recomposition", 10, criterion_recomposition},
  };
  return defs;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceConfig& config) {
  if (id < 1 || id > kNumCriteria) throw Error("no acceptance criterion " + std::to_string(id));
  const CriterionDef& def = definitions()[static_cast<std::size_t>(id - 1)];
  CriterionResult r;
  r.id = id;
  r.title = def.title;
  r.limit_seconds = def.limit_seconds;
  Recorder rec(r);
  const auto start = std::chrono::steady_clock::now();
  try {
    def.body(rec, config);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = r.error.empty() && !r.checks.empty() && r.seconds <= r.limit_seconds &&
             std::all_of(r.checks.begin(), r.checks.end(), [](const SubCheck& c) { return c.passed; });
  return r;
}

std::vector<CriterionResult> run_all(const AcceptanceConfig& config) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kNumCriteria; ++id) out.push_back(run_criterion(id, config));
  return out;
}

std::string summary_line(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), " (%.2f s / %g s)", r.seconds, r.limit_seconds);
  return "criterion " + std::to_string(r.id) + (r.passed ? " [PASS] " : " [FAIL] ") + r.title + buf;
}

}  // namespace causality::checks

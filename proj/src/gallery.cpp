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


#include "causality/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "causality/random_processes.hpp"

namespace causality::gallery {

using choi::PartySpec;
using procmat::ProcessMatrix;
using qlinalg::TensorSpace;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  return (a - b).cwiseAbs().maxCoeff();
}

std::vector<PartySpec> ocb_parties() { return {PartySpec{"A", 2, 2}, PartySpec{"B", 2, 2}}; }

// Runs stages in order and stops at the first failure.
class Pipeline {
 public:
  explicit Pipeline(std::string name) { report_.pipeline = std::move(name); }
  bool ok() const { return ok_; }
  void stage(const std::string& name, bool passed, const std::string& detail) {
    if (!ok_) return;
    report_.stages.push_back(StageResult{name, passed, detail});
    if (!passed) {
      ok_ = false;
      report_.verdict = "failed at stage '" + name + "'";
    }
  }
  void metric(const std::string& key, double value) { report_.metrics[key] = value; }
  PipelineReport finish(const std::string& verdict) {
    if (ok_) report_.verdict = verdict;
    return report_;
  }

 private:
  PipelineReport report_;
  bool ok_ = true;
};

std::string validation_detail(const procmat::ValidationReport& v) {
  std::string d = "min eigenvalue " + fmt(v.min_eigenvalue) + ", trace " + fmt(v.trace) + " (expected " +
                  fmt(v.expected_trace) + "), forbidden terms " + std::to_string(v.forbidden_terms.size());
  for (const auto& f : v.failures) d += "; " + f;
  return d;
}

// Conditions the tripartite OCB variant on random Charlie events and tests
// every conditional bipartite matrix.
void charlie_event_battery(Pipeline& p, const ProcessMatrix& w, const PipelineOptions& options) {
  generators::Rng rng(options.seed);
  const PartySpec& charlie = w.parties[w.party_index("C")];
  double worst_offdiag = 0;
  double worst_residual = 0;
  std::size_t feasible = 0;
  bool valid = true;
  for (std::size_t e = 0; e < options.charlie_events; ++e) {
    const choi::CJOperator event = generators::random_cp_event(charlie, rng);
    const procmat::ConditionalResult cond = procmat::condition_on_event(w, "C", event, options.tolerances);
    valid = valid && cond.report.valid;
    ComplexMatrix off = cond.matrix.matrix;
    off.diagonal().setZero();
    worst_offdiag = std::max(worst_offdiag, off.cwiseAbs().maxCoeff());
    const convexsep::FeasibilityReport sep = convexsep::bipartite_causal_sep(cond.matrix, options.dykstra);
    if (sep.status == convexsep::Status::kFeasible) ++feasible;
    worst_residual = std::max(worst_residual, sep.residual);
  }
  p.metric("charlie_events", static_cast<double>(options.charlie_events));
  p.metric("conditional_max_offdiagonal", worst_offdiag);
  p.metric("conditional_max_residual", worst_residual);
  p.metric("conditional_feasible", static_cast<double>(feasible));
  p.stage("conditional matrices valid", valid, std::to_string(options.charlie_events) + " random Charlie events");
  p.stage("conditional matrices diagonal in local z bases", worst_offdiag <= 1e-12,
          "max off-diagonal magnitude " + fmt(worst_offdiag));
  p.stage("conditional matrices causally separable",
          feasible == options.charlie_events && worst_residual <= 1e-6,
          std::to_string(feasible) + "/" + std::to_string(options.charlie_events) + " feasible, max residual " +
              fmt(worst_residual));
}

}  // namespace

ComplexMatrix pauli(char name) {
  ComplexMatrix m(2, 2);
  switch (name) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'x':
      m << 0, 1, 1, 0;
      break;
    case 'y':
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case 'z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw Error(std::string("unknown Pauli '") + name + "'");
  }
  return m;
}

ComplexMatrix pauli_string(const TensorSpace& space, const std::string& ops) {
  if (ops.size() != space.num_slots()) throw Error("Pauli string length does not match the space");
  std::vector<ComplexMatrix> factors;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::size_t d = space.slot(i).dim;
    if (ops[i] == 'I') {
      factors.push_back(qlinalg::identity(d));
    } else {
      if (d != 2) throw Error("Pauli on a slot that is not a qubit");
      factors.push_back(pauli(ops[i]));
    }
  }
  return qlinalg::kron_all(factors);
}

ProcessMatrix ocb_process() {
  const auto parties = ocb_parties();
  const TensorSpace s = procmat::process_space(parties);
  const ComplexMatrix w =
      0.25 * (pauli_string(s, "IIII") + kInvSqrt2 * pauli_string(s, "zIxz") + kInvSqrt2 * pauli_string(s, "IzzI"));
  return procmat::make_process(parties, w);
}

ProcessMatrix ocb_tripartite() {
  std::vector<PartySpec> parties = {PartySpec{"A", 2, 2}, PartySpec{"B", 2, 2}, PartySpec{"C", 1, 2}};
  const TensorSpace s = procmat::process_space(parties);
  const ComplexMatrix w = 0.25 * (pauli_string(s, "IIIIII") + kInvSqrt2 * pauli_string(s, "zIzzIx") +
                                  kInvSqrt2 * pauli_string(s, "IzzIIz"));
  return procmat::make_process(parties, w);
}

ProcessMatrix ocb_extended() {
  const ComplexMatrix rho = 0.5 * choi::maximally_entangled(2, false);
  return procmat::extend_with_ancilla(ocb_tripartite(), rho, {procmat::AncillaSlot{"C", 2}, procmat::AncillaSlot{"B", 2}});
}

ProcessMatrix ocb_conditional_closed_form() {
  std::vector<PartySpec> parties = {PartySpec{"A", 2, 2}, PartySpec{"B", 4, 2}};
  // Bob's input written as the two qubits (B1, B1').
  const TensorSpace split({{"A1", 2}, {"A2", 2}, {"B1", 2}, {"B1'", 2}, {"B2", 2}});
  const ComplexMatrix w = 0.125 * (pauli_string(split, "IIIII") + kInvSqrt2 * pauli_string(split, "zIzxz") +
                                   kInvSqrt2 * pauli_string(split, "IzzzI"));
  return procmat::make_process(parties, w);
}

choi::CJOperator charlie_identity_event() {
  return choi::CJOperator{PartySpec{"C", 2, 2}, choi::maximally_entangled(2, false)};
}

void check_switch_params(const SwitchParams& p) {
  if (p.psi.size() != 2) throw Error("switch input state must be a qubit");
  if (std::abs(p.psi.norm() - 1.0) > 1e-12) throw Error("switch input state must be normalized");
}

ProcessMatrix switch_process(const SwitchParams& params) {
  check_switch_params(params);
  std::vector<PartySpec> parties = {PartySpec{"A", 2, 2}, PartySpec{"B", 2, 2}, PartySpec{"C", 4, 1}};
  ComplexVector v = ComplexVector::Zero(64);
  auto index = [](int a1, int a2, int b1, int b2, int ctrl, int sys) {
    return ((((a1 * 2 + a2) * 2 + b1) * 2 + b2) * 4) + ctrl * 2 + sys;
  };
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      for (int b1 = 0; b1 < 2; ++b1) {
        for (int b2 = 0; b2 < 2; ++b2) {
          for (int sys = 0; sys < 2; ++sys) {
            // Control 0: psi into A, A to B, B to the target.
            if (a2 == b1 && b2 == sys) v(index(a1, a2, b1, b2, 0, sys)) += params.psi(a1);
            // Control 1: psi into B, B to A, A to the target.
            if (b2 == a1 && a2 == sys) v(index(a1, a2, b1, b2, 1, sys)) += params.psi(b1);
          }
        }
      }
    }
  }
  v *= kInvSqrt2;
  return procmat::make_process(parties, v * v.adjoint());
}

ProcessMatrix switch_reduced_closed_form(const SwitchParams& params) {
  check_switch_params(params);
  const ComplexVector& psi = params.psi;
  ComplexMatrix w = ComplexMatrix::Zero(16, 16);
  auto index = [](int a1, int a2, int b1, int b2) { return ((a1 * 2 + a2) * 2 + b1) * 2 + b2; };
  for (int r = 0; r < 16; ++r) {
    const int a1 = (r >> 3) & 1, a2 = (r >> 2) & 1, b1 = (r >> 1) & 1, b2 = r & 1;
    for (int c = 0; c < 16; ++c) {
      const int a1p = (c >> 3) & 1, a2p = (c >> 2) & 1, b1p = (c >> 1) & 1, b2p = c & 1;
      Complex x = 0;
      if (a2 == b1 && a2p == b1p && b2 == b2p) x += psi(a1) * std::conj(psi(a1p));
      if (b2 == a1 && b2p == a1p && a2 == a2p) x += psi(b1) * std::conj(psi(b1p));
      w(index(a1, a2, b1, b2), index(a1p, a2p, b1p, b2p)) = 0.5 * x;
    }
  }
  return procmat::make_process(ocb_parties(), w);
}

polytope::Game ocb_game() {
  polytope::Game g;
  g.scenario = correlations::Scenario{{"A", "B"}, {2, 4}, {2, 2}};
  const std::size_t ns = g.scenario.num_settings();
  const std::size_t no = g.scenario.num_outcomes();
  g.payoff.assign(ns * no, polytope::Rational(0));
  g.setting_distribution.assign(ns, polytope::Rational(1, static_cast<unsigned long>(ns)));
  for (std::size_t s = 0; s < ns; ++s) {
    const auto sd = correlations::unflatten(s, g.scenario.settings);
    const std::size_t a = sd[0];
    const std::size_t b = sd[1] / 2;
    const std::size_t bp = sd[1] % 2;
    for (std::size_t o = 0; o < no; ++o) {
      const auto od = correlations::unflatten(o, g.scenario.outcomes);
      const bool win = bp == 0 ? od[0] == b : od[1] == a;
      if (win) g.payoff[s * no + o] = 1;
    }
  }
  return g;
}

correlations::ProbabilityTable xor_relay_table() {
  const correlations::Scenario sc{{"A", "B", "C"}, {2, 2, 2}, {2, 2, 2}};
  auto t = correlations::zero_table(sc);
  for (std::size_t s = 0; s < sc.num_settings(); ++s) {
    const auto sd = correlations::unflatten(s, sc.settings);
    for (std::size_t o = 0; o < sc.num_outcomes(); ++o) {
      const auto od = correlations::unflatten(o, sc.outcomes);
      if (od[0] == (sd[1] ^ od[2])) t(s, o) = 0.25;
    }
  }
  return t;
}

ProbeResult unitary_commutation_probe(const ComplexMatrix& ua, const ComplexMatrix& ub, const SwitchParams& params) {
  const ProcessMatrix w = switch_process(params);
  const auto unitary_instrument = [](const PartySpec& party, const ComplexMatrix& u) {
    if (u.rows() != 2 || u.cols() != 2) throw Error("probe unitaries must be 2x2");
    if ((u.adjoint() * u - ComplexMatrix::Identity(2, 2)).norm() > 1e-10) throw Error("probe operator is not unitary");
    choi::Instrument inst;
    inst.party = party;
    inst.outcomes.push_back(choi::choi_from_kraus(party, {u}).matrix);
    return inst;
  };
  ComplexVector plus(2), minus(2);
  plus << kInvSqrt2, kInvSqrt2;
  minus << kInvSqrt2, -kInvSqrt2;
  choi::Instrument charlie;
  charlie.party = w.parties[2];
  for (const ComplexVector* c : {&plus, &minus}) {
    const ComplexMatrix effect = qlinalg::kron(choi::projector(*c), qlinalg::identity(2));
    charlie.outcomes.push_back(effect.transpose());
  }
  const auto dist = procmat::probabilities(
      w, {unitary_instrument(w.parties[0], ua), unitary_instrument(w.parties[1], ub), charlie});
  return ProbeResult{dist.p[0], dist.p[1]};
}

bool PipelineReport::passed() const {
  if (stages.empty()) return false;
  return std::all_of(stages.begin(), stages.end(), [](const StageResult& s) { return s.passed; });
}

choi::Instrument adaptive_bob_instrument(const choi::Instrument& original) {
  const PartySpec& party = original.party;
  if (party.d_in != 2) throw Error("adaptive strategy expects a qubit-input instrument");
  const PartySpec extended{party.name, 2 * party.d_in, party.d_out};
  const ComplexMatrix y_in = qlinalg::kron(pauli('y'), qlinalg::identity(party.d_out));
  choi::Instrument out;
  out.party = extended;
  for (const auto& m : original.outcomes) {
    const ComplexMatrix flipped = y_in * m * y_in;
    out.outcomes.push_back(qlinalg::kron(choi::basis_projector(2, 0), m) +
                           qlinalg::kron(choi::basis_projector(2, 1), flipped));
  }
  return out;
}

PipelineReport ocb_pipeline(const PipelineOptions& options) {
  Pipeline p("ocb");
  const ProcessMatrix w = ocb_process();
  const auto v = procmat::validate(w, options.tolerances);
  p.stage("validate", v.valid, validation_detail(v));
  const polytope::Game game = ocb_game();
  const auto bound = polytope::causal_bound(game);
  const bool three_quarters = bound.exact_value && *bound.exact_value == polytope::Rational(3, 4);
  p.metric("causal_bound", bound.value);
  p.stage("exact causal bound", three_quarters, "bound " + bound.to_string());
  if (!p.ok()) return p.finish("");
  const auto seesaw = polytope::optimize_quantum_value(w, game, options.seesaw);
  p.metric("quantum_value", seesaw.value);
  p.metric("seesaw_sweeps", static_cast<double>(seesaw.sweeps));
  p.stage("quantum value above the causal bound", seesaw.value >= 0.85, "seesaw value " + fmt(seesaw.value));
  if (!p.ok()) return p.finish("");
  const auto flt = polytope::causal_membership(seesaw.table);
  polytope::MembershipOptions exact_opts;
  exact_opts.exact = true;
  const auto ex = polytope::causal_membership(seesaw.table, exact_opts);
  p.metric("membership_margin", flt.margin);
  p.stage("table rejected by the causal polytope", !flt.causal && flt.margin >= 1e-4 && !ex.causal,
          "float margin " + fmt(flt.margin) + ", exact status " + ex.status());
  return p.finish("non-causal: violates the causal bound 3/4");
}

PipelineReport ocb_tripartite_pipeline(const PipelineOptions& options) {
  Pipeline p("ocb-tripartite");
  const ProcessMatrix w = ocb_tripartite();
  const auto v = procmat::validate(w, options.tolerances);
  p.stage("validate", v.valid, validation_detail(v));
  const auto sig = procmat::no_signaling_matrix(w, {"A", "B"}, {"C"}, options.tolerances);
  p.stage("no signaling from A and B to C", sig.no_signaling,
          std::to_string(sig.offending.size()) + " offending term types");
  if (!p.ok()) return p.finish("");
  charlie_event_battery(p, w, options);
  return p.finish("causally separable evidence passed: every Charlie event leaves a causally separable bipartite "
                  "matrix");
}

PipelineReport switch_nonseparability_pipeline(const SwitchParams& params, const PipelineOptions& options) {
  Pipeline p("switch");
  const ProcessMatrix w = switch_process(params);
  const auto v = procmat::validate(w, options.tolerances);
  p.stage("validate", v.valid, validation_detail(v));
  const auto cert = convexsep::rank1_nonseparability_certificate(w, options.tolerances);
  p.stage("rank-one certificate", cert.has_value(),
          cert ? cert->reason : std::string("certificate conditions not met"));
  const auto names = w.party_names();
  std::string signaled;
  bool all_signaled = true;
  for (const auto& x : names) {
    std::vector<std::string> rest;
    for (const auto& o : names) {
      if (o != x) rest.push_back(o);
    }
    const bool none = procmat::no_signaling_matrix(w, rest, {x}, options.tolerances).no_signaling;
    all_signaled = all_signaled && !none;
    signaled += (signaled.empty() ? "" : ", ") + x + (none ? " (none)" : " (present)");
  }
  p.stage("signaling to every party", all_signaled, "signaling from the others to " + signaled);
  if (!p.ok()) return p.finish("");
  const ProcessMatrix reduced = procmat::reduced_matrix(w, {"A", "B"}, options.tolerances);
  const double diff = max_abs_diff(reduced.matrix, switch_reduced_closed_form(params).matrix);
  p.metric("reduced_max_abs_diff", diff);
  p.stage("reduced matrix matches the fixed-order mixture", diff <= 1e-12, "max entry difference " + fmt(diff));
  const auto sep = convexsep::bipartite_causal_sep(reduced, options.dykstra);
  p.metric("reduced_residual", sep.residual);
  p.metric("reduced_iterations", static_cast<double>(sep.iterations));
  p.stage("reduced matrix causally separable", sep.status == convexsep::Status::kFeasible && sep.residual <= 1e-7,
          std::string(convexsep::to_string(sep.status)) + ", residual " + fmt(sep.residual));
  if (!p.ok()) return p.finish("");
  const ProbeResult commuting = unitary_commutation_probe(pauli('z'), pauli('z'), params);
  const ProbeResult anticommuting = unitary_commutation_probe(pauli('x'), pauli('z'), params);
  p.metric("probe_commuting_p_plus", commuting.p_plus);
  p.metric("probe_anticommuting_p_minus", anticommuting.p_minus);
  p.stage("commutation probe", std::abs(commuting.p_plus - 1) <= 1e-10 && std::abs(anticommuting.p_minus - 1) <= 1e-10,
          "commuting pair p(+) " + fmt(commuting.p_plus) + ", anticommuting pair p(-) " + fmt(anticommuting.p_minus));
  return p.finish("causal, not causally separable");
}

PipelineReport activation_pipeline(const PipelineOptions& options) {
  Pipeline p("activation");
  const ProcessMatrix pre = ocb_tripartite();
  const auto v = procmat::validate(pre, options.tolerances);
  p.stage("validate tripartite matrix", v.valid, validation_detail(v));
  if (!p.ok()) return p.finish("");
  charlie_event_battery(p, pre, options);
  if (!p.ok()) return p.finish("");
  const ProcessMatrix ext = ocb_extended();
  const auto ve = procmat::validate(ext, options.tolerances);
  p.stage("validate extended matrix", ve.valid, validation_detail(ve));
  const auto cond = procmat::condition_on_event(ext, "C", charlie_identity_event(), options.tolerances);
  const double diff = max_abs_diff(cond.matrix.matrix, ocb_conditional_closed_form().matrix);
  p.metric("event_probability", cond.probability);
  p.metric("conditional_max_abs_diff", diff);
  p.stage("conditional matrix matches the closed form", cond.report.valid && diff <= 1e-12,
          "event probability " + fmt(cond.probability) + ", max entry difference " + fmt(diff));
  if (!p.ok()) return p.finish("");
  const polytope::Game game = ocb_game();
  const ProcessMatrix ocb = ocb_process();
  const auto seesaw = polytope::optimize_quantum_value(ocb, game, options.seesaw);
  polytope::Strategy adaptive = seesaw.strategy;
  for (auto& inst : adaptive[1]) inst = adaptive_bob_instrument(inst);
  const auto direct = polytope::quantum_table(ocb, game.scenario, seesaw.strategy);
  const auto simulated = polytope::quantum_table(cond.matrix, game.scenario, adaptive);
  double table_diff = 0;
  for (std::size_t i = 0; i < direct.p.size(); ++i) table_diff = std::max(table_diff, std::abs(direct.p[i] - simulated.p[i]));
  p.metric("adaptive_table_max_abs_diff", table_diff);
  p.metric("quantum_value", polytope::game_value(game, simulated));
  p.stage("adaptive strategy reproduces the OCB table", table_diff <= 1e-9, "max table difference " + fmt(table_diff));
  const auto m = polytope::causal_membership(simulated);
  p.metric("membership_margin", m.margin);
  p.stage("extended table rejected by the causal polytope", !m.causal, "margin " + fmt(m.margin));
  return p.finish("activation demonstrated: causally separable before extension, non-causal after");
}

}  // namespace causality::gallery

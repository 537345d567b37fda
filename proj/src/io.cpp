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


#include "causality/io.hpp"

#include <fstream>
#include <sstream>

namespace causality::io {

namespace {

const Json& require(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return doc.at(key);
}

std::size_t as_size(const Json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw SchemaError(std::string("field '") + what + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::size_t> size_list(const Json& v, const char* what) {
  if (!v.is_array()) throw SchemaError(std::string("field '") + what + "' must be an array");
  std::vector<std::size_t> out;
  for (const auto& x : v) out.push_back(as_size(x, what));
  return out;
}

double as_double(const Json& v, const char* what) {
  if (!v.is_number()) throw SchemaError(std::string("field '") + what + "' must be a number");
  return v.get<double>();
}

// Writes values in nested arrays following `radices` (most significant first).
template <typename F>
Json nest(const std::vector<std::size_t>& radices, std::size_t level, std::size_t base, F value) {
  if (level == radices.size()) return value(base);
  Json arr = Json::array();
  for (std::size_t i = 0; i < radices[level]; ++i) arr.push_back(nest(radices, level + 1, base * radices[level] + i, value));
  return arr;
}

template <typename F>
void unnest(const Json& v, const std::vector<std::size_t>& radices, std::size_t level, std::size_t base, F sink,
            const char* what) {
  if (level == radices.size()) {
    sink(base, v);
    return;
  }
  if (!v.is_array() || v.size() != radices[level]) {
    throw SchemaError(std::string("field '") + what + "' has the wrong nesting shape");
  }
  for (std::size_t i = 0; i < radices[level]; ++i) unnest(v[i], radices, level + 1, base * radices[level] + i, sink, what);
}

std::vector<std::size_t> concat(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Json present_terms(const std::vector<procmat::PresentTerm>& terms, const std::vector<choi::PartySpec>& parties) {
  Json arr = Json::array();
  for (const auto& t : terms) arr.push_back({{"type", t.type.label(parties)}, {"max_abs_coefficient", t.max_abs_coefficient}});
  return arr;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

Json matrix_to_json(const ComplexMatrix& m, const qlinalg::TensorSpace& space) {
  Json slots = Json::array();
  for (const auto& s : space.slots()) slots.push_back({{"label", s.label}, {"dim", s.dim}});
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  }
  return Json{{"slots", slots}, {"entries", entries}};
}

LabeledMatrix matrix_from_json(const Json& doc) {
  const Json& slots = require(doc, "slots");
  if (!slots.is_array()) throw SchemaError("field 'slots' must be an array");
  std::vector<qlinalg::Slot> list;
  for (const auto& s : slots) {
    const Json& label = require(s, "label");
    if (!label.is_string()) throw SchemaError("slot label must be a string");
    const std::size_t dim = as_size(require(s, "dim"), "dim");
    if (dim == 0) throw SchemaError("slot dimension must be positive");
    list.push_back(qlinalg::Slot{label.get<std::string>(), dim});
  }
  LabeledMatrix out;
  try {
    out.space = qlinalg::TensorSpace(list);
  } catch (const Error& e) {
    throw SchemaError(e.what());
  }
  const std::size_t d = out.space.dim();
  const Json& entries = require(doc, "entries");
  if (!entries.is_array() || entries.size() != d * d) {
    throw SchemaError("field 'entries' must hold " + std::to_string(d * d) + " [re, im] pairs");
  }
  out.matrix.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d * d; ++i) {
    const Json& e = entries[i];
    if (!e.is_array() || e.size() != 2) throw SchemaError("matrix entries must be [re, im] pairs");
    out.matrix(static_cast<Eigen::Index>(i / d), static_cast<Eigen::Index>(i % d)) =
        Complex(as_double(e[0], "entries"), as_double(e[1], "entries"));
  }
  return out;
}

Json party_to_json(const choi::PartySpec& p) { return Json{{"name", p.name}, {"d_in", p.d_in}, {"d_out", p.d_out}}; }

choi::PartySpec party_from_json(const Json& doc) {
  const Json& name = require(doc, "name");
  if (!name.is_string()) throw SchemaError("party name must be a string");
  choi::PartySpec p{name.get<std::string>(), as_size(require(doc, "d_in"), "d_in"), as_size(require(doc, "d_out"), "d_out")};
  try {
    choi::check_party(p);
  } catch (const Error& e) {
    throw SchemaError(e.what());
  }
  return p;
}

Json process_to_json(const procmat::ProcessMatrix& w) {
  Json doc = matrix_to_json(w.matrix, w.space());
  Json parties = Json::array();
  for (const auto& p : w.parties) parties.push_back(party_to_json(p));
  Json out{{"parties", parties}};
  out.update(doc);
  return out;
}

procmat::ProcessMatrix process_from_json(const Json& doc) {
  const Json& parties_doc = require(doc, "parties");
  if (!parties_doc.is_array() || parties_doc.empty()) throw SchemaError("field 'parties' must be a non-empty array");
  std::vector<choi::PartySpec> parties;
  for (const auto& p : parties_doc) parties.push_back(party_from_json(p));
  const LabeledMatrix m = matrix_from_json(doc);
  const qlinalg::TensorSpace expected = procmat::process_space(parties);
  if (!(m.space == expected)) throw SchemaError("matrix slots do not match the parties' (input, output) slots");
  try {
    return procmat::make_process(std::move(parties), m.matrix);
  } catch (const Error& e) {
    throw SchemaError(e.what());
  }
}

Json instrument_to_json(const choi::Instrument& inst) {
  Json outcomes = Json::array();
  const qlinalg::TensorSpace space = inst.party.space();
  for (const auto& m : inst.outcomes) outcomes.push_back(matrix_to_json(m, space));
  return Json{{"party", party_to_json(inst.party)}, {"outcomes", outcomes}};
}

choi::Instrument instrument_from_json(const Json& doc) {
  choi::Instrument inst;
  inst.party = party_from_json(require(doc, "party"));
  const Json& outcomes = require(doc, "outcomes");
  if (!outcomes.is_array() || outcomes.empty()) throw SchemaError("field 'outcomes' must be a non-empty array");
  const qlinalg::TensorSpace space = inst.party.space();
  for (const auto& o : outcomes) {
    const LabeledMatrix m = matrix_from_json(o);
    if (!(m.space == space)) throw SchemaError("instrument outcome slots do not match the party");
    inst.outcomes.push_back(m.matrix);
  }
  return inst;
}

Json strategy_to_json(const polytope::Strategy& s) {
  Json parties = Json::array();
  for (const auto& per_party : s) {
    Json list = Json::array();
    for (const auto& inst : per_party) list.push_back(instrument_to_json(inst));
    parties.push_back(list);
  }
  return Json{{"parties", parties}};
}

polytope::Strategy strategy_from_json(const Json& doc) {
  const Json& parties = require(doc, "parties");
  if (!parties.is_array() || parties.empty()) throw SchemaError("field 'parties' must be a non-empty array");
  polytope::Strategy s;
  for (const auto& per_party : parties) {
    if (!per_party.is_array() || per_party.empty()) throw SchemaError("each party needs a non-empty instrument list");
    std::vector<choi::Instrument> list;
    for (const auto& inst : per_party) list.push_back(instrument_from_json(inst));
    s.push_back(std::move(list));
  }
  return s;
}

Json scenario_to_json(const correlations::Scenario& s) {
  return Json{{"parties", s.parties}, {"settings", s.settings}, {"outcomes", s.outcomes}};
}

correlations::Scenario scenario_from_json(const Json& doc) {
  correlations::Scenario s;
  const Json& parties = require(doc, "parties");
  if (!parties.is_array()) throw SchemaError("field 'parties' must be an array");
  for (const auto& p : parties) {
    if (!p.is_string()) throw SchemaError("party names must be strings");
    s.parties.push_back(p.get<std::string>());
  }
  s.settings = size_list(require(doc, "settings"), "settings");
  s.outcomes = size_list(require(doc, "outcomes"), "outcomes");
  try {
    correlations::check_scenario(s);
  } catch (const Error& e) {
    throw SchemaError(e.what());
  }
  return s;
}

Json table_to_json(const correlations::ProbabilityTable& t) {
  const auto radices = concat(t.scenario.settings, t.scenario.outcomes);
  return Json{{"scenario", scenario_to_json(t.scenario)},
              {"p", nest(radices, 0, 0, [&](std::size_t i) { return Json(t.p[i]); })}};
}

correlations::ProbabilityTable table_from_json(const Json& doc) {
  correlations::ProbabilityTable t = correlations::zero_table(scenario_from_json(require(doc, "scenario")));
  const auto radices = concat(t.scenario.settings, t.scenario.outcomes);
  unnest(require(doc, "p"), radices, 0, 0, [&](std::size_t i, const Json& v) { t.p[i] = as_double(v, "p"); }, "p");
  return t;
}

lp::Rational rational_from_json(const Json& v) {
  if (v.is_number_integer()) return lp::Rational(v.get<long>());
  if (v.is_number()) return lp::to_rational(v.get<double>());
  if (v.is_string()) {
    try {
      lp::Rational q(v.get<std::string>());
      if (q.get_den() == 0) throw SchemaError("zero denominator");
      q.canonicalize();
      return q;
    } catch (const std::invalid_argument&) {
      throw SchemaError("'" + v.get<std::string>() + "' is not a rational number");
    }
  }
  throw SchemaError("expected a number or a \"p/q\" string");
}

Json rational_to_json(const lp::Rational& q) { return Json(q.get_str()); }

Json game_to_json(const polytope::Game& g) {
  const auto radices = concat(g.scenario.settings, g.scenario.outcomes);
  return Json{{"scenario", scenario_to_json(g.scenario)},
              {"payoff", nest(radices, 0, 0, [&](std::size_t i) { return rational_to_json(g.payoff[i]); })},
              {"setting_distribution",
               nest(g.scenario.settings, 0, 0, [&](std::size_t i) { return rational_to_json(g.setting_distribution[i]); })}};
}

polytope::Game game_from_json(const Json& doc) {
  polytope::Game g;
  g.scenario = scenario_from_json(require(doc, "scenario"));
  const std::size_t ns = g.scenario.num_settings();
  const std::size_t no = g.scenario.num_outcomes();
  g.payoff.assign(ns * no, lp::Rational(0));
  const auto radices = concat(g.scenario.settings, g.scenario.outcomes);
  unnest(require(doc, "payoff"), radices, 0, 0, [&](std::size_t i, const Json& v) { g.payoff[i] = rational_from_json(v); },
         "payoff");
  if (doc.contains("setting_distribution")) {
    g.setting_distribution.assign(ns, lp::Rational(0));
    unnest(doc.at("setting_distribution"), g.scenario.settings, 0, 0,
           [&](std::size_t i, const Json& v) { g.setting_distribution[i] = rational_from_json(v); },
           "setting_distribution");
  } else {
    g.setting_distribution.assign(ns, lp::Rational(1, static_cast<unsigned long>(ns)));
  }
  try {
    polytope::check_game(g);
  } catch (const Error& e) {
    throw SchemaError(e.what());
  }
  return g;
}

Json validation_report_to_json(const procmat::ValidationReport& r, const std::vector<choi::PartySpec>& parties) {
  return Json{{"valid", r.valid},
              {"hermiticity_error", r.hermiticity_error},
              {"min_eigenvalue", r.min_eigenvalue},
              {"trace", r.trace},
              {"expected_trace", r.expected_trace},
              {"identity_coefficient", r.identity_coefficient},
              {"expected_identity_coefficient", r.expected_identity_coefficient},
              {"forbidden_terms", present_terms(r.forbidden_terms, parties)},
              {"failures", r.failures}};
}

Json signaling_report_to_json(const procmat::SignalingReport& r, const std::vector<choi::PartySpec>& parties) {
  return Json{{"no_signaling", r.no_signaling}, {"offending", present_terms(r.offending, parties)}};
}

Json membership_report_to_json(const polytope::MembershipReport& r, const correlations::Scenario& s) {
  Json doc{{"status", r.status()}, {"exact", r.exact}, {"margin", r.margin}, {"lp_iterations", r.lp_iterations}};
  if (r.exact) doc["exact_margin"] = r.exact_margin;
  if (!r.causal) doc["violated_margin"] = r.margin;
  if (r.witness) {
    Json branches = Json::array();
    const auto radices = concat(s.settings, s.outcomes);
    for (std::size_t b = 0; b < r.witness->branches.size(); ++b) {
      const auto& tab = r.witness->tables[b];
      branches.push_back({{"branch", polytope::branch_label(r.witness->branches[b], s)},
                          {"table", nest(radices, 0, 0, [&](std::size_t i) { return Json(tab[i]); })}});
    }
    doc["witness"] = branches;
  }
  return doc;
}

Json bound_to_json(const polytope::BoundResult& r) {
  Json doc{{"bound", r.to_string()}, {"value", r.value}};
  doc["table"] = table_to_json(r.table);
  return doc;
}

Json feasibility_report_to_json(const convexsep::FeasibilityReport& r) {
  Json doc{{"status", convexsep::to_string(r.status)}, {"residual", r.residual}, {"iterations", r.iterations}};
  if (!r.note.empty()) doc["note"] = r.note;
  Json blocks = Json::array();
  for (const auto& b : r.blocks) {
    Json jb{{"name", b.name}, {"identity_slots", b.identity_labels}};
    jb["matrix"] = matrix_to_json(b.matrix, b.space);
    blocks.push_back(jb);
  }
  doc["blocks"] = blocks;
  if (r.certificate) {
    doc["certificate"] = Json{{"kind", r.certificate->kind},
                              {"reason", r.certificate->reason},
                              {"largest_eigenvalue", r.certificate->largest_eigenvalue},
                              {"second_eigenvalue", r.certificate->second_eigenvalue},
                              {"signaled_parties", r.certificate->signaled_parties}};
  }
  doc["residual_log"] = r.residual_log;
  return doc;
}

Json pipeline_report_to_json(const gallery::PipelineReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages) stages.push_back({{"stage", s.name}, {"passed", s.passed}, {"detail", s.detail}});
  Json metrics = Json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  return Json{{"pipeline", r.pipeline},
              {"passed", r.passed()},
              {"stages", stages},
              {"metrics", metrics},
              {"verdict", r.verdict}};
}

}  // namespace causality::io

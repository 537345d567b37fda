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


#include "causality/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "causality/convexsep.hpp"
#include "causality/gallery.hpp"
#include "causality/io.hpp"
#include "causality/polytope.hpp"
#include "causality/procmat.hpp"

namespace causality::cli {

using io::Json;

namespace {

struct RunConfig {
  Tolerances tolerances = default_tolerances();
  convexsep::DykstraOptions dykstra;
  polytope::SeesawConfig seesaw;
  std::string format = "json";
  std::uint64_t seed = 20260101;
};

// Flags shared by every subcommand.
struct CommonFlags {
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_hermiticity, tol_psd, tol_coefficient, tol_trace, tol_cptp, tol_probability, tol_marginal;
  std::optional<std::size_t> max_iterations, sweeps, restarts;
  std::optional<double> residual_tol;
};

void add_common(CLI::App& app, CommonFlags& f) {
  app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", f.seed, "Random seed (overrides CAUSALITY_KIT_SEED)");
  app.add_option("--tol-hermiticity", f.tol_hermiticity, "Hermiticity tolerance");
  app.add_option("--tol-psd", f.tol_psd, "Magnitude of the most negative accepted eigenvalue");
  app.add_option("--tol-coefficient", f.tol_coefficient, "Threshold below which a coefficient counts as zero");
  app.add_option("--tol-trace", f.tol_trace, "Trace tolerance");
  app.add_option("--tol-cptp", f.tol_cptp, "CPTP tolerance");
  app.add_option("--tol-probability", f.tol_probability, "Probability normalization tolerance");
  app.add_option("--tol-marginal", f.tol_marginal, "Marginal independence tolerance");
  app.add_option("--max-iterations", f.max_iterations, "Projection iteration budget");
  app.add_option("--residual-tol", f.residual_tol, "Projection residual threshold");
  app.add_option("--sweeps", f.sweeps, "Seesaw sweep budget");
  app.add_option("--restarts", f.restarts, "Seesaw restarts");
}

RunConfig make_config(const CommonFlags& f) {
  RunConfig c;
  c.format = f.format;
  if (const char* env = std::getenv("CAUSALITY_KIT_SEED"); env != nullptr && *env != '\0') {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("CAUSALITY_KIT_SEED is not an unsigned integer: ") + env);
    }
  }
  if (f.seed) c.seed = *f.seed;
  c.seesaw.seed = c.seed;
  Tolerances& t = c.tolerances;
  if (f.tol_hermiticity) t.hermiticity = *f.tol_hermiticity;
  if (f.tol_psd) t.psd_min_eigenvalue = -std::abs(*f.tol_psd);
  if (f.tol_coefficient) t.coefficient_zero = *f.tol_coefficient;
  if (f.tol_trace) t.trace = *f.tol_trace;
  if (f.tol_cptp) t.cptp = *f.tol_cptp;
  if (f.tol_probability) t.probability_sum = *f.tol_probability;
  if (f.tol_marginal) t.marginal = *f.tol_marginal;
  if (f.max_iterations) c.dykstra.max_iterations = *f.max_iterations;
  if (f.residual_tol) c.dykstra.residual_tolerance = *f.residual_tol;
  if (f.sweeps) c.seesaw.max_sweeps = *f.sweeps;
  if (f.restarts) c.seesaw.restarts = *f.restarts;
  return c;
}

void render_text(const Json& v, std::ostream& out, const std::string& indent) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (x.is_structured()) {
        out << indent << k << ":\n";
        render_text(x, out, indent + "  ");
      } else {
        out << indent << k << ": " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
      }
    }
  } else if (v.is_array()) {
    const bool flat = std::none_of(v.begin(), v.end(), [](const Json& x) { return x.is_structured(); });
    if (flat) {
      out << indent << v.dump() << "\n";
      return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      out << indent << "- [" << i << "]\n";
      render_text(v[i], out, indent + "  ");
    }
  } else {
    out << indent << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

void emit(const Json& doc, const RunConfig& c, std::ostream& out) {
  if (c.format == "text") {
    render_text(doc, out, "");
  } else {
    out << doc.dump(2) << "\n";
  }
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int exit_for(convexsep::Status s) {
  switch (s) {
    case convexsep::Status::kFeasible:
      return kExitOk;
    case convexsep::Status::kInconclusive:
      return kExitInconclusive;
    case convexsep::Status::kCertifiedInfeasible:
      return kExitRejected;
  }
  return kExitInconclusive;
}

using Handler = std::function<int(const RunConfig&, std::ostream&)>;

struct Command {
  std::string help;
  // Registers options on `app` and returns the handler that runs after parsing.
  std::function<Handler(CLI::App&)> setup;
};

std::vector<std::string> complement_of(const std::vector<std::string>& all, const std::vector<std::string>& from) {
  std::vector<std::string> out;
  for (const auto& n : all) {
    if (std::find(from.begin(), from.end(), n) == from.end()) out.push_back(n);
  }
  return out;
}

std::map<std::string, Command> commands() {
  std::map<std::string, Command> m;

  m["validate"] = {"Check a process matrix (positivity, trace, term types)", [](CLI::App& app) {
                     auto path = std::make_shared<std::string>();
                     app.add_option("matrix", *path, "Process-matrix JSON")->required();
                     return Handler([path](const RunConfig& c, std::ostream& out) {
                       const auto w = io::process_from_json(io::read_json_file(*path));
                       const auto r = procmat::validate(w, c.tolerances);
                       emit(io::validation_report_to_json(r, w.parties), c, out);
                       return r.valid ? kExitOk : kExitValidation;
                     });
                   }};

  m["signaling"] = {"Test no-signaling between complementary party subsets (matrix or table)", [](CLI::App& app) {
                      auto path = std::make_shared<std::string>();
                      auto from = std::make_shared<std::string>();
                      auto to = std::make_shared<std::string>();
                      app.add_option("input", *path, "Process-matrix or table JSON")->required();
                      app.add_option("--from", *from, "Comma-separated sending parties")->required();
                      app.add_option("--to", *to, "Comma-separated receiving parties (default: the rest)");
                      return Handler([path, from, to](const RunConfig& c, std::ostream& out) {
                        const Json doc = io::read_json_file(*path);
                        const auto senders = split_names(*from);
                        if (doc.contains("scenario")) {
                          const auto t = io::table_from_json(doc);
                          const auto receivers = to->empty() ? complement_of(t.scenario.parties, senders) : split_names(*to);
                          const auto r = correlations::no_signaling_subset(t, senders, receivers, c.tolerances);
                          emit(Json{{"from", senders}, {"to", receivers}, {"no_signaling", r.no_signaling},
                                    {"max_violation", r.max_violation}},
                               c, out);
                          return r.no_signaling ? kExitOk : kExitRejected;
                        }
                        const auto w = io::process_from_json(doc);
                        const auto receivers = to->empty() ? complement_of(w.party_names(), senders) : split_names(*to);
                        const auto r = procmat::no_signaling_matrix(w, senders, receivers, c.tolerances);
                        Json j{{"from", senders}, {"to", receivers}};
                        j.update(io::signaling_report_to_json(r, w.parties));
                        emit(j, c, out);
                        return r.no_signaling ? kExitOk : kExitRejected;
                      });
                    }};

  m["probe"] = {"Probability table of a process matrix under per-setting instruments", [](CLI::App& app) {
                  auto wpath = std::make_shared<std::string>();
                  auto spath = std::make_shared<std::string>();
                  app.add_option("matrix", *wpath, "Process-matrix JSON")->required();
                  app.add_option("strategy", *spath, "Strategy JSON: {\"parties\": [[instrument...]...]}")->required();
                  return Handler([wpath, spath](const RunConfig& c, std::ostream& out) {
                    const auto w = io::process_from_json(io::read_json_file(*wpath));
                    const auto s = io::strategy_from_json(io::read_json_file(*spath));
                    if (s.size() != w.parties.size()) throw io::SchemaError("strategy must list instruments for every party");
                    correlations::Scenario sc;
                    sc.parties = w.party_names();
                    for (const auto& per_party : s) {
                      sc.settings.push_back(per_party.size());
                      sc.outcomes.push_back(per_party.front().size());
                    }
                    emit(io::table_to_json(polytope::quantum_table(w, sc, s)), c, out);
                    return kExitOk;
                  });
                }};

  m["causal-test"] = {"Membership of a table in the causal polytope", [](CLI::App& app) {
                        auto path = std::make_shared<std::string>();
                        auto exact = std::make_shared<bool>(false);
                        app.add_option("table", *path, "Table JSON")->required();
                        app.add_flag("--exact", *exact, "Exact rational arithmetic");
                        return Handler([path, exact](const RunConfig& c, std::ostream& out) {
                          const auto t = io::table_from_json(io::read_json_file(*path));
                          polytope::MembershipOptions o;
                          o.exact = *exact;
                          const auto r = polytope::causal_membership(t, o);
                          emit(io::membership_report_to_json(r, t.scenario), c, out);
                          return r.causal ? kExitOk : kExitRejected;
                        });
                      }};

  m["causal-bound"] = {"Maximum game value over the causal polytope", [](CLI::App& app) {
                         auto path = std::make_shared<std::string>();
                         auto exact = std::make_shared<bool>(false);
                         app.add_option("game", *path, "Game JSON")->required();
                         app.add_flag("--exact", *exact, "Exact rational arithmetic");
                         return Handler([path, exact](const RunConfig& c, std::ostream& out) {
                           const auto g = io::game_from_json(io::read_json_file(*path));
                           polytope::BoundOptions o;
                           o.exact = *exact;
                           const auto r = polytope::causal_bound(g, o);
                           emit(Json{{"bound", r.to_string()}}, c, out);
                           return kExitOk;
                         });
                       }};

  m["sep-test"] = {"Bipartite causal separability (equivalently extensible causal separability)", [](CLI::App& app) {
                     auto path = std::make_shared<std::string>();
                     app.add_option("matrix", *path, "Bipartite process-matrix JSON")->required();
                     return Handler([path](const RunConfig& c, std::ostream& out) {
                       const auto w = io::process_from_json(io::read_json_file(*path));
                       const auto r = convexsep::bipartite_causal_sep(w, c.dykstra);
                       Json j = io::feasibility_report_to_json(r);
                       j["label"] = r.status == convexsep::Status::kFeasible
                                        ? "causally separable (equivalently extensibly causally separable)"
                                        : "not shown causally separable";
                       emit(j, c, out);
                       return exit_for(r.status);
                     });
                   }};

  m["ecs-test"] = {"Tripartite extensible causal separability", [](CLI::App& app) {
                     auto path = std::make_shared<std::string>();
                     auto first = std::make_shared<std::string>();
                     auto no_cert = std::make_shared<bool>(false);
                     app.add_option("matrix", *path, "Tripartite process-matrix JSON")->required();
                     app.add_option("--first", *first, "Restrict to components where this party acts first");
                     app.add_flag("--no-certificate", *no_cert, "Skip the rank-one certificate");
                     return Handler([path, first, no_cert](const RunConfig& c, std::ostream& out) {
                       const auto w = io::process_from_json(io::read_json_file(*path));
                       convexsep::FeasibilityReport r;
                       if (!first->empty()) {
                         r = convexsep::fixed_first_ecs(w, *first, c.dykstra, c.tolerances);
                       } else {
                         convexsep::EcsOptions o;
                         o.dykstra = c.dykstra;
                         o.use_certificate = !*no_cert;
                         r = convexsep::tripartite_ecs(w, o, c.tolerances);
                       }
                       emit(io::feasibility_report_to_json(r), c, out);
                       return exit_for(r.status);
                     });
                   }};

  m["reproduce"] = {"Run a reproduction pipeline: ocb, ocb-tripartite, switch or activation", [](CLI::App& app) {
                      auto name = std::make_shared<std::string>();
                      auto emit_path = std::make_shared<std::string>();
                      app.add_option("pipeline", *name, "Pipeline name")
                          ->required()
                          ->check(CLI::IsMember({"ocb", "ocb-tripartite", "switch", "activation"}));
                      app.add_option("--emit-matrix", *emit_path, "Write the constructed process matrix here");
                      return Handler([name, emit_path](const RunConfig& c, std::ostream& out) {
                        gallery::PipelineOptions o;
                        o.seed = c.seed;
                        o.seesaw = c.seesaw;
                        o.dykstra = c.dykstra;
                        o.tolerances = c.tolerances;
                        gallery::PipelineReport r;
                        procmat::ProcessMatrix w;
                        if (*name == "ocb") {
                          r = gallery::ocb_pipeline(o);
                          w = gallery::ocb_process();
                        } else if (*name == "ocb-tripartite") {
                          r = gallery::ocb_tripartite_pipeline(o);
                          w = gallery::ocb_tripartite();
                        } else if (*name == "switch") {
                          r = gallery::switch_nonseparability_pipeline({}, o);
                          w = gallery::switch_process();
                        } else {
                          r = gallery::activation_pipeline(o);
                          w = gallery::ocb_extended();
                        }
                        if (!emit_path->empty()) io::write_json_file(*emit_path, io::process_to_json(w));
                        emit(io::pipeline_report_to_json(r), c, out);
                        return r.passed() ? kExitOk : kExitValidation;
                      });
                    }};

  m["suite"] = {"Run the acceptance criteria", [](CLI::App& app) {
                  auto only = std::make_shared<int>(0);
                  app.add_option("--criterion", *only, "Run a single criterion (1-9)")
                      ->check(CLI::Range(1, checks::kNumCriteria));
                  return Handler([only](const RunConfig& c, std::ostream& out) {
                    checks::AcceptanceConfig ac;
                    ac.seed = c.seed;
                    std::vector<checks::CriterionResult> results;
                    if (*only != 0) {
                      results.push_back(checks::run_criterion(*only, ac));
                    } else {
                      results = checks::run_all(ac);
                    }
                    Json arr = Json::array();
                    bool all = true;
                    for (const auto& r : results) {
                      all = all && r.passed;
                      Json sub = Json::array();
                      for (const auto& s : r.checks) sub.push_back({{"check", s.name}, {"passed", s.passed}, {"detail", s.detail}});
                      Json j{{"criterion", r.id}, {"title", r.title}, {"passed", r.passed},
                             {"seconds", r.seconds}, {"limit_seconds", r.limit_seconds}, {"checks", sub}};
                      if (!r.error.empty()) j["error"] = r.error;
                      arr.push_back(j);
                    }
                    emit(Json{{"passed", all}, {"criteria", arr}}, c, out);
                    return all ? kExitOk : kExitValidation;
                  });
                }};
  return m;
}

}  // namespace

std::string usage() {
  std::ostringstream os;
  os << "usage: causality-kit <subcommand> [options]\n\nsubcommands:\n";
  for (const auto& [name, cmd] : commands()) os << "  " << name << std::string(14 - std::min<std::size_t>(13, name.size()), ' ') << cmd.help << "\n";
  os << "\nRun 'causality-kit <subcommand> --help' for options. Exit codes: 0 pass or feasible, 1 input error,\n"
        "2 validation failure, 3 inconclusive, 4 rejected or certified infeasible, 64 usage error.\n";
  return os.str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << usage();
    return kExitUsage;
  }
  if (args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    out << usage();
    return kExitOk;
  }
  auto table = commands();
  const auto it = table.find(args[0]);
  if (it == table.end()) {
    err << "unknown subcommand '" << args[0] << "'\n\n" << usage();
    return kExitUsage;
  }
  CLI::App app(it->second.help, "causality-kit " + args[0]);
  CommonFlags flags;
  add_common(app, flags);
  const Handler handler = it->second.setup(app);
  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  try {
    const RunConfig config = make_config(flags);
    return handler(config, out);
  } catch (const io::SchemaError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitIo;
  } catch (const io::IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace causality::cli

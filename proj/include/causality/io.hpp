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


#ifndef CAUSALITY_IO_HPP_
#define CAUSALITY_IO_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "causality/choi.hpp"
#include "causality/common.hpp"
#include "causality/convexsep.hpp"
#include "causality/correlations.hpp"
#include "causality/gallery.hpp"
#include "causality/polytope.hpp"
#include "causality/procmat.hpp"
#include "causality/qlinalg.hpp"

namespace causality::io {

using Json = nlohmann::ordered_json;

/// Malformed input file or document.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

struct LabeledMatrix {
  qlinalg::TensorSpace space;
  ComplexMatrix matrix;
};

Json matrix_to_json(const ComplexMatrix& m, const qlinalg::TensorSpace& space);
LabeledMatrix matrix_from_json(const Json& doc);

Json party_to_json(const choi::PartySpec& p);
choi::PartySpec party_from_json(const Json& doc);

Json process_to_json(const procmat::ProcessMatrix& w);
procmat::ProcessMatrix process_from_json(const Json& doc);

Json instrument_to_json(const choi::Instrument& inst);
choi::Instrument instrument_from_json(const Json& doc);

/// {"parties": [[instrument per setting] per party]}.
Json strategy_to_json(const polytope::Strategy& s);
polytope::Strategy strategy_from_json(const Json& doc);

Json scenario_to_json(const correlations::Scenario& s);
correlations::Scenario scenario_from_json(const Json& doc);

/// Nested arrays [s1]...[sn][o1]...[on].
Json table_to_json(const correlations::ProbabilityTable& t);
correlations::ProbabilityTable table_from_json(const Json& doc);

/// Payoff nested like a table; entries are numbers or "p/q" strings. The
/// optional setting distribution is nested [s1]...[sn] (uniform if absent).
Json game_to_json(const polytope::Game& g);
polytope::Game game_from_json(const Json& doc);
lp::Rational rational_from_json(const Json& v);
Json rational_to_json(const lp::Rational& q);

Json validation_report_to_json(const procmat::ValidationReport& r, const std::vector<choi::PartySpec>& parties);
Json signaling_report_to_json(const procmat::SignalingReport& r, const std::vector<choi::PartySpec>& parties);
Json membership_report_to_json(const polytope::MembershipReport& r, const correlations::Scenario& s);
Json bound_to_json(const polytope::BoundResult& r);
Json feasibility_report_to_json(const convexsep::FeasibilityReport& r);
Json pipeline_report_to_json(const gallery::PipelineReport& r);

}  // namespace causality::io

#endif  // CAUSALITY_IO_HPP_

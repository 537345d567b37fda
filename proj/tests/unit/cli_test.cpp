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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "causality/gallery.hpp"
#include "causality/io.hpp"

#ifndef CAUSALITY_KIT_BINARY
#error "CAUSALITY_KIT_BINARY must point at the built command-line tool"
#endif

namespace causality::cli {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Runs the built executable through the shell and captures stdout.
CliResult run_binary(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + CAUSALITY_KIT_BINARY + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("causality_kit_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const io::Json& doc) {
    const std::string path = (dir_ / name).string();
    io::write_json_file(path, doc);
    return path;
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  const CliResult unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_NE(unknown.err.find("unknown subcommand"), std::string::npos);
  EXPECT_EQ(run({"validate"}).code, kExitUsage);
  EXPECT_EQ(run({"validate", "x.json", "--format", "xml"}).code, kExitUsage);
  const CliResult help = run({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("ecs-test"), std::string::npos);
}

TEST_F(CliTest, InputErrors) {
  EXPECT_EQ(run({"validate", (dir_ / "missing.json").string()}).code, kExitIo);
  const std::string bad = write("bad.json", io::Json{{"parties", "nope"}});
  EXPECT_EQ(run({"validate", bad}).code, kExitIo);
}

TEST_F(CliTest, Validate) {
  const auto w = gallery::ocb_process();
  const CliResult ok = run({"validate", write("ocb.json", io::process_to_json(w))});
  EXPECT_EQ(ok.code, kExitOk);
  EXPECT_TRUE(io::Json::parse(ok.out).at("valid").get<bool>());
  const auto broken = procmat::make_process(w.parties, w.matrix + 0.01 * gallery::pauli_string(w.space(), "IzIz"));
  const CliResult bad = run({"validate", write("broken.json", io::process_to_json(broken))});
  EXPECT_EQ(bad.code, kExitValidation);
  EXPECT_NE(bad.out.find("A2B2"), std::string::npos);
}

TEST_F(CliTest, TextFormat) {
  const CliResult r = run({"validate", write("ocb.json", io::process_to_json(gallery::ocb_process())), "--format", "text"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("valid: true"), std::string::npos);
}

TEST_F(CliTest, CausalBoundIsExact) {
  const CliResult r = run({"causal-bound", write("game.json", io::game_to_json(gallery::ocb_game())), "--exact"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(io::Json::parse(r.out), io::Json::parse(R"({"bound":"3/4"})"));
}

TEST_F(CliTest, SignalingOnTables) {
  const std::string path = write("relay.json", io::table_to_json(gallery::xor_relay_table()));
  EXPECT_EQ(run({"signaling", path, "--from", "A"}).code, kExitOk);
  EXPECT_EQ(run({"signaling", path, "--from", "B"}).code, kExitRejected);
  EXPECT_EQ(run({"causal-test", path}).code, kExitOk);
}

TEST_F(CliTest, SeparabilityCommands) {
  const std::string reduced = write("reduced.json", io::process_to_json(gallery::switch_reduced_closed_form()));
  const CliResult sep = run({"sep-test", reduced});
  EXPECT_EQ(sep.code, kExitOk) << sep.err;
  EXPECT_EQ(io::Json::parse(sep.out).at("status").get<std::string>(), "feasible");
  const std::string sw = write("switch.json", io::process_to_json(gallery::switch_process()));
  EXPECT_EQ(run({"ecs-test", sw}).code, kExitRejected);
  EXPECT_EQ(run({"ecs-test", sw, "--no-certificate", "--max-iterations", "50"}).code, kExitInconclusive);
  EXPECT_EQ(run({"sep-test", sw}).code, kExitValidation);
}

TEST_F(CliTest, ReproduceWritesMatrix) {
  const std::string out = (dir_ / "extended.json").string();
  const CliResult r = run({"reproduce", "activation", "--emit-matrix", out});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(io::Json::parse(r.out).at("passed").get<bool>());
  const auto w = io::process_from_json(io::read_json_file(out));
  EXPECT_LT((w.matrix - gallery::ocb_extended().matrix).cwiseAbs().maxCoeff(), 1e-12);
}

TEST_F(CliTest, ValidateMatchesLibrary) {
  const auto w = gallery::switch_process();
  const CliResult r = run({"validate", write("switch.json", io::process_to_json(w))});
  EXPECT_EQ(io::Json::parse(r.out), io::validation_report_to_json(procmat::validate(w), w.parties));
}

TEST_F(CliTest, SeparabilityMatchesLibrary) {
  const auto w = gallery::switch_reduced_closed_form();
  const CliResult r = run({"sep-test", write("reduced.json", io::process_to_json(w))});
  io::Json expected = io::feasibility_report_to_json(convexsep::bipartite_causal_sep(w));
  io::Json actual = io::Json::parse(r.out);
  actual.erase("label");
  EXPECT_EQ(actual, expected);
}

TEST_F(CliTest, MembershipMatchesLibrary) {
  const auto t = gallery::xor_relay_table();
  const CliResult r = run({"causal-test", write("relay.json", io::table_to_json(t)), "--exact"});
  polytope::MembershipOptions o;
  o.exact = true;
  EXPECT_EQ(io::Json::parse(r.out), io::membership_report_to_json(polytope::causal_membership(t, o), t.scenario));
}

TEST_F(CliTest, PipelineMatchesLibrary) {
  const CliResult r = run({"reproduce", "ocb", "--seed", "7"});
  gallery::PipelineOptions o;
  o.seed = 7;
  o.seesaw.seed = 7;
  EXPECT_EQ(io::Json::parse(r.out), io::pipeline_report_to_json(gallery::ocb_pipeline(o)));
}

TEST_F(CliTest, BinaryExitCodes) {
  EXPECT_EQ(run_binary("frobnicate").code, kExitUsage);
  const std::string sw = write("switch.json", io::process_to_json(gallery::switch_process()));
  EXPECT_EQ(run_binary("ecs-test " + sw).code, kExitRejected);
  EXPECT_EQ(run_binary("validate " + sw).code, kExitOk);
}

TEST_F(CliTest, SeedFromEnvironment) {
  const CliResult a = run_binary("reproduce ocb-tripartite", "CAUSALITY_KIT_SEED=1");
  const CliResult b = run_binary("reproduce ocb-tripartite", "CAUSALITY_KIT_SEED=2");
  const CliResult c = run_binary("reproduce ocb-tripartite --seed 2", "CAUSALITY_KIT_SEED=1");
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_NE(a.out, b.out);
  EXPECT_EQ(b.out, c.out);
  EXPECT_EQ(run_binary("reproduce ocb", "CAUSALITY_KIT_SEED=abc").code, kExitValidation);
}

}  // namespace
}  // namespace causality::cli

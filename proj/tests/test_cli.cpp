// Copyright 2026 The QRep Authors
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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "qrep/report.hpp"
#include "test_util.hpp"

namespace qrep {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qrep_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("bell.qasm", emit_qasm(testing::bell()));
    write("bell_hx.qasm", emit_qasm(replace_gate(testing::bell(), 0, make_gate(GateKind::X, {0}))));
    Circuit extra = testing::bell();
    extra.add(GateKind::Z, {0});
    write("bell_z.qasm", emit_qasm(extra));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

  CliResult run(const std::string& args, const std::string& env = "") const {
    const std::string err_file = path("stderr.txt");
    const std::string cmd = env + " \"" + std::string(QREP_CLI_PATH) + "\" " + args + " 2> \"" +
                            err_file + "\" > /dev/null";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, testing::read_file(err_file)};
  }

  nlohmann::json json(const std::string& name) const {
    return nlohmann::json::parse(testing::read_file(path(name)));
  }

  std::string stripped(const std::string& name) const {
    nlohmann::json j = json(name);
    j["manifest"].erase("timestamp");
    j["manifest"].erase("wall_seconds");
    return j.dump();
  }

  fs::path dir_;
};

TEST_F(CliTest, RepairBellHToX) {
  const CliResult r = run("repair --circuit " + path("bell_hx.qasm") + " --reference " + path("bell.qasm") +
                    " --budget-evals 500 --iterations 4 --out " + path("report.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json("report.json");
  EXPECT_EQ(j["status"], "Repaired");
  ASSERT_TRUE(fs::exists(path("report.repaired.qasm")));
  const Circuit fixed = parse_qasm(testing::read_file(path("report.repaired.qasm")));
  EXPECT_EQ(fitness(fixed, generate_suite(testing::bell())).failed_count, 0u);
  EXPECT_LE(j["evals_used"].get<int>(), 500);
}

TEST_F(CliTest, RepairNotFixedExitsTwo) {
  const Circuit ref = testing::load_benchmark("qft_4");
  write("qft.qasm", emit_qasm(ref));
  write("qft_bad.qasm", emit_qasm(replace_gate(ref, 4, make_gate(GateKind::RZ, {2}, {0.9}))));
  const CliResult r = run("repair --circuit " + path("qft_bad.qasm") + " --reference " + path("qft.qasm") +
                    " --budget-evals 40 --out " + path("r.json"));
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_EQ(json("r.json")["status"], "NotFixed");
  EXPECT_FALSE(fs::exists(path("r.repaired.qasm")));
}

TEST_F(CliTest, IterationsZeroIsUsageError) {
  const CliResult r = run("repair --circuit " + path("bell_hx.qasm") + " --reference " + path("bell.qasm") +
                    " --budget-evals 500 --iterations 0 --out " + path("report.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  EXPECT_FALSE(fs::exists(path("report.json")));
}

TEST_F(CliTest, UsageErrors) {
  const std::string base = "repair --circuit " + path("bell_hx.qasm") + " --out " + path("o.json");
  EXPECT_EQ(run(base).code, 1);
  EXPECT_EQ(run(base + " --reference " + path("bell.qasm") + " --budget-evals 5 --budget-seconds 5").code, 1);
  EXPECT_EQ(run(base + " --reference " + path("missing.qasm")).code, 1);
  EXPECT_EQ(run(base + " --reference " + path("bell.qasm") + " --shots-mode noisy").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, ParseErrorNamesLineAndColumn) {
  write("broken.qasm", "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0]\ncx q[0],q[1];\n");
  const CliResult r = run("repair --circuit " + path("broken.qasm") + " --reference " + path("bell.qasm") +
                    " --budget-evals 50 --out " + path("o.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 5"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("column 1"), std::string::npos) << r.err;
}

TEST_F(CliTest, ExpectedDistributionFile) {
  write("expected.json", suite_to_expected_json(generate_suite(testing::bell())).dump());
  const CliResult r = run("repair --circuit " + path("bell_hx.qasm") + " --expected " + path("expected.json") +
                    " --budget-evals 500 --out " + path("report.json"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json("report.json")["manifest"]["inputs"]["expected"], path("expected.json"));
}

TEST_F(CliTest, DeterministicAcrossThreads) {
  const Circuit ref = testing::load_benchmark("grover_3");
  write("ref.qasm", emit_qasm(ref));
  write("bad.qasm", emit_qasm(replace_gate(ref, 5, make_gate(GateKind::RY, {1}, {0.4}))));
  const std::string args = "--circuit " + path("bad.qasm") + " --reference " + path("ref.qasm") +
                           " --budget-evals 300 --seed 9 --out ";
  for (const char* sub : {"repair ", "baseline-rs "}) {
    const CliResult a = run(sub + args + path("a.json") + " --threads 1");
    const CliResult b = run(sub + args + path("b.json") + " --threads 4");
    const CliResult c = run(sub + args + path("c.json"), "QREP_THREADS=3");
    ASSERT_NE(a.code, 1) << a.err;
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.code, c.code);
    EXPECT_EQ(stripped("a.json"), stripped("b.json"));
    EXPECT_EQ(stripped("a.json"), stripped("c.json"));
  }
  EXPECT_EQ(run("repair " + args + path("d.json"), "QREP_THREADS=zero").code, 1);
}

TEST_F(CliTest, BaselineRsRepairsBell) {
  const CliResult r = run("baseline-rs --circuit " + path("bell_hx.qasm") + " --reference " +
                    path("bell.qasm") + " --budget-evals 100000 --seed 3 --out " + path("rs.json"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json("rs.json")["engine"], "random_search");
  EXPECT_EQ(json("rs.json")["manifest"]["subcommand"], "baseline-rs");
}

TEST_F(CliTest, LocalizeShortCircuit) {
  const CliResult r = run("localize --circuit " + path("bell_z.qasm") + " --reference " + path("bell.qasm") +
                    " --out " + path("loc.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json("loc.json");
  EXPECT_EQ(j["status"], "Repaired");
  EXPECT_EQ(j["repaired_by_removing"]["position"], 2);
  EXPECT_TRUE(fs::exists(path("loc.repaired.qasm")));
  EXPECT_EQ(j["ranking"].size(), 3u);
}

TEST_F(CliTest, LocalizeRankingOnly) {
  const CliResult r = run("localize --circuit " + path("bell_hx.qasm") + " --reference " + path("bell.qasm") +
                    " --out " + path("loc.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json("loc.json");
  EXPECT_EQ(j["status"], "Localized");
  EXPECT_EQ(j["ranking"].size(), 2u);
  EXPECT_FALSE(fs::exists(path("loc.repaired.qasm")));
}

TEST_F(CliTest, LocalizeCorrectCircuitFails) {
  const CliResult r = run("localize --circuit " + path("bell.qasm") + " --reference " + path("bell.qasm") +
                    " --out " + path("loc.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nothing to repair"), std::string::npos) << r.err;
}

TEST_F(CliTest, MutateCorpus) {
  const std::string ghz = std::string(QREP_BENCHMARK_DIR) + "/ghz_3.qasm";
  ASSERT_EQ(run("mutate --circuit " + ghz + " --per-group 1 --seed 42 --out-dir " + path("m1")).code, 0);
  ASSERT_EQ(run("mutate --circuit " + ghz + " --per-group 1 --seed 42 --out-dir " + path("m2")).code, 0);
  const auto j = json("m1/manifest.json");
  ASSERT_EQ(j["mutants"].size(), 3u);
  for (const auto& m : j["mutants"]) {
    const std::string file = m["file"];
    EXPECT_TRUE(m["fault_gate"].contains("label"));
    EXPECT_EQ(testing::read_file(path("m1/" + file)), testing::read_file(path("m2/" + file)));
  }
  EXPECT_EQ(stripped("m1/manifest.json"), stripped("m2/manifest.json"));

  ASSERT_EQ(run("mutate --circuit " + ghz + " --per-group 0 --seed 42 --out-dir " + path("m0")).code, 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(path("m0"))) {
    ++files;
    EXPECT_EQ(entry.path().filename(), "manifest.json");
  }
  EXPECT_EQ(files, 1u);
  EXPECT_TRUE(json("m0/manifest.json")["mutants"].empty());
}

}  // namespace
}  // namespace qrep

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

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "qrep/qrep.hpp"

namespace fs = std::filesystem;
using namespace qrep;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotFixed = 2;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Circuit load_circuit(const std::string& path) {
  try {
    return parse_qasm(read_text(path));
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

// <out dir>/<out stem>.repaired.qasm
fs::path repaired_path(const fs::path& out) {
  fs::path p = out;
  p.replace_filename(out.stem().string() + ".repaired.qasm");
  return p;
}

unsigned default_threads() {
  if (const char* env = std::getenv("QREP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InvalidConfig(std::string("QREP_THREADS must be a positive integer, got '") + env + "'");
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

struct SuiteOptions {
  std::string circuit;
  std::string reference;
  std::string expected;
  std::optional<unsigned> threads;
};

void add_suite_options(CLI::App* cmd, SuiteOptions& o) {
  cmd->add_option("--circuit", o.circuit, "Faulty circuit (OpenQASM 2.0)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* ref = cmd->add_option("--reference", o.reference, "Correct reference circuit")
                  ->check(CLI::ExistingFile);
  auto* exp = cmd->add_option("--expected", o.expected,
                              "Expected distributions as JSON {test_id: {bitstring: p}}")
                  ->check(CLI::ExistingFile);
  ref->excludes(exp);
  cmd->add_option("--threads", o.threads,
                  "Worker threads for suite evaluation (default: $QREP_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
}

TestSuite load_suite(const SuiteOptions& o, const Circuit& c) {
  TestSuite ts;
  if (!o.reference.empty()) {
    ts = generate_suite(load_circuit(o.reference));
  } else if (!o.expected.empty()) {
    ts = suite_from_expected_json(nlohmann::json::parse(read_text(o.expected)));
  } else {
    throw InvalidConfig("one of --reference or --expected is required");
  }
  if (ts.num_qubits != c.num_qubits()) {
    throw WidthMismatch("circuit has " + std::to_string(c.num_qubits()) +
                        " qubits but the test suite expects " + std::to_string(ts.num_qubits));
  }
  return ts;
}

std::vector<std::pair<std::string, std::string>> suite_inputs(const SuiteOptions& o) {
  std::vector<std::pair<std::string, std::string>> in{{"circuit", o.circuit}};
  if (!o.reference.empty()) in.emplace_back("reference", o.reference);
  if (!o.expected.empty()) in.emplace_back("expected", o.expected);
  return in;
}

struct RepairOptions {
  SuiteOptions suite;
  std::optional<double> budget_seconds;
  std::optional<std::size_t> budget_evals;
  unsigned iterations = 4;
  std::uint64_t seed = 0;
  std::string shots_mode = "exact";
  std::optional<std::size_t> shots;
  double tau_fail = kDefaultTauFail;
  double eps_zero = kDefaultEpsZero;
  std::size_t max_evals = 20;
  std::size_t top_k = 10;
  std::optional<std::size_t> fault_gate;
  std::string out;
};

void add_repair_options(CLI::App* cmd, RepairOptions& o) {
  add_suite_options(cmd, o.suite);
  auto* secs = cmd->add_option("--budget-seconds", o.budget_seconds,
                               "Wall-clock budget in seconds (default 7200)")
                   ->check(CLI::PositiveNumber);
  auto* evals = cmd->add_option("--budget-evals", o.budget_evals,
                                "Budget in fitness evaluations")
                    ->check(CLI::PositiveNumber);
  secs->excludes(evals);
  cmd->add_option("--iterations", o.iterations, "Search iterations I")
      ->capture_default_str()
      ->check(CLI::Range(1U, 1000000U));
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--shots-mode", o.shots_mode, "exact or sampled")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "sampled"}));
  cmd->add_option("--shots", o.shots, "Shots per test case in sampled mode (default 2^q*2)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tau-fail", o.tau_fail, "Hellinger failure threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--eps-zero", o.eps_zero, "Probability treated as zero")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-evals", o.max_evals, "Optimizer evaluations per parametric patch")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--top-k", o.top_k, "Length of the best-patch list")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--fault-gate", o.fault_gate,
                  "Position of the known faulty gate, for the rank percentile");
  cmd->add_option("--out", o.out, "Report path (JSON)")->required();
}

int run_repair(const RepairOptions& o, bool random) {
  const Circuit c = load_circuit(o.suite.circuit);
  const TestSuite ts = load_suite(o.suite, c);

  RepairConfig cfg;
  if (o.budget_evals) {
    cfg.budget = Budget::evaluations(*o.budget_evals);
  } else if (o.budget_seconds) {
    cfg.budget = Budget::seconds(*o.budget_seconds);
  }
  cfg.iterations = o.iterations;
  cfg.seed = o.seed;
  cfg.top_k = o.top_k;
  cfg.optimizer.max_evals = o.max_evals;
  cfg.eval.mode = o.shots_mode == "sampled" ? ShotsMode::Sampled : ShotsMode::Exact;
  cfg.eval.shots = o.shots;
  cfg.eval.seed = o.seed;
  cfg.eval.tau_fail = o.tau_fail;
  cfg.eval.eps_zero = o.eps_zero;
  cfg.eval.threads = o.suite.threads.value_or(default_threads());
  if (o.fault_gate) {
    if (*o.fault_gate >= c.size()) {
      throw InvalidConfig("--fault-gate " + std::to_string(*o.fault_gate) +
                          " is beyond the circuit's " + std::to_string(c.size()) + " gates");
    }
    cfg.fault = GateId::of(c.gate(*o.fault_gate));
  }

  const RepairReport report = random ? random_search(c, ts, cfg) : repair(c, ts, cfg);

  RunManifest m;
  m.subcommand = random ? "baseline-rs" : "repair";
  m.inputs = suite_inputs(o.suite);
  m.seed = o.seed;
  m.timestamp = RunManifest::now_utc();
  const fs::path out(o.out);
  write_text(out, to_json(report, cfg, m).dump(2) + "\n");
  if (report.repaired) write_text(repaired_path(out), emit_qasm(*report.repaired));

  std::cerr << status_name(report.status) << ": " << report.evals_used << " evaluations, "
            << report.patches_tried << " patches tried, improvement "
            << report.improvement_pct << "%\n";
  return report.repaired_ok() ? kExitOk : kExitNotFixed;
}

struct LocalizeOptions {
  SuiteOptions suite;
  std::string out;
};

int run_localize(const LocalizeOptions& o) {
  const Circuit c = load_circuit(o.suite.circuit);
  const TestSuite ts = load_suite(o.suite, c);
  EvalConfig cfg;
  cfg.threads = o.suite.threads.value_or(default_threads());
  const FitnessScore base = fitness(c, ts, cfg);
  const LocalizationResult loc = localize(c, ts, base, cfg);

  RunManifest m;
  m.subcommand = "localize";
  m.inputs = suite_inputs(o.suite);
  m.timestamp = RunManifest::now_utc();
  const fs::path out(o.out);
  write_text(out, to_json(loc, c, base.value, m).dump(2) + "\n");
  if (loc.repaired) {
    write_text(repaired_path(out), emit_qasm(*loc.repaired));
    std::cerr << "removing gate " << GateId::of(c.gate(*loc.repaired_by)).label()
              << " repairs the circuit\n";
  }
  return kExitOk;
}

struct MutateOptions {
  std::string circuit;
  std::size_t per_group = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int run_mutate(const MutateOptions& o) {
  const Circuit c = load_circuit(o.circuit);
  const auto mutants = inject_faults(c, o.seed, o.per_group);
  RunManifest m;
  m.subcommand = "mutate";
  m.inputs = {{"circuit", o.circuit}};
  m.seed = o.seed;
  m.timestamp = RunManifest::now_utc();
  write_mutant_corpus(o.out_dir, mutants, o.seed, o.per_group, m);
  std::cerr << mutants.size() << " mutants written to " << o.out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrep: automated repair of quantum circuits"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RepairOptions repair_opts;
  auto* repair_cmd = app.add_subcommand("repair", "Localise the fault and search for a patch");
  add_repair_options(repair_cmd, repair_opts);

  RepairOptions rs_opts;
  auto* rs_cmd = app.add_subcommand("baseline-rs", "Unguided random patch search");
  add_repair_options(rs_cmd, rs_opts);

  LocalizeOptions loc_opts;
  auto* loc_cmd = app.add_subcommand("localize", "Rank gates by suspiciousness only");
  add_suite_options(loc_cmd, loc_opts.suite);
  loc_cmd->add_option("--out", loc_opts.out, "Report path (JSON)")->required();

  MutateOptions mut_opts;
  auto* mut_cmd = app.add_subcommand("mutate", "Write a corpus of single-fault mutants");
  mut_cmd->add_option("--circuit", mut_opts.circuit, "Correct reference circuit")
      ->required()
      ->check(CLI::ExistingFile);
  mut_cmd->add_option("--per-group", mut_opts.per_group, "Mutants per operator group")
      ->capture_default_str();
  mut_cmd->add_option("--seed", mut_opts.seed, "Random seed")->capture_default_str();
  mut_cmd->add_option("--out-dir", mut_opts.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*repair_cmd) return run_repair(repair_opts, false);
    if (*rs_cmd) return run_repair(rs_opts, true);
    if (*loc_cmd) return run_localize(loc_opts);
    if (*mut_cmd) return run_mutate(mut_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

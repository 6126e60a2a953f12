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

#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrep/engine.hpp"
#include "qrep/localizer.hpp"
#include "qrep/mutation.hpp"
#include "qrep/qasm.hpp"

namespace qrep {

inline constexpr const char* kVersion = "0.1.0";

using OrderedJson = nlohmann::ordered_json;

/// Run provenance. `timestamp` and `wall_seconds` are the only fields of a
/// report that differ between identical runs.
struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::uint64_t seed = 0;
  std::string timestamp;
  double wall_seconds = 0;

  static std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
  }
};

inline OrderedJson to_json(const RunManifest& m) {
  OrderedJson inputs = OrderedJson::object();
  for (const auto& [k, v] : m.inputs) inputs[k] = v;
  return OrderedJson{{"tool", "qrep"},
                     {"version", kVersion},
                     {"subcommand", m.subcommand},
                     {"inputs", inputs},
                     {"seed", m.seed},
                     {"timestamp", m.timestamp},
                     {"wall_seconds", m.wall_seconds}};
}

inline OrderedJson to_json(const GateId& g) {
  return OrderedJson{{"position", g.position},
                     {"gate", std::string(name_of(g.kind))},
                     {"qubits", g.qubits},
                     {"label", g.label()}};
}

inline OrderedJson to_json(const ScoredPatch& sp) {
  const Patch& p = sp.patch;
  std::vector<double> params = sp.params;
  if (params.empty() && p.params) params = *p.params;
  OrderedJson j{{"kind", patch_kind_name(p.kind)},
                {"position", p.position},
                {"gate", std::string(name_of(p.gate))},
                {"qubits", p.qubits},
                {"params", params},
                {"fitness", sp.fitness}};
  j["anchor"] = p.anchor ? OrderedJson(p.anchor->label()) : OrderedJson(nullptr);
  return j;
}

inline OrderedJson to_json(const RepairConfig& cfg) {
  std::vector<std::string> catalog;
  for (GateKind k : cfg.patch_catalog) catalog.emplace_back(name_of(k));
  return OrderedJson{
      {"budget", {{"unit", cfg.budget.unit_name()}, {"amount", cfg.budget.amount}}},
      {"iterations", cfg.iterations},
      {"optimizer", {{"max_evals", cfg.optimizer.max_evals},
                     {"tolerance", cfg.optimizer.tolerance},
                     {"initial_radius", cfg.optimizer.initial_radius}}},
      {"oracle", "two_rule_threshold"},
      {"tau_fail", cfg.eval.tau_fail},
      {"eps_zero", cfg.eval.eps_zero},
      {"shots_mode", cfg.eval.mode == ShotsMode::Exact ? "exact" : "sampled"},
      {"seed", cfg.seed},
      {"patch_catalog", catalog.empty() ? OrderedJson("default") : OrderedJson(catalog)},
      {"top_k", cfg.top_k}};
}

/// Report keys, in order: status, engine, repaired_qasm, repairing_patch,
/// best_patches, ranking, baseline_fitness, best_fitness, improvement_pct,
/// fault_percentile, evals_used, localization_evals, patches_tried,
/// pool_size, flags, config, manifest.
inline OrderedJson to_json(const RepairReport& r, const RepairConfig& cfg, RunManifest manifest) {
  OrderedJson j;
  j["status"] = status_name(r.status);
  j["engine"] = r.engine;
  j["repaired_qasm"] = r.repaired ? OrderedJson(emit_qasm(*r.repaired)) : OrderedJson(nullptr);
  j["repairing_patch"] = r.repairing_patch ? to_json(*r.repairing_patch) : OrderedJson(nullptr);
  OrderedJson best = OrderedJson::array();
  for (const auto& sp : r.best_patches) best.push_back(to_json(sp));
  j["best_patches"] = best;
  OrderedJson ranking = OrderedJson::array();
  for (const auto& e : r.ranking) {
    ranking.push_back(OrderedJson{{"gate_id", e.gate.label()},
                                  {"position", e.gate.position},
                                  {"score", e.score},
                                  {"percentile", e.percentile}});
  }
  j["ranking"] = ranking;
  j["baseline_fitness"] = r.baseline_fitness;
  j["best_fitness"] = r.best_fitness;
  j["improvement_pct"] = r.improvement_pct;
  j["fault_percentile"] = r.fault_percentile ? OrderedJson(*r.fault_percentile) : OrderedJson(nullptr);
  j["evals_used"] = r.evals_used;
  j["localization_evals"] = r.localization_evals;
  j["patches_tried"] = r.patches_tried;
  j["pool_size"] = r.pool_size;
  j["flags"] = r.flags;
  j["config"] = to_json(cfg);
  manifest.wall_seconds = r.wall_seconds;
  j["manifest"] = to_json(manifest);
  return j;
}

inline OrderedJson to_json(
    const LocalizationResult& loc, const Circuit& c_init, double baseline, RunManifest manifest) {
  OrderedJson j;
  j["status"] = loc.repaired ? "Repaired" : "Localized";
  j["repaired_qasm"] = loc.repaired ? OrderedJson(emit_qasm(*loc.repaired)) : OrderedJson(nullptr);
  j["repaired_by_removing"] =
      loc.repaired_by ? to_json(GateId::of(c_init.gate(*loc.repaired_by))) : OrderedJson(nullptr);
  j["baseline_fitness"] = baseline;
  OrderedJson ranking = OrderedJson::array();
  for (std::size_t pos : loc.table.ranking()) {
    const GateId& g = loc.table.gate(pos);
    const double f = loc.removal_fitness[pos];
    ranking.push_back(OrderedJson{{"gate_id", g.label()},
                                  {"position", g.position},
                                  {"score", loc.table.score(pos)},
                                  {"percentile", rank_percentile(loc.table, g)},
                                  {"removal_fitness", std::isnan(f) ? OrderedJson(nullptr) : OrderedJson(f)}});
  }
  j["ranking"] = ranking;
  j["evals_used"] = loc.evaluations + 1;
  j["complete"] = loc.complete;
  manifest.wall_seconds = loc.wall_seconds;
  j["manifest"] = to_json(manifest);
  return j;
}

/// Writes `mutant_<id>.qasm` files and `manifest.json` into `dir`.
inline OrderedJson write_mutant_corpus(
    const std::filesystem::path& dir, const std::vector<Mutant>& mutants,
    std::uint64_t seed, std::size_t per_group, RunManifest manifest) {
  std::filesystem::create_directories(dir);
  OrderedJson list = OrderedJson::array();
  for (const auto& m : mutants) {
    const std::string file = "mutant_" + m.id + ".qasm";
    std::ofstream(dir / file) << emit_qasm(m.circuit);
    list.push_back(OrderedJson{{"id", m.id},
                               {"file", file},
                               {"group", mutation_op_name(m.op)},
                               {"description", m.description},
                               {"fault_gate", m.fault ? to_json(*m.fault) : OrderedJson(nullptr)},
                               {"fitness", m.fitness},
                               {"seed", seed}});
  }
  OrderedJson j{{"seed", seed}, {"per_group", per_group}, {"mutants", list}};
  j["manifest"] = to_json(manifest);
  std::ofstream(dir / "manifest.json") << j.dump(2) << '\n';
  return j;
}

/// Removes the fields that legitimately differ between identical runs.
inline OrderedJson strip_nondeterministic(OrderedJson j) {
  if (j.contains("manifest")) {
    j["manifest"].erase("timestamp");
    j["manifest"].erase("wall_seconds");
  }
  return j;
}

}  // namespace qrep

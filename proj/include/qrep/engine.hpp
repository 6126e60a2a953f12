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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qrep/budget.hpp"
#include "qrep/circuit.hpp"
#include "qrep/errors.hpp"
#include "qrep/localizer.hpp"
#include "qrep/optimizer.hpp"
#include "qrep/patch.hpp"
#include "qrep/qasm.hpp"
#include "qrep/rng.hpp"
#include "qrep/testkit.hpp"

namespace qrep {

struct RepairConfig {
  Budget budget = Budget::seconds(7200);
  unsigned iterations = 4;
  OptBudget optimizer;
  EvalConfig eval;
  std::uint64_t seed = 0;
  // Empty means default_patch_catalog() for the circuit width.
  std::vector<GateKind> patch_catalog;
  std::size_t top_k = 10;
  // Ground-truth faulty gate, used only for the report's fault percentile.
  std::optional<GateId> fault;

  void validate() const {
    if (iterations < 1) throw InvalidConfig("iterations must be at least 1");
    if (!(budget.amount > 0)) throw InvalidConfig("budget must be positive");
    if (optimizer.max_evals < 1) throw InvalidConfig("optimizer max_evals must be at least 1");
    if (top_k < 1) throw InvalidConfig("top_k must be at least 1");
  }
};

/// Fraction of the suspiciousness ranking kept after iteration `i` of
/// `total`.
inline double pruning_keep_fraction(unsigned i, unsigned total) {
  if (total == 0 || i < 1 || i > total) {
    throw InvalidConfig("iteration index out of range");
  }
  return 1.0 - static_cast<double>(i) / static_cast<double>(total);
}

/// Number of gates kept after iteration `i`: ceil(fraction * n), at least
/// one, and zero after the last iteration.
inline std::size_t pruning_keep_count(unsigned i, unsigned total, std::size_t n_gates) {
  const double frac = pruning_keep_fraction(i, total);
  if (i == total || n_gates == 0) return 0;
  // Small slack so that e.g. 0.5 * 10 does not round up to 6.
  const auto k = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n_gates) - 1e-9));
  return std::max<std::size_t>(1, k);
}

struct ScoredPatch {
  Patch patch;
  std::vector<double> params;
  double fitness = 0;
};

/// Best candidates seen so far, ascending by fitness, capped at `capacity`.
/// Only candidates no worse than the baseline are admitted.
class BestPatchList {
 public:
  BestPatchList(std::size_t capacity, double baseline)
      : capacity_(capacity), baseline_(baseline) {}

  void offer(const Patch& p, std::vector<double> params, double fitness) {
    if (!(fitness <= baseline_)) return;
    ScoredPatch sp{p, std::move(params), fitness};
    auto it = std::upper_bound(
        items_.begin(), items_.end(), fitness,
        [](double f, const ScoredPatch& s) { return f < s.fitness; });
    if (static_cast<std::size_t>(it - items_.begin()) >= capacity_) return;
    items_.insert(it, std::move(sp));
    if (items_.size() > capacity_) items_.pop_back();
  }

  const std::vector<ScoredPatch>& items() const { return items_; }

 private:
  std::size_t capacity_;
  double baseline_;
  std::vector<ScoredPatch> items_;
};

struct RankEntry {
  GateId gate;
  double score = 0;
  double percentile = 0;
};

struct RepairReport {
  enum class Status { Repaired, NotFixed };

  std::string engine;
  Status status = Status::NotFixed;
  std::optional<Circuit> repaired;
  std::optional<ScoredPatch> repairing_patch;
  std::vector<ScoredPatch> best_patches;
  std::vector<RankEntry> ranking;
  double baseline_fitness = 0;
  double best_fitness = 0;
  double improvement_pct = 0;
  std::optional<double> fault_percentile;
  std::size_t evals_used = 0;
  std::size_t localization_evals = 0;
  std::size_t patches_tried = 0;
  std::size_t pool_size = 0;
  double wall_seconds = 0;
  // Free-form markers such as "budget_too_small" or "localization_repair".
  std::vector<std::string> flags;

  bool repaired_ok() const { return status == Status::Repaired; }
};

inline const char* status_name(RepairReport::Status s) {
  return s == RepairReport::Status::Repaired ? "Repaired" : "NotFixed";
}

namespace engine_detail {

struct PatchOutcome {
  double fitness = 0;
  std::vector<double> params;
  std::optional<Circuit> passing;
};

// Shared bookkeeping of both search strategies.
struct Run {
  const Circuit& c_init;
  const RepairConfig& cfg;
  Evaluator& eval;
  FitnessScore baseline;
  SuspiciousnessTable table;
  BestPatchList best;
  RepairReport report;

  Run(const Circuit& c, const RepairConfig& config, Evaluator& ev, std::string engine)
      : c_init(c),
        cfg(config),
        eval(ev),
        baseline(ev(c)),
        table(c),
        best(config.top_k, baseline.value) {
    report.engine = std::move(engine);
    report.baseline_fitness = baseline.value;
    if (baseline.all_passed()) throw NoFailingTest();
  }

  RepairReport finish(std::optional<Circuit> repaired, std::optional<ScoredPatch> by) {
    report.best_patches = best.items();
    report.best_fitness = baseline.value;
    if (!report.best_patches.empty()) {
      report.best_fitness = std::min(report.best_fitness, report.best_patches.front().fitness);
    }
    if (repaired) {
      report.status = RepairReport::Status::Repaired;
      report.repaired = std::move(repaired);
      report.repairing_patch = std::move(by);
      report.improvement_pct = 100.0;
    } else {
      report.status = RepairReport::Status::NotFixed;
      report.improvement_pct =
          baseline.value > 0
              ? std::clamp((baseline.value - report.best_fitness) / baseline.value * 100.0, 0.0, 100.0)
              : 0.0;
    }
    for (std::size_t pos : table.ranking()) {
      const GateId& g = table.gate(pos);
      report.ranking.push_back({g, table.score(pos), rank_percentile(table, g)});
    }
    if (cfg.fault && table.contains(*cfg.fault)) {
      report.fault_percentile = rank_percentile(table, *cfg.fault);
    }
    report.evals_used = eval.evaluations();
    report.wall_seconds = eval.elapsed_seconds();
    return std::move(report);
  }

  // Evaluates one candidate. Parametric patches go through `tune`, which
  // returns the evaluated points; evaluation stops at the first passing one.
  template <typename Tune>
  PatchOutcome try_patch(const Patch& p, Tune&& tune) {
    PatchOutcome out;
    if (!p.needs_params()) {
      AppliedPatch applied = apply_patch(c_init, p);
      const FitnessScore f = eval(applied.circuit);
      out.fitness = f.value;
      if (f.all_passed()) out.passing = std::move(applied.circuit);
      return out;
    }
    out.fitness = std::numeric_limits<double>::infinity();
    auto objective = [&](std::span<const double> angles) {
      AppliedPatch applied = apply_patch(c_init, p, angles);
      const FitnessScore f = eval(applied.circuit);
      if (f.all_passed() && !out.passing) {
        out.passing = std::move(applied.circuit);
        out.params.assign(angles.begin(), angles.end());
        out.fitness = f.value;
      }
      return f.value;
    };
    const std::size_t max_evals = eval.evaluations_left(cfg.optimizer.max_evals);
    auto stop = [&] { return out.passing.has_value() || !eval.can_evaluate(); };
    const OptResult r = tune(objective, max_evals, stop);
    if (!out.passing) {
      out.fitness = r.value;
      out.params = r.best;
    }
    return out;
  }
};

}  // namespace engine_detail

/// Gate-prioritised repair.
///
/// 1. Evaluates `c_init` once for the baseline fitness.
/// 2. Removes each gate in turn; a removal that passes the suite is returned
///    as the repair, otherwise it scores the removed gate.
/// 3. Generates every Add/Replace patch and spreads them over the circuit.
/// 4. Splits what is left of the budget evenly over `iterations`. Each
///    iteration consumes patches until its share is spent, tuning angles of
///    parametric patches, returning on the first patch that passes, and
///    crediting each patch's fitness delta to its anchor gate. After
///    iteration i only patches anchored to the top (1 - i/I) of the
///    ranking survive.
/// 5. Reports NotFixed with the best patches and the ranking when the
///    queue or the budget runs out.
///
/// Every fitness evaluation, including the baseline, is charged to the
/// budget.
inline RepairReport repair(const Circuit& c_init, const FitnessFn& fit, const RepairConfig& cfg) {
  cfg.validate();
  Evaluator eval(fit, cfg.budget);
  engine_detail::Run run(c_init, cfg, eval, "qrep");

  const LocalizationResult loc = localize(c_init, eval, run.baseline);
  run.report.localization_evals = loc.evaluations;
  for (std::size_t pos = 0; pos < c_init.size(); ++pos) {
    if (std::isnan(loc.removal_fitness[pos])) continue;
    Patch del{PatchKind::Delete, pos, c_init.gate(pos).kind, c_init.gate(pos).qubits,
              c_init.gate(pos).params, GateId::of(c_init.gate(pos))};
    run.best.offer(del, {}, loc.removal_fitness[pos]);
  }
  run.table = loc.table;
  if (loc.repaired) {
    const std::size_t pos = *loc.repaired_by;
    Patch del{PatchKind::Delete, pos, c_init.gate(pos).kind, c_init.gate(pos).qubits,
              c_init.gate(pos).params, GateId::of(c_init.gate(pos))};
    run.report.flags.push_back("localization_repair");
    return run.finish(loc.repaired, ScoredPatch{del, {}, loc.removal_fitness[pos]});
  }
  if (!loc.complete) {
    run.report.flags.push_back("budget_too_small");
    return run.finish(std::nullopt, std::nullopt);
  }

  const auto catalog =
      cfg.patch_catalog.empty() ? default_patch_catalog(c_init.num_qubits()) : cfg.patch_catalog;
  PatchQueue pool = generate_patches(c_init, catalog);
  run.report.pool_size = pool.size();
  PatchQueue queue = order_uniform(pool, c_init);

  const double per_iteration = eval.remaining() / static_cast<double>(cfg.iterations);

  for (unsigned i = 1; i <= cfg.iterations; ++i) {
    const double start = eval.used();
    while (eval.used() - start < per_iteration && !queue.empty() && eval.can_evaluate()) {
      const Patch p = queue.pop();
      ++run.report.patches_tried;
      auto outcome = run.try_patch(p, [&](const Objective& obj, std::size_t max_evals, const auto& stop) {
        OptBudget b = cfg.optimizer;
        b.max_evals = max_evals;
        return minimize(obj, std::vector<double>(param_count(p.gate), 0.0), b, stop);
      });
      if (outcome.passing) {
        run.best.offer(p, outcome.params, outcome.fitness);
        return run.finish(std::move(outcome.passing),
                          ScoredPatch{p, outcome.params, outcome.fitness});
      }
      run.best.offer(p, outcome.params, outcome.fitness);
      if (p.anchor) run.table.add(p.anchor->position, run.baseline.value - outcome.fitness);
    }
    if (queue.empty() || !eval.can_evaluate() || i == cfg.iterations) break;
    const std::size_t keep_n = pruning_keep_count(i, cfg.iterations, run.table.size());
    const auto top = run.table.top(keep_n);
    queue = prune_to_gates(queue, std::set<std::size_t>(top.begin(), top.end()));
  }
  return run.finish(std::nullopt, std::nullopt);
}

inline RepairReport repair(const Circuit& c_init, const TestSuite& ts, const RepairConfig& cfg) {
  return repair(c_init, make_fitness_fn(ts, cfg.eval), cfg);
}

/// Unguided baseline: draws patches uniformly at random without replacement
/// from the unordered pool. A parametric patch gets `optimizer.max_evals`
/// uniformly random angle settings instead of tuning. No localisation and
/// no pruning; same budget accounting and report as `repair`.
inline RepairReport random_search(
    const Circuit& c_init, const FitnessFn& fit, const RepairConfig& cfg) {
  cfg.validate();
  Evaluator eval(fit, cfg.budget);
  engine_detail::Run run(c_init, cfg, eval, "random_search");

  const auto catalog =
      cfg.patch_catalog.empty() ? default_patch_catalog(c_init.num_qubits()) : cfg.patch_catalog;
  PatchQueue pool = generate_patches(c_init, catalog);
  run.report.pool_size = pool.size();
  Rng rng(mix_seed(cfg.seed, 0x5253));
  shuffle(pool.patches, rng);

  while (!pool.empty() && eval.can_evaluate()) {
    const Patch p = pool.pop();
    ++run.report.patches_tried;
    auto outcome = run.try_patch(p, [&](const Objective& obj, std::size_t max_evals, const auto& stop) {
      OptResult r;
      std::vector<double> angles(param_count(p.gate));
      for (std::size_t s = 0; s < max_evals; ++s) {
        for (double& a : angles) a = (2.0 * uniform01(rng) - 1.0) * std::numbers::pi;
        const double f = obj(angles);
        ++r.evals;
        if (f < r.value) {
          r.value = f;
          r.best = angles;
        }
        if (stop()) break;
      }
      return r;
    });
    if (outcome.passing) {
      run.best.offer(p, outcome.params, outcome.fitness);
      return run.finish(std::move(outcome.passing),
                        ScoredPatch{p, outcome.params, outcome.fitness});
    }
    run.best.offer(p, outcome.params, outcome.fitness);
    if (p.anchor) run.table.add(p.anchor->position, run.baseline.value - outcome.fitness);
  }
  return run.finish(std::nullopt, std::nullopt);
}

inline RepairReport random_search(
    const Circuit& c_init, const TestSuite& ts, const RepairConfig& cfg) {
  return random_search(c_init, make_fitness_fn(ts, cfg.eval), cfg);
}

}  // namespace qrep

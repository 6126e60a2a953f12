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

#include <algorithm>
#include <cmath>

#include "qrep/engine.hpp"
#include "qrep/report.hpp"
#include "test_util.hpp"

namespace qrep {
namespace {

using testing::bell;

Circuit bell_h_to_x() { return replace_gate(bell(), 0, make_gate(GateKind::X, {0})); }

RepairConfig eval_config(std::size_t evals, std::uint64_t seed = 42) {
  RepairConfig cfg;
  cfg.budget = Budget::evaluations(evals);
  cfg.iterations = 4;
  cfg.seed = seed;
  return cfg;
}

std::string stripped(const RepairReport& r, const RepairConfig& cfg) {
  RunManifest m;
  m.subcommand = "test";
  m.timestamp = RunManifest::now_utc();
  return strip_nondeterministic(to_json(r, cfg, m)).dump();
}

// Counts every fitness call and remembers each value.
struct Probe {
  FitnessFn inner;
  std::shared_ptr<std::vector<double>> seen = std::make_shared<std::vector<double>>();

  FitnessFn fn() const {
    return [inner = inner, seen = seen](const Circuit& c) {
      FitnessScore f = inner(c);
      seen->push_back(f.value);
      return f;
    };
  }
};

TEST(Pruning, KeepFraction) {
  EXPECT_DOUBLE_EQ(pruning_keep_fraction(1, 4), 0.75);
  EXPECT_DOUBLE_EQ(pruning_keep_fraction(4, 4), 0.0);
  EXPECT_EQ(pruning_keep_count(2, 4, 10), 5u);
  EXPECT_EQ(pruning_keep_count(1, 4, 10), 8u);
  EXPECT_EQ(pruning_keep_count(3, 4, 10), 3u);
  EXPECT_EQ(pruning_keep_count(3, 4, 2), 1u);
  EXPECT_EQ(pruning_keep_count(4, 4, 10), 0u);
  EXPECT_THROW(pruning_keep_fraction(0, 4), InvalidConfig);
  EXPECT_THROW(pruning_keep_fraction(5, 4), InvalidConfig);
}

TEST(Pruning, SurvivorsOutrankPruned) {
  const Circuit c = testing::load_benchmark("qft_4");
  SuspiciousnessTable t(c);
  Rng rng(1);
  for (std::size_t pos = 0; pos < c.size(); ++pos) t.add(pos, std::round((uniform01(rng) - 0.5) * 8));
  const PatchQueue q = order_uniform(generate_patches(c), c);
  for (unsigned i = 1; i < 4; ++i) {
    const auto top = t.top(pruning_keep_count(i, 4, t.size()));
    const std::set<std::size_t> keep(top.begin(), top.end());
    const PatchQueue pruned = prune_to_gates(q, keep);
    double min_kept = std::numeric_limits<double>::infinity();
    for (const auto& p : pruned.patches) min_kept = std::min(min_kept, t.score(p.anchor->position));
    for (const auto& p : q.patches) {
      if (!keep.count(p.anchor->position)) {
        EXPECT_LE(t.score(p.anchor->position), min_kept);
      }
    }
  }
}

TEST(BestPatchList, SortedCappedAndBounded) {
  BestPatchList list(3, 10.0);
  Patch p;
  for (double f : {9.0, 12.0, 3.0, 10.0, 7.0, 1.0}) list.offer(p, {}, f);
  ASSERT_EQ(list.items().size(), 3u);
  EXPECT_EQ(list.items()[0].fitness, 1.0);
  EXPECT_EQ(list.items()[1].fitness, 3.0);
  EXPECT_EQ(list.items()[2].fitness, 7.0);
}

TEST(Repair, ExtraGateRepairedByLocalization) {
  const TestSuite ts = generate_suite(bell());
  Circuit faulty = bell();
  faulty.add(GateKind::Z, {0});
  const RepairReport r = repair(faulty, ts, eval_config(500));
  EXPECT_TRUE(r.repaired_ok());
  EXPECT_EQ(r.improvement_pct, 100.0);
  ASSERT_TRUE(r.repairing_patch);
  EXPECT_EQ(r.repairing_patch->patch.kind, PatchKind::Delete);
  EXPECT_EQ(r.repairing_patch->patch.position, 2u);
  EXPECT_EQ(r.patches_tried, 0u);
  EXPECT_NE(std::find(r.flags.begin(), r.flags.end(), "localization_repair"), r.flags.end());
  EXPECT_EQ(fitness(*r.repaired, ts).failed_count, 0u);
}

TEST(Repair, BellHReplacedByX) {
  const TestSuite ts = generate_suite(bell());
  const RepairReport r = repair(bell_h_to_x(), ts, eval_config(500));
  ASSERT_TRUE(r.repaired_ok());
  ASSERT_TRUE(r.repairing_patch);
  const Patch& p = r.repairing_patch->patch;
  EXPECT_EQ(p.kind, PatchKind::Replace);
  EXPECT_EQ(p.position, 0u);
  EXPECT_EQ(p.gate, GateKind::H);
  EXPECT_EQ(p.qubits, std::vector<unsigned>{0});
  EXPECT_EQ(r.improvement_pct, 100.0);
  EXPECT_EQ(r.best_patches.front().fitness, 0.0);
  EXPECT_LE(r.evals_used, 500u);
}

TEST(Repair, RepairedReportReverifiesFromQasm) {
  const Circuit ref = testing::load_benchmark("ghz_3");
  const TestSuite ts = generate_suite(ref);
  for (const auto& m : inject_faults(ref, 5, 2)) {
    const RepairReport r = repair(m.circuit, ts, eval_config(2000));
    if (!r.repaired_ok()) continue;
    const Circuit reloaded = parse_qasm(emit_qasm(*r.repaired));
    const FitnessScore f = fitness(reloaded, ts);
    EXPECT_EQ(f.failed_count, 0u) << m.description;
    EXPECT_EQ(r.improvement_pct, 100.0);
  }
}

TEST(Repair, SwappedControlTargetSmallBudget) {
  const Circuit ref = testing::load_benchmark("ghz_3");
  const TestSuite ts = generate_suite(ref);
  const Circuit faulty = replace_gate(ref, 1, make_gate(GateKind::CX, {1, 2}));
  RepairConfig cfg = eval_config(50);
  cfg.fault = GateId::of(faulty.gate(1));
  const RepairReport r = repair(faulty, ts, cfg);
  EXPECT_LE(r.evals_used, 50u);
  EXPECT_EQ(r.ranking.size(), faulty.size());
  if (!r.repaired_ok()) {
    EXPECT_GE(r.improvement_pct, 0.0);
    EXPECT_LE(r.improvement_pct, 100.0);
  }
  ASSERT_TRUE(r.fault_percentile);
  EXPECT_GE(*r.fault_percentile, 0.0);
  EXPECT_LE(*r.fault_percentile, 100.0);
  EXPECT_EQ(r.ranking.front().percentile, 0.0);
  EXPECT_EQ(r.ranking.back().percentile, 100.0);
  for (std::size_t i = 1; i < r.ranking.size(); ++i) {
    EXPECT_GE(r.ranking[i - 1].score, r.ranking[i].score);
  }
}

TEST(Repair, BudgetExactnessWithProbe) {
  const Circuit ref = testing::load_benchmark("qft_4");
  const TestSuite ts = generate_suite(ref);
  const Circuit faulty = replace_gate(ref, 4, make_gate(GateKind::RZ, {2}, {0.9}));
  for (std::size_t n : {1u, 2u, 5u, 13u, 14u, 37u, 100u, 257u}) {
    Probe probe{make_fitness_fn(ts)};
    const RepairReport r = repair(faulty, probe.fn(), eval_config(n));
    EXPECT_EQ(probe.seen->size(), r.evals_used) << n;
    EXPECT_LE(probe.seen->size(), n) << n;
    Probe rs_probe{make_fitness_fn(ts)};
    const RepairReport rs = random_search(faulty, rs_probe.fn(), eval_config(n));
    EXPECT_EQ(rs_probe.seen->size(), rs.evals_used) << n;
    EXPECT_LE(rs_probe.seen->size(), n) << n;
  }
}

TEST(Repair, BudgetTooSmallForLocalization) {
  const Circuit ref = testing::load_benchmark("qft_4");
  const TestSuite ts = generate_suite(ref);
  const Circuit faulty = replace_gate(ref, 4, make_gate(GateKind::RZ, {2}, {0.9}));
  const RepairReport r = repair(faulty, ts, eval_config(5));
  EXPECT_FALSE(r.repaired_ok());
  EXPECT_EQ(r.evals_used, 5u);
  EXPECT_EQ(r.localization_evals, 4u);
  EXPECT_EQ(r.patches_tried, 0u);
  EXPECT_NE(std::find(r.flags.begin(), r.flags.end(), "budget_too_small"), r.flags.end());
  EXPECT_EQ(r.ranking.size(), faulty.size());
}

TEST(Repair, BestPatchHeadIsMinimumSeen) {
  const Circuit ref = testing::load_benchmark("wstate_4");
  const TestSuite ts = generate_suite(ref);
  const Circuit faulty = replace_gate(ref, 3, make_gate(GateKind::RY, {1}, {0.2}));
  Probe probe{make_fitness_fn(ts)};
  const RepairReport r = repair(faulty, probe.fn(), eval_config(300));
  ASSERT_FALSE(r.repaired_ok());
  ASSERT_FALSE(r.best_patches.empty());
  const double min_seen = *std::min_element(probe.seen->begin() + 1, probe.seen->end());
  EXPECT_EQ(r.best_patches.front().fitness, min_seen);
  EXPECT_EQ(r.best_fitness, min_seen);
  EXPECT_LE(r.best_patches.size(), 10u);
  for (std::size_t i = 1; i < r.best_patches.size(); ++i) {
    EXPECT_LE(r.best_patches[i - 1].fitness, r.best_patches[i].fitness);
  }
  for (const auto& sp : r.best_patches) EXPECT_LE(sp.fitness, r.baseline_fitness);
  EXPECT_NEAR(r.improvement_pct, (r.baseline_fitness - min_seen) / r.baseline_fitness * 100, 1e-12);
}

TEST(Repair, RescalingPreservesRanking) {
  const Circuit ref = testing::load_benchmark("dj_4");
  const TestSuite ts = generate_suite(ref);
  const Circuit faulty = replace_gate(ref, 6, make_gate(GateKind::CZ, {0, 3}));
  auto scaled = [&](double k) -> FitnessFn {
    return [&ts, k](const Circuit& c) {
      FitnessScore f = fitness(c, ts);
      f.hellinger_sum *= k;
      f.value = static_cast<double>(f.failed_count) * k + f.hellinger_sum;
      return f;
    };
  };
  auto order = [](const RepairReport& r) {
    std::vector<std::size_t> out;
    for (const auto& e : r.ranking) out.push_back(e.gate.position);
    return out;
  };
  const RepairReport base = repair(faulty, scaled(1.0), eval_config(400));
  ASSERT_FALSE(base.ranking.empty());
  for (double k : {4.0, 0.37, 1e3}) {
    const RepairReport r = repair(faulty, scaled(k), eval_config(400));
    EXPECT_EQ(order(r), order(base)) << k;
  }
}

TEST(Repair, DeterministicAcrossRunsAndThreads) {
  const Circuit ref = testing::load_benchmark("grover_3");
  const TestSuite ts = generate_suite(ref);
  for (const auto& m : inject_faults(ref, 2, 1)) {
    RepairConfig one = eval_config(600);
    RepairConfig many = one;
    many.eval.threads = 4;
    many.eval.parallel_min_work = 0;
    const RepairReport a = repair(m.circuit, ts, one);
    const RepairReport b = repair(m.circuit, ts, one);
    const RepairReport c = repair(m.circuit, ts, many);
    EXPECT_EQ(stripped(a, one), stripped(b, one));
    EXPECT_EQ(stripped(a, one), stripped(c, one));
  }
}

TEST(Repair, InputContract) {
  const TestSuite ts = generate_suite(bell());
  EXPECT_THROW(repair(bell(), ts, eval_config(100)), NoFailingTest);
  EXPECT_THROW(random_search(bell(), ts, eval_config(100)), NoFailingTest);
  RepairConfig cfg = eval_config(100);
  cfg.iterations = 0;
  EXPECT_THROW(repair(bell_h_to_x(), ts, cfg), InvalidConfig);
  cfg = eval_config(0);
  EXPECT_THROW(repair(bell_h_to_x(), ts, cfg), InvalidConfig);
}

TEST(Repair, WallClockBudget) {
  const Circuit ref = testing::load_benchmark("qft_4");
  const TestSuite ts = generate_suite(ref);
  const Circuit faulty = replace_gate(ref, 4, make_gate(GateKind::RZ, {2}, {0.9}));
  RepairConfig cfg;
  cfg.budget = Budget::seconds(0.3);
  const auto t0 = std::chrono::steady_clock::now();
  const RepairReport r = repair(faulty, ts, cfg);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(elapsed, 2.0);
  EXPECT_GT(r.evals_used, 1u);
}

TEST(RandomSearch, SameSeedSameReport) {
  const TestSuite ts = generate_suite(testing::load_benchmark("ghz_3"));
  const Circuit faulty = replace_gate(*ts.reference, 1, make_gate(GateKind::CX, {1, 2}));
  const RepairConfig cfg = eval_config(300, 7);
  EXPECT_EQ(stripped(random_search(faulty, ts, cfg), cfg),
            stripped(random_search(faulty, ts, cfg), cfg));
}

TEST(RandomSearch, BellEventuallyRepaired) {
  const TestSuite ts = generate_suite(bell());
  const RepairReport r = random_search(bell_h_to_x(), ts, eval_config(100000, 3));
  ASSERT_TRUE(r.repaired_ok());
  EXPECT_EQ(r.engine, "random_search");
  EXPECT_EQ(fitness(*r.repaired, ts).failed_count, 0u);
  EXPECT_EQ(r.localization_evals, 0u);
}

TEST(RandomSearch, NoBudgetAfterBaseline) {
  const TestSuite ts = generate_suite(bell());
  const RepairReport r = random_search(bell_h_to_x(), ts, eval_config(1));
  EXPECT_FALSE(r.repaired_ok());
  EXPECT_EQ(r.patches_tried, 0u);
  EXPECT_EQ(r.evals_used, 1u);
  EXPECT_EQ(r.improvement_pct, 0.0);
}

}  // namespace
}  // namespace qrep

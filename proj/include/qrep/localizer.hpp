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
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "qrep/budget.hpp"
#include "qrep/circuit.hpp"
#include "qrep/errors.hpp"
#include "qrep/gate.hpp"
#include "qrep/testkit.hpp"

namespace qrep {

/// Per-gate suspiciousness of the circuit under repair. Every repairable
/// gate starts at 0; scores may go negative.
class SuspiciousnessTable {
 public:
  SuspiciousnessTable() = default;
  explicit SuspiciousnessTable(const Circuit& c_init) {
    gates_.reserve(c_init.size());
    for (const auto& g : c_init.gates()) gates_.push_back(GateId::of(g));
    scores_.assign(gates_.size(), 0.0);
  }

  std::size_t size() const { return gates_.size(); }
  bool contains(const GateId& g) const { return g.position < gates_.size(); }
  const GateId& gate(std::size_t position) const { return gates_.at(position); }
  double score(std::size_t position) const { return scores_.at(position); }
  double score(const GateId& g) const { return score(g.position); }

  /// sus(g) += delta
  void add(std::size_t position, double delta) { scores_.at(position) += delta; }

  /// Positions ordered by score, highest first; ties by ascending position.
  std::vector<std::size_t> ranking() const {
    std::vector<std::size_t> order(gates_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return scores_[a] > scores_[b];
    });
    return order;
  }

  /// The `k` highest-ranked positions.
  std::vector<std::size_t> top(std::size_t k) const {
    auto r = ranking();
    r.resize(std::min(k, r.size()));
    return r;
  }

 private:
  std::vector<GateId> gates_;
  std::vector<double> scores_;
};

/// Where `gate` sits in the ranking: 0 for the most suspicious gate, 100 for
/// the least.
inline double rank_percentile(const SuspiciousnessTable& table, const GateId& gate) {
  if (!table.contains(gate)) {
    throw UnknownGate("gate " + gate.label() + " is not in the suspiciousness table");
  }
  const auto order = table.ranking();
  if (order.size() <= 1) return 0.0;
  const auto idx = static_cast<std::size_t>(
      std::find(order.begin(), order.end(), gate.position) - order.begin());
  return static_cast<double>(idx) / static_cast<double>(order.size() - 1) * 100.0;
}

struct LocalizationResult {
  SuspiciousnessTable table;
  // Fitness of the circuit with each gate removed; NaN where not evaluated.
  std::vector<double> removal_fitness;
  // Set when one removal passes the whole suite.
  std::optional<Circuit> repaired;
  std::optional<std::size_t> repaired_by;
  std::size_t evaluations = 0;
  double wall_seconds = 0;
  // False when the budget ran out before every gate was visited.
  bool complete = true;
};

/// Removes one gate at a time from `c_init` in position order, scoring each
/// by how much its removal lowers fitness below `baseline`. Stops at the
/// first removal that passes the whole suite.
inline LocalizationResult localize(
    const Circuit& c_init, Evaluator& eval, const FitnessScore& baseline) {
  if (baseline.all_passed()) throw NoFailingTest();
  const auto t0 = std::chrono::steady_clock::now();
  LocalizationResult out;
  out.table = SuspiciousnessTable(c_init);
  out.removal_fitness.assign(c_init.size(), std::numeric_limits<double>::quiet_NaN());
  const std::size_t evals_before = eval.evaluations();
  for (std::size_t pos = 0; pos < c_init.size(); ++pos) {
    if (!eval.can_evaluate()) {
      out.complete = false;
      break;
    }
    Circuit candidate = remove_gate(c_init, pos);
    const FitnessScore f = eval(candidate);
    out.removal_fitness[pos] = f.value;
    if (f.all_passed()) {
      out.repaired = std::move(candidate);
      out.repaired_by = pos;
      break;
    }
    out.table.add(pos, baseline.value - f.value);
  }
  out.evaluations = eval.evaluations() - evals_before;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Unbudgeted localisation against a test suite.
inline LocalizationResult localize(
    const Circuit& c_init, const TestSuite& ts, const FitnessScore& baseline,
    const EvalConfig& cfg = {}) {
  Evaluator eval(make_fitness_fn(ts, cfg), Budget::unlimited());
  return localize(c_init, eval, baseline);
}

}  // namespace qrep

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
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "qrep/circuit.hpp"
#include "qrep/errors.hpp"
#include "qrep/testkit.hpp"

namespace qrep {

/// Total search budget, in wall-clock seconds or in fitness evaluations.
struct Budget {
  enum class Unit { Seconds, Evaluations };

  Unit unit = Unit::Evaluations;
  double amount = std::numeric_limits<double>::infinity();

  static Budget seconds(double s) { return {Unit::Seconds, s}; }
  static Budget evaluations(std::size_t n) {
    return {Unit::Evaluations, static_cast<double>(n)};
  }
  static Budget unlimited() { return {}; }

  bool counts_evaluations() const { return unit == Unit::Evaluations; }
  std::string unit_name() const {
    return unit == Unit::Seconds ? "seconds" : "evaluations";
  }
};

/// Wraps a fitness oracle, counts every call and charges it to a budget.
class Evaluator {
 public:
  Evaluator(FitnessFn fn, Budget budget)
      : fn_(std::move(fn)),
        budget_(budget),
        start_(std::chrono::steady_clock::now()) {}

  FitnessScore operator()(const Circuit& c) {
    ++evaluations_;
    return fn_(c);
  }

  std::size_t evaluations() const { return evaluations_; }

  double elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  /// Consumption in the budget's own unit.
  double used() const {
    return budget_.counts_evaluations() ? static_cast<double>(evaluations_)
                                        : elapsed_seconds();
  }

  double remaining() const { return std::max(0.0, budget_.amount - used()); }

  /// Whether one more evaluation fits into the budget.
  bool can_evaluate() const {
    return budget_.counts_evaluations() ? remaining() >= 1.0 : remaining() > 0.0;
  }

  /// Evaluations still available, or `fallback` for time budgets.
  std::size_t evaluations_left(std::size_t fallback) const {
    if (!budget_.counts_evaluations()) return fallback;
    const double r = remaining();
    if (r >= static_cast<double>(std::numeric_limits<std::size_t>::max())) {
      return fallback;
    }
    return std::min(fallback, static_cast<std::size_t>(r));
  }

  const Budget& budget() const { return budget_; }

 private:
  FitnessFn fn_;
  Budget budget_;
  std::chrono::steady_clock::time_point start_;
  std::size_t evaluations_ = 0;
};

}  // namespace qrep

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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrep/circuit.hpp"
#include "qrep/errors.hpp"
#include "qrep/rng.hpp"
#include "qrep/simulator.hpp"

namespace qrep {

inline constexpr unsigned kDefaultMaxSuiteQubits = 16;

struct TestCase {
  std::string id;
  std::size_t input = 0;
  MeasBasis basis = MeasBasis::Z;
  Distribution expected;
};

struct TestSuite {
  unsigned num_qubits = 0;
  std::vector<TestCase> cases;
  std::optional<Circuit> reference;

  std::size_t size() const { return cases.size(); }
};

/// `<input bitstring>/<basis>`, e.g. `01/Z`.
inline std::string test_id(std::size_t input, unsigned num_qubits, MeasBasis basis) {
  return to_bitstring(input, num_qubits) + "/" + basis_letter(basis);
}

/// One case per (classical input, basis) pair: 3 * 2^q cases, input-major,
/// bases in X, Y, Z order. Expected distributions come from `reference`.
inline TestSuite generate_suite(
    const Circuit& reference, unsigned max_qubits = kDefaultMaxSuiteQubits) {
  const unsigned n = reference.num_qubits();
  if (n > max_qubits) {
    throw TooWide(
        "test suite for " + std::to_string(n) + " qubits exceeds the limit of " +
        std::to_string(max_qubits));
  }
  TestSuite ts;
  ts.num_qubits = n;
  ts.reference = reference;
  const std::size_t inputs = std::size_t{1} << n;
  ts.cases.reserve(inputs * 3);
  for (std::size_t in = 0; in < inputs; ++in) {
    StateVector base = simulate(reference, in);
    for (MeasBasis b : {MeasBasis::X, MeasBasis::Y, MeasBasis::Z}) {
      StateVector sv = base;
      sv.rotate_to(b);
      ts.cases.push_back({test_id(in, n, b), in, b, sv.probabilities()});
    }
  }
  return ts;
}

/// Hellinger distance, 0 for identical and 1 for disjoint distributions.
inline double hellinger(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw WidthMismatch("distributions range over different outcome spaces");
  }
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(std::max(p.probs[i], 0.0)) -
                     std::sqrt(std::max(q.probs[i], 0.0));
    s += d * d;
  }
  return std::clamp(std::sqrt(s / 2.0), 0.0, 1.0);
}

struct Verdict {
  bool passed = false;
  double hellinger = 0;
  bool wrong_output = false;
};

inline constexpr double kDefaultTauFail = 0.1;
inline constexpr double kDefaultEpsZero = 1e-9;

/// Two-rule oracle: a case fails when an outcome shows up that the
/// expectation rules out, or when the distributions are further apart than
/// `tau_fail`.
inline Verdict judge(
    const Distribution& observed, const TestCase& tc,
    double tau_fail = kDefaultTauFail, double eps_zero = kDefaultEpsZero) {
  if (observed.size() != tc.expected.size()) {
    throw WidthMismatch("observed distribution does not match test case " + tc.id);
  }
  Verdict v;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed.probs[i] > eps_zero && tc.expected.probs[i] <= eps_zero) {
      v.wrong_output = true;
      break;
    }
  }
  v.hellinger = hellinger(observed, tc.expected);
  v.passed = !v.wrong_output && v.hellinger <= tau_fail;
  return v;
}

enum class ShotsMode { Exact, Sampled };

/// How observed distributions are produced and judged.
struct EvalConfig {
  ShotsMode mode = ShotsMode::Exact;
  double tau_fail = kDefaultTauFail;
  double eps_zero = kDefaultEpsZero;
  // Sampled mode only. Unset means 2^q * 2.
  std::optional<std::size_t> shots;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // Below this many amplitude updates per evaluation the suite runs on the
  // calling thread.
  std::size_t parallel_min_work = std::size_t{1} << 16;

  std::size_t shots_for(unsigned num_qubits) const {
    return shots.value_or(default_shots(num_qubits));
  }

  /// Sampled mode widens the threshold by 2/sqrt(shots) for shot noise.
  double effective_tau(unsigned num_qubits) const {
    if (mode == ShotsMode::Exact) return tau_fail;
    return tau_fail + 2.0 / std::sqrt(static_cast<double>(shots_for(num_qubits)));
  }
};

/// fit(C) = #failed + sum of Hellinger distances over the whole suite.
struct FitnessScore {
  std::size_t failed_count = 0;
  double hellinger_sum = 0;
  double value = 0;
  std::vector<Verdict> verdicts;

  bool all_passed() const { return failed_count == 0; }
};

/// Evaluates every case of `ts` against `c`. Cases sharing an input reuse one
/// simulation. The final sum runs in case order whatever the thread count.
inline FitnessScore fitness(
    const Circuit& c, const TestSuite& ts, const EvalConfig& cfg = {}) {
  if (c.num_qubits() != ts.num_qubits) {
    throw WidthMismatch(
        "circuit has " + std::to_string(c.num_qubits()) +
        " qubits but the test suite expects " + std::to_string(ts.num_qubits));
  }
  const std::size_t n_cases = ts.cases.size();
  std::vector<Verdict> verdicts(n_cases);
  const double tau = cfg.effective_tau(ts.num_qubits);

  // Contiguous runs of cases that share an input.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < n_cases;) {
    std::size_t j = i + 1;
    while (j < n_cases && ts.cases[j].input == ts.cases[i].input) ++j;
    groups.emplace_back(i, j);
    i = j;
  }

  auto run_group = [&](std::size_t gi) {
    const auto [begin, end] = groups[gi];
    const StateVector base = simulate(c, ts.cases[begin].input);
    for (std::size_t k = begin; k < end; ++k) {
      const TestCase& tc = ts.cases[k];
      StateVector sv = base;
      sv.rotate_to(tc.basis);
      Distribution observed = sv.probabilities();
      if (cfg.mode == ShotsMode::Sampled) {
        observed = sample(observed, cfg.shots_for(ts.num_qubits), mix_seed(cfg.seed, k));
      }
      verdicts[k] = judge(observed, tc, tau, cfg.eps_zero);
    }
  };

  const std::size_t work =
      n_cases * (c.size() + ts.num_qubits) * (std::size_t{1} << ts.num_qubits);
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(cfg.threads, groups.size()));
  if (threads <= 1 || work < cfg.parallel_min_work) {
    for (std::size_t g = 0; g < groups.size(); ++g) run_group(g);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t g = t; g < groups.size(); g += threads) run_group(g);
      });
    }
  }

  FitnessScore score;
  for (const Verdict& v : verdicts) {
    if (!v.passed) ++score.failed_count;
    score.hellinger_sum += v.hellinger;
  }
  score.value = static_cast<double>(score.failed_count) + score.hellinger_sum;
  score.verdicts = std::move(verdicts);
  return score;
}

/// The fitness oracle consumed by localisation and repair. Tests substitute
/// probe wrappers to count calls.
using FitnessFn = std::function<FitnessScore(const Circuit&)>;

inline FitnessFn make_fitness_fn(const TestSuite& ts, const EvalConfig& cfg = {}) {
  return [&ts, cfg](const Circuit& c) { return fitness(c, ts, cfg); };
}

/// Parses an expected-distribution file `{test_id: {bitstring: prob}}`.
/// Each distribution must sum to 1 within 1e-6 and is renormalised.
inline TestSuite suite_from_expected_json(const nlohmann::json& j) {
  if (!j.is_object() || j.empty()) {
    throw InvalidConfig("expected-distribution file must be a non-empty object");
  }
  TestSuite ts;
  for (const auto& [id, dist] : j.items()) {
    const auto slash = id.find('/');
    if (slash == std::string::npos || slash + 2 != id.size()) {
      throw InvalidConfig("malformed test id '" + id + "' (want <bits>/<X|Y|Z>)");
    }
    const std::string bits = id.substr(0, slash);
    const char b = id[slash + 1];
    MeasBasis basis;
    if (b == 'X') {
      basis = MeasBasis::X;
    } else if (b == 'Y') {
      basis = MeasBasis::Y;
    } else if (b == 'Z') {
      basis = MeasBasis::Z;
    } else {
      throw InvalidConfig("unknown basis in test id '" + id + "'");
    }
    const auto n = static_cast<unsigned>(bits.size());
    if (ts.num_qubits == 0) ts.num_qubits = n;
    if (n != ts.num_qubits || n == 0) {
      throw InvalidConfig("test id '" + id + "' has inconsistent width");
    }
    std::map<std::string, double> entries;
    for (const auto& [outcome, p] : dist.items()) entries[outcome] = p.get<double>();
    Distribution d = Distribution::from_map(n, entries);
    const double total = d.total();
    if (std::abs(total - 1.0) > 1e-6) {
      throw InvalidConfig("expected distribution of '" + id + "' sums to " +
                          std::to_string(total));
    }
    for (double& p : d.probs) p /= total;
    ts.cases.push_back({id, from_bitstring(bits), basis, std::move(d)});
  }
  std::stable_sort(ts.cases.begin(), ts.cases.end(), [](const auto& a, const auto& b) {
    if (a.input != b.input) return a.input < b.input;
    return a.basis < b.basis;
  });
  return ts;
}

inline nlohmann::ordered_json suite_to_expected_json(const TestSuite& ts) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& tc : ts.cases) {
    nlohmann::ordered_json d = nlohmann::ordered_json::object();
    for (const auto& [bits, p] : tc.expected.to_map(0.0)) d[bits] = p;
    j[tc.id] = d;
  }
  return j;
}

}  // namespace qrep

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
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "qrep/errors.hpp"

namespace qrep {

struct OptBudget {
  std::size_t max_evals = 20;
  // Final trust-region radius; the search stops once the radius shrinks
  // below it.
  double tolerance = 1e-3;
  double initial_radius = std::numbers::pi / 4;
};

struct OptResult {
  std::vector<double> best;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Maps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2 * std::numbers::pi;
  double r = std::fmod(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  if (r > std::numbers::pi) r -= two_pi;
  return r;
}

namespace opt_detail {

// Solves A x = b (n <= 3) by Gaussian elimination with partial pivoting.
// Returns nullopt when A is numerically singular relative to `scale`.
inline std::optional<std::vector<double>> solve(
    std::vector<std::vector<double>> a, std::vector<double> b, double scale) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-10 * scale) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace opt_detail

/// Derivative-free minimisation of a periodic objective over 1 to 3 angles.
///
/// Keeps a simplex of n+1 points, fits a linear model through it and steps
/// a trust-region radius down the model gradient. Failed steps halve the
/// radius and rebuild the simplex around the incumbent. Never calls the
/// objective more than `budget.max_evals` times; `stop` is polled after
/// every call and ends the search early when it returns true.
inline OptResult minimize(
    const Objective& objective, std::vector<double> init, const OptBudget& budget,
    const std::function<bool()>& stop = {}) {
  const std::size_t n = init.size();
  if (n == 0 || n > 3) throw InvalidConfig("minimize supports 1 to 3 parameters");
  if (budget.max_evals < 1) throw InvalidConfig("optimizer needs max_evals >= 1");

  OptResult res;
  bool halted = false;
  auto eval = [&](std::vector<double> x) -> std::optional<double> {
    if (halted || res.evals >= budget.max_evals) return std::nullopt;
    for (double& v : x) v = wrap_angle(v);
    const double f = objective(x);
    ++res.evals;
    if (f < res.value) {
      res.value = f;
      res.best = x;
    }
    if (stop && stop()) halted = true;
    return f;
  };

  struct Vertex {
    std::vector<double> x;
    double f;
  };
  std::vector<Vertex> simplex;
  const auto f0 = eval(init);
  simplex.push_back({res.best, *f0});
  double rho = budget.initial_radius;

  // Rebuilds the simplex as best + rho * e_i. False when out of evaluations.
  auto rebuild = [&]() {
    const Vertex best = *std::min_element(
        simplex.begin(), simplex.end(), [](const auto& a, const auto& b) { return a.f < b.f; });
    simplex.assign(1, best);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> x = best.x;
      x[i] += rho;
      const auto f = eval(x);
      if (!f) return false;
      simplex.push_back({x, *f});
    }
    return true;
  };

  if (!rebuild()) return res;
  while (rho >= budget.tolerance) {
    const auto b_it = std::min_element(
        simplex.begin(), simplex.end(), [](const auto& a, const auto& b) { return a.f < b.f; });
    const Vertex best = *b_it;

    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const auto& v : simplex) {
      if (&v == &*b_it) continue;
      std::vector<double> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = v.x[i] - best.x[i];
      rows.push_back(std::move(d));
      rhs.push_back(v.f - best.f);
    }
    const auto grad = opt_detail::solve(rows, rhs, std::pow(rho, static_cast<double>(n)));
    if (!grad) {
      if (!rebuild()) break;
      continue;
    }
    double gnorm = 0;
    for (double g : *grad) gnorm += g * g;
    gnorm = std::sqrt(gnorm);
    if (gnorm < 1e-12) {
      rho /= 2;
      if (rho < budget.tolerance || !rebuild()) break;
      continue;
    }

    std::vector<double> trial = best.x;
    for (std::size_t i = 0; i < n; ++i) trial[i] -= rho * (*grad)[i] / gnorm;
    const auto ft = eval(trial);
    if (!ft) break;

    if (*ft < best.f) {
      auto worst = std::max_element(
          simplex.begin(), simplex.end(), [](const auto& a, const auto& b) { return a.f < b.f; });
      *worst = {trial, *ft};
    } else {
      rho /= 2;
      if (rho < budget.tolerance || !rebuild()) break;
    }
  }
  return res;
}

}  // namespace qrep

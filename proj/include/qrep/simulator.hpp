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
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qrep/circuit.hpp"
#include "qrep/errors.hpp"
#include "qrep/gate.hpp"
#include "qrep/rng.hpp"

namespace qrep {

using Complex = std::complex<double>;
using Matrix2 = std::array<Complex, 4>;  // row-major

inline constexpr unsigned kMaxSimQubits = 24;

enum class MeasBasis { X, Y, Z };

inline char basis_letter(MeasBasis b) {
  switch (b) {
    case MeasBasis::X:
      return 'X';
    case MeasBasis::Y:
      return 'Y';
    case MeasBasis::Z:
      return 'Z';
  }
  return '?';
}

/// Formats an outcome index as a bitstring with qubit 0 rightmost.
inline std::string to_bitstring(std::size_t index, unsigned num_qubits) {
  std::string s(num_qubits, '0');
  for (unsigned q = 0; q < num_qubits; ++q) {
    if ((index >> q) & 1U) s[num_qubits - 1 - q] = '1';
  }
  return s;
}

inline std::size_t from_bitstring(std::string_view bits) {
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw InvalidConfig("invalid bitstring '" + std::string(bits) + "'");
    }
    index = (index << 1) | static_cast<std::size_t>(c == '1');
  }
  return index;
}

/// Probability of every computational-basis outcome, indexed by outcome
/// (little-endian: bit q of the index is qubit q).
struct Distribution {
  unsigned num_qubits = 0;
  std::vector<double> probs;

  Distribution() = default;
  explicit Distribution(unsigned n)
      : num_qubits(n), probs(std::size_t{1} << n, 0.0) {}

  static Distribution point(unsigned n, std::size_t outcome) {
    Distribution d(n);
    d.probs.at(outcome) = 1.0;
    return d;
  }

  static Distribution from_map(
      unsigned n, const std::map<std::string, double>& entries) {
    Distribution d(n);
    for (const auto& [bits, p] : entries) {
      if (bits.size() != n) {
        throw InvalidConfig(
            "bitstring '" + bits + "' does not have " + std::to_string(n) +
            " bits");
      }
      d.probs[from_bitstring(bits)] = p;
    }
    return d;
  }

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }

  double total() const {
    double s = 0;
    for (double p : probs) s += p;
    return s;
  }

  /// Nonzero entries keyed by bitstring.
  std::map<std::string, double> to_map(double eps = 0.0) const {
    std::map<std::string, double> m;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] > eps) m[to_bitstring(i, num_qubits)] = probs[i];
    }
    return m;
  }

  bool operator==(const Distribution&) const = default;
};

namespace gates {

inline Matrix2 matrix(GateKind kind, const std::vector<double>& params) {
  using namespace std::complex_literals;
  const double r = std::numbers::sqrt2 / 2.0;
  switch (kind) {
    case GateKind::Id:
      return {1, 0, 0, 1};
    case GateKind::X:
    case GateKind::CX:
    case GateKind::CCX:
      return {0, 1, 1, 0};
    case GateKind::Y:
      return {0, -1i, 1i, 0};
    case GateKind::Z:
    case GateKind::CZ:
      return {1, 0, 0, -1};
    case GateKind::H:
      return {r, r, r, -r};
    case GateKind::S:
      return {1, 0, 0, 1i};
    case GateKind::Sdg:
      return {1, 0, 0, -1i};
    case GateKind::T:
      return {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)};
    case GateKind::Tdg:
      return {1, 0, 0, std::polar(1.0, -std::numbers::pi / 4)};
    case GateKind::RX: {
      const double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
      return {c, Complex(0, -s), Complex(0, -s), c};
    }
    case GateKind::RY: {
      const double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
      return {c, -s, s, c};
    }
    case GateKind::RZ:
    case GateKind::CRZ:
      return {std::polar(1.0, -params[0] / 2), 0, 0,
              std::polar(1.0, params[0] / 2)};
    case GateKind::P:
    case GateKind::CP:
      return {1, 0, 0, std::polar(1.0, params[0])};
    case GateKind::U: {
      const double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
      return {c, -std::polar(s, params[2]), std::polar(s, params[1]),
              std::polar(c, params[1] + params[2])};
    }
    default:
      break;
  }
  throw InvalidGate(std::string("no 2x2 matrix for ") + std::string(name_of(kind)));
}

}  // namespace gates

/// Pure state of `num_qubits` qubits. Gate kernels update amplitudes in
/// place without building full matrices.
class StateVector {
 public:
  explicit StateVector(unsigned num_qubits, std::size_t basis_state = 0)
      : num_qubits_(num_qubits) {
    if (num_qubits == 0 || num_qubits > kMaxSimQubits) {
      throw TooWide(
          "cannot simulate " + std::to_string(num_qubits) + " qubits (max " +
          std::to_string(kMaxSimQubits) + ")");
    }
    amps_.assign(std::size_t{1} << num_qubits, Complex(0, 0));
    if (basis_state >= amps_.size()) {
      throw WidthMismatch(
          "input state " + std::to_string(basis_state) + " does not fit in " +
          std::to_string(num_qubits) + " qubits");
    }
    amps_[basis_state] = 1.0;
  }

  unsigned num_qubits() const { return num_qubits_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }

  double norm_squared() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  /// Applies a 2x2 unitary to `target` on the subspace where every bit in
  /// `control_mask` is set.
  void apply_matrix(const Matrix2& m, unsigned target, std::size_t control_mask = 0) {
    const std::size_t bit = std::size_t{1} << target;
    const std::size_t n = amps_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if ((i & bit) || (i & control_mask) != control_mask) continue;
      const std::size_t j = i | bit;
      const Complex a0 = amps_[i];
      const Complex a1 = amps_[j];
      amps_[i] = m[0] * a0 + m[1] * a1;
      amps_[j] = m[2] * a0 + m[3] * a1;
    }
  }

  /// Multiplies amplitudes whose `mask` bits are all set by `phase`.
  void apply_phase(std::size_t mask, Complex phase) {
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & mask) == mask) amps_[i] *= phase;
    }
  }

  void apply_swap(unsigned a, unsigned b) {
    const std::size_t ba = std::size_t{1} << a, bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & ba) && !(i & bb)) std::swap(amps_[i], amps_[i ^ ba ^ bb]);
    }
  }

  void apply_x(unsigned target, std::size_t control_mask = 0) {
    const std::size_t bit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (!(i & bit) && (i & control_mask) == control_mask) {
        std::swap(amps_[i], amps_[i | bit]);
      }
    }
  }

  void apply(const GateApp& g) {
    const auto& q = g.qubits;
    auto mask = [](unsigned b) { return std::size_t{1} << b; };
    switch (g.kind) {
      case GateKind::Id:
        return;
      case GateKind::X:
        return apply_x(q[0]);
      case GateKind::Z:
        return apply_phase(mask(q[0]), -1.0);
      case GateKind::S:
        return apply_phase(mask(q[0]), Complex(0, 1));
      case GateKind::Sdg:
        return apply_phase(mask(q[0]), Complex(0, -1));
      case GateKind::T:
        return apply_phase(mask(q[0]), std::polar(1.0, std::numbers::pi / 4));
      case GateKind::Tdg:
        return apply_phase(mask(q[0]), std::polar(1.0, -std::numbers::pi / 4));
      case GateKind::P:
        return apply_phase(mask(q[0]), std::polar(1.0, g.params[0]));
      case GateKind::Y:
      case GateKind::H:
      case GateKind::RX:
      case GateKind::RY:
      case GateKind::RZ:
      case GateKind::U:
        return apply_matrix(gates::matrix(g.kind, g.params), q[0]);
      case GateKind::CX:
        return apply_x(q[1], mask(q[0]));
      case GateKind::CZ:
        return apply_phase(mask(q[0]) | mask(q[1]), -1.0);
      case GateKind::CP:
        return apply_phase(mask(q[0]) | mask(q[1]), std::polar(1.0, g.params[0]));
      case GateKind::CRZ:
        return apply_matrix(gates::matrix(g.kind, g.params), q[1], mask(q[0]));
      case GateKind::Swap:
        return apply_swap(q[0], q[1]);
      case GateKind::CCX:
        return apply_x(q[2], mask(q[0]) | mask(q[1]));
      case GateKind::Measure:
      case GateKind::Barrier:
        return;
    }
  }

  /// Rotates every qubit so that a computational-basis readout measures in
  /// `basis` (X: H; Y: S-dagger then H; Z: nothing).
  void rotate_to(MeasBasis basis) {
    if (basis == MeasBasis::Z) return;
    const Matrix2 h = gates::matrix(GateKind::H, {});
    for (unsigned q = 0; q < num_qubits_; ++q) {
      if (basis == MeasBasis::Y) {
        apply_phase(std::size_t{1} << q, Complex(0, -1));
      }
      apply_matrix(h, q);
    }
  }

  /// Born-rule probabilities of the computational-basis outcomes.
  Distribution probabilities() const {
    Distribution d(num_qubits_);
    for (std::size_t i = 0; i < amps_.size(); ++i) d.probs[i] = std::norm(amps_[i]);
    return d;
  }

 private:
  unsigned num_qubits_;
  std::vector<Complex> amps_;
};

/// Prepares |input>, applies every gate of `c` and returns the final state.
inline StateVector simulate(const Circuit& c, std::size_t input) {
  StateVector sv(c.num_qubits(), input);
  for (const auto& g : c.gates()) sv.apply(g);
  return sv;
}

/// Exact outcome distribution of `c` run on basis state `input` and read out
/// in `basis`.
inline Distribution run_exact(const Circuit& c, std::size_t input, MeasBasis basis) {
  StateVector sv = simulate(c, input);
  sv.rotate_to(basis);
  return sv.probabilities();
}

/// Empirical distribution of `shots` independent draws from `d`.
inline Distribution sample(const Distribution& d, std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw InvalidConfig("shots must be at least 1");
  std::vector<double> cumulative(d.size());
  double acc = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    acc += d.probs[i];
    cumulative[i] = acc;
  }
  Rng rng(seed);
  std::vector<std::size_t> counts(d.size(), 0);
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    ++counts[static_cast<std::size_t>(it - cumulative.begin())];
  }
  Distribution out(d.num_qubits);
  for (std::size_t i = 0; i < d.size(); ++i) {
    out.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
  }
  return out;
}

/// 2^q * 2 shots.
inline std::size_t default_shots(unsigned num_qubits) {
  return (std::size_t{1} << num_qubits) * 2;
}

}  // namespace qrep

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

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qrep/errors.hpp"

namespace qrep {

/// The supported gate alphabet. Measure and Barrier are carried by the
/// circuit but never appear in its repairable gate list.
enum class GateKind {
  Id,
  X,
  Y,
  Z,
  H,
  S,
  Sdg,
  T,
  Tdg,
  RX,
  RY,
  RZ,
  P,
  U,
  CX,
  CZ,
  CP,
  CRZ,
  Swap,
  CCX,
  Measure,
  Barrier,
};

struct GateInfo {
  GateKind kind;
  std::string_view name;
  unsigned num_qubits;
  unsigned param_count;
  // Invariant under permutation of the qubit operands.
  bool symmetric;
};

inline constexpr std::array<GateInfo, 22> kGateTable{{
    {GateKind::Id, "id", 1, 0, false},
    {GateKind::X, "x", 1, 0, false},
    {GateKind::Y, "y", 1, 0, false},
    {GateKind::Z, "z", 1, 0, false},
    {GateKind::H, "h", 1, 0, false},
    {GateKind::S, "s", 1, 0, false},
    {GateKind::Sdg, "sdg", 1, 0, false},
    {GateKind::T, "t", 1, 0, false},
    {GateKind::Tdg, "tdg", 1, 0, false},
    {GateKind::RX, "rx", 1, 1, false},
    {GateKind::RY, "ry", 1, 1, false},
    {GateKind::RZ, "rz", 1, 1, false},
    {GateKind::P, "p", 1, 1, false},
    {GateKind::U, "u", 1, 3, false},
    {GateKind::CX, "cx", 2, 0, false},
    {GateKind::CZ, "cz", 2, 0, true},
    {GateKind::CP, "cp", 2, 1, true},
    {GateKind::CRZ, "crz", 2, 1, false},
    {GateKind::Swap, "swap", 2, 0, true},
    {GateKind::CCX, "ccx", 3, 0, false},
    {GateKind::Measure, "measure", 1, 0, false},
    {GateKind::Barrier, "barrier", 0, 0, false},
}};

inline const GateInfo& info(GateKind kind) {
  return kGateTable[static_cast<std::size_t>(kind)];
}

inline std::string_view name_of(GateKind kind) { return info(kind).name; }
inline unsigned arity(GateKind kind) { return info(kind).num_qubits; }
inline unsigned param_count(GateKind kind) { return info(kind).param_count; }
inline bool is_parametric(GateKind kind) { return param_count(kind) > 0; }

/// Gates that can sit in a circuit's repairable gate list.
inline bool is_unitary_kind(GateKind kind) {
  return kind != GateKind::Measure && kind != GateKind::Barrier;
}

/// Looks up a gate by its qelib1 name. `u3`, `u1` and `cu1` are accepted as
/// aliases of `u`, `p` and `cp`.
inline std::optional<GateKind> kind_from_name(std::string_view name) {
  for (const auto& g : kGateTable) {
    if (g.name == name) return g.kind;
  }
  if (name == "u3") return GateKind::U;
  if (name == "u1") return GateKind::P;
  if (name == "cu1") return GateKind::CP;
  if (name == "cnot") return GateKind::CX;
  return std::nullopt;
}

/// One gate application inside a circuit.
struct GateApp {
  GateKind kind = GateKind::Id;
  std::vector<unsigned> qubits;
  std::vector<double> params;
  // 0-based index in the circuit's gate list; maintained by Circuit.
  std::size_t position = 0;

  /// Same kind, qubits and parameters. Position is ignored.
  bool same_operation(const GateApp& other) const {
    return kind == other.kind && qubits == other.qubits &&
           params == other.params;
  }

  bool operator==(const GateApp&) const = default;
};

inline GateApp make_gate(
    GateKind kind, std::vector<unsigned> qubits,
    std::vector<double> params = {}) {
  return GateApp{kind, std::move(qubits), std::move(params), 0};
}

/// Checks the structural invariants of a gate against a register width.
inline void validate_gate(const GateApp& g, unsigned num_qubits) {
  if (!is_unitary_kind(g.kind)) {
    throw InvalidGate(
        std::string(name_of(g.kind)) + " cannot appear in the gate list");
  }
  if (g.qubits.size() != arity(g.kind)) {
    throw InvalidGate(
        std::string(name_of(g.kind)) + " expects " +
        std::to_string(arity(g.kind)) + " qubit(s), got " +
        std::to_string(g.qubits.size()));
  }
  if (g.params.size() != param_count(g.kind)) {
    throw InvalidGate(
        std::string(name_of(g.kind)) + " expects " +
        std::to_string(param_count(g.kind)) + " parameter(s), got " +
        std::to_string(g.params.size()));
  }
  for (std::size_t i = 0; i < g.qubits.size(); ++i) {
    if (g.qubits[i] >= num_qubits) {
      throw QubitOutOfRange(
          "qubit " + std::to_string(g.qubits[i]) + " out of range for " +
          std::to_string(num_qubits) + "-qubit circuit");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (g.qubits[i] == g.qubits[j]) {
        throw InvalidGate(
            std::string(name_of(g.kind)) + " uses qubit " +
            std::to_string(g.qubits[i]) + " twice");
      }
    }
  }
  for (double a : g.params) {
    if (!std::isfinite(a)) throw InvalidGate("non-finite gate angle");
  }
}

/// Short human-readable form, e.g. `cx(0,1)` or `rz[1.5708](2)`.
inline std::string describe(GateKind kind, const std::vector<unsigned>& qubits,
                            const std::vector<double>& params = {}) {
  std::ostringstream out;
  out << name_of(kind);
  if (!params.empty()) {
    out << '[';
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (i) out << ',';
      out << params[i];
    }
    out << ']';
  }
  out << '(';
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (i) out << ',';
    out << qubits[i];
  }
  out << ')';
  return out.str();
}

inline std::string describe(const GateApp& g) {
  return describe(g.kind, g.qubits, g.params);
}

/// Stable identity of a gate of the circuit under repair. Keyed by the
/// gate's position in the original circuit, so it survives edits made to
/// throwaway candidate copies.
struct GateId {
  std::size_t position = 0;
  GateKind kind = GateKind::Id;
  std::vector<unsigned> qubits;

  static GateId of(const GateApp& g) { return {g.position, g.kind, g.qubits}; }

  std::string label() const {
    return std::to_string(position) + ":" + describe(kind, qubits);
  }

  bool operator==(const GateId& o) const { return position == o.position; }
  auto operator<=>(const GateId& o) const { return position <=> o.position; }
};

}  // namespace qrep

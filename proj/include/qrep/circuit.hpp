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

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qrep/errors.hpp"
#include "qrep/gate.hpp"

namespace qrep {

/// A barrier sitting immediately before the gate at index `before`
/// (or at the end when `before == size()`). Barriers are transparent to
/// simulation and to the repairable-gate index space.
struct Barrier {
  std::size_t before = 0;
  std::vector<unsigned> qubits;

  bool operator==(const Barrier&) const = default;
};

/// Ordered list of gate applications over a single quantum register.
///
/// Only unitary gates live in `gates()`; measurements and barriers are kept
/// on the side. The editing functions (`remove_gate`, `insert_gate`,
/// `replace_gate`) return fresh copies and keep positions contiguous.
class Circuit {
 public:
  Circuit() : Circuit(1) {}
  explicit Circuit(unsigned num_qubits, unsigned num_clbits = 0)
      : num_qubits_(num_qubits), num_clbits_(num_clbits) {
    if (num_qubits == 0) {
      throw InvalidGate("a circuit needs at least one qubit");
    }
  }

  unsigned num_qubits() const { return num_qubits_; }
  unsigned num_clbits() const { return num_clbits_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  const std::vector<GateApp>& gates() const { return gates_; }
  const GateApp& gate(std::size_t pos) const {
    if (pos >= gates_.size()) {
      throw IndexOutOfRange(
          "gate index " + std::to_string(pos) + " out of range [0, " +
          std::to_string(gates_.size()) + ")");
    }
    return gates_[pos];
  }

  /// qubit -> classical bit
  const std::map<unsigned, unsigned>& measurements() const {
    return measurements_;
  }
  const std::vector<Barrier>& barriers() const { return barriers_; }

  const std::string& qreg_name() const { return qreg_name_; }
  const std::string& creg_name() const { return creg_name_; }
  void set_register_names(std::string qreg, std::string creg) {
    qreg_name_ = std::move(qreg);
    creg_name_ = std::move(creg);
  }

  // Construction helpers. These mutate in place and are meant for building
  // a circuit before it is shared.

  void set_num_clbits(unsigned n) { num_clbits_ = n; }

  Circuit& append(GateApp g) {
    validate_gate(g, num_qubits_);
    g.position = gates_.size();
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& add(
      GateKind kind, std::vector<unsigned> qubits,
      std::vector<double> params = {}) {
    return append(make_gate(kind, std::move(qubits), std::move(params)));
  }

  Circuit& measure(unsigned qubit, unsigned clbit) {
    if (qubit >= num_qubits_) {
      throw QubitOutOfRange(
          "measured qubit " + std::to_string(qubit) + " does not exist");
    }
    if (clbit >= num_clbits_) {
      throw IndexOutOfRange(
          "classical bit " + std::to_string(clbit) + " does not exist");
    }
    measurements_[qubit] = clbit;
    return *this;
  }

  /// Adds a classical register of matching width if needed and measures
  /// qubit i into bit i.
  Circuit& measure_all() {
    if (num_clbits_ < num_qubits_) num_clbits_ = num_qubits_;
    for (unsigned q = 0; q < num_qubits_; ++q) measurements_[q] = q;
    return *this;
  }

  Circuit& barrier(std::vector<unsigned> qubits) {
    for (unsigned q : qubits) {
      if (q >= num_qubits_) {
        throw QubitOutOfRange(
            "barrier qubit " + std::to_string(q) + " does not exist");
      }
    }
    barriers_.push_back({gates_.size(), std::move(qubits)});
    return *this;
  }

  /// True when positions are exactly 0..size()-1.
  bool positions_contiguous() const {
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      if (gates_[i].position != i) return false;
    }
    return true;
  }

  bool operator==(const Circuit&) const = default;

 private:
  friend Circuit remove_gate(const Circuit&, std::size_t);
  friend Circuit insert_gate(const Circuit&, std::size_t, GateApp);
  friend Circuit replace_gate(const Circuit&, std::size_t, GateApp);

  void renumber(std::size_t from) {
    for (std::size_t i = from; i < gates_.size(); ++i) gates_[i].position = i;
  }

  unsigned num_qubits_;
  unsigned num_clbits_;
  std::vector<GateApp> gates_;
  std::map<unsigned, unsigned> measurements_;
  std::vector<Barrier> barriers_;
  std::string qreg_name_ = "q";
  std::string creg_name_ = "c";
};

inline Circuit remove_gate(const Circuit& c, std::size_t pos) {
  if (pos >= c.size()) {
    throw IndexOutOfRange(
        "cannot remove gate " + std::to_string(pos) + " from a circuit of " +
        std::to_string(c.size()) + " gates");
  }
  Circuit out = c;
  out.gates_.erase(out.gates_.begin() + static_cast<std::ptrdiff_t>(pos));
  out.renumber(pos);
  for (auto& b : out.barriers_) {
    if (b.before > pos) --b.before;
  }
  return out;
}

/// Inserts `g` so that it ends up at index `pos`; `pos == size()` appends.
/// A barrier sitting right before the old gate at `pos` stays in front of
/// the inserted gate.
inline Circuit insert_gate(const Circuit& c, std::size_t pos, GateApp g) {
  if (pos > c.size()) {
    throw IndexOutOfRange(
        "cannot insert at " + std::to_string(pos) + " into a circuit of " +
        std::to_string(c.size()) + " gates");
  }
  validate_gate(g, c.num_qubits());
  Circuit out = c;
  out.gates_.insert(
      out.gates_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(g));
  out.renumber(pos);
  for (auto& b : out.barriers_) {
    if (b.before > pos) ++b.before;
  }
  return out;
}

inline Circuit replace_gate(const Circuit& c, std::size_t pos, GateApp g) {
  if (pos >= c.size()) {
    throw IndexOutOfRange(
        "cannot replace gate " + std::to_string(pos) + " in a circuit of " +
        std::to_string(c.size()) + " gates");
  }
  validate_gate(g, c.num_qubits());
  Circuit out = c;
  g.position = pos;
  out.gates_[pos] = std::move(g);
  return out;
}

}  // namespace qrep

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
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "qrep/circuit.hpp"
#include "qrep/errors.hpp"
#include "qrep/gate.hpp"

namespace qrep {

enum class PatchKind {
  Add,
  Replace,
  // Only produced by localisation; reported alongside generated patches.
  Delete,
};

inline const char* patch_kind_name(PatchKind k) {
  switch (k) {
    case PatchKind::Add:
      return "add";
    case PatchKind::Replace:
      return "replace";
    case PatchKind::Delete:
      return "delete";
  }
  return "?";
}

/// A single gate-level edit of the circuit under repair.
struct Patch {
  PatchKind kind = PatchKind::Add;
  std::size_t position = 0;
  GateKind gate = GateKind::X;
  std::vector<unsigned> qubits;
  // Unset for parametric gates whose angles are still to be searched.
  std::optional<std::vector<double>> params;
  // Gate of the original circuit this edit is linked to for pruning.
  std::optional<GateId> anchor;

  bool needs_params() const { return is_parametric(gate) && !params; }

  /// Same edit regardless of parameters and anchor.
  bool same_edit(const Patch& o) const {
    return kind == o.kind && position == o.position && gate == o.gate &&
           qubits == o.qubits;
  }

  GateApp gate_app(std::span<const double> angles = {}) const {
    std::vector<double> p;
    if (params) {
      p = *params;
    } else if (is_parametric(gate)) {
      p.assign(angles.begin(), angles.end());
      p.resize(param_count(gate), 0.0);
    }
    return make_gate(gate, qubits, std::move(p));
  }

  std::string describe() const {
    std::string s = std::string(patch_kind_name(kind)) + "@" + std::to_string(position);
    if (kind != PatchKind::Delete) s += " " + qrep::describe(gate, qubits);
    return s;
  }
};

struct AppliedPatch {
  Circuit circuit;
  // The gate a Replace or Delete displaced.
  std::optional<GateApp> displaced;
};

/// Applies `p` to a copy of `c`. `angles` fill in unset parameters.
inline AppliedPatch apply_patch(
    const Circuit& c, const Patch& p, std::span<const double> angles = {}) {
  switch (p.kind) {
    case PatchKind::Add:
      return {insert_gate(c, p.position, p.gate_app(angles)), std::nullopt};
    case PatchKind::Replace:
      return {replace_gate(c, p.position, p.gate_app(angles)), c.gate(p.position)};
    case PatchKind::Delete:
      return {remove_gate(c, p.position), c.gate(p.position)};
  }
  throw InvalidGate("unknown patch kind");
}

/// Undoes `apply_patch`, returning the circuit it started from.
inline Circuit revert_patch(const AppliedPatch& applied, const Patch& p) {
  switch (p.kind) {
    case PatchKind::Add:
      return remove_gate(applied.circuit, p.position);
    case PatchKind::Replace:
      return replace_gate(applied.circuit, p.position, applied.displaced.value());
    case PatchKind::Delete:
      return insert_gate(applied.circuit, p.position, applied.displaced.value());
  }
  throw InvalidGate("unknown patch kind");
}

/// Ordered patches with a consumption cursor.
struct PatchQueue {
  std::vector<Patch> patches;
  std::size_t cursor = 0;

  bool empty() const { return cursor >= patches.size(); }
  std::size_t remaining() const { return patches.size() - std::min(cursor, patches.size()); }
  std::size_t size() const { return patches.size(); }
  const Patch& front() const { return patches.at(cursor); }
  Patch pop() { return patches.at(cursor++); }
};

/// x, y, z, h, s, t, rx, ry, rz, cx, cz, swap; two-qubit kinds only when the
/// register has at least two qubits.
inline std::vector<GateKind> default_patch_catalog(unsigned num_qubits) {
  std::vector<GateKind> kinds{GateKind::X,  GateKind::Y,  GateKind::Z,
                              GateKind::H,  GateKind::S,  GateKind::T,
                              GateKind::RX, GateKind::RY, GateKind::RZ};
  if (num_qubits >= 2) {
    kinds.insert(kinds.end(), {GateKind::CX, GateKind::CZ, GateKind::Swap});
  }
  return kinds;
}

/// Every distinct operand list for `kind` on `num_qubits` qubits, in
/// lexicographic order. Symmetric gates get ascending lists only.
inline std::vector<std::vector<unsigned>> qubit_choices(GateKind kind, unsigned num_qubits) {
  std::vector<std::vector<unsigned>> out;
  const unsigned k = arity(kind);
  if (k > num_qubits) return out;
  std::vector<unsigned> cur;
  std::vector<bool> used(num_qubits, false);
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == k) {
      if (!info(kind).symmetric || std::is_sorted(cur.begin(), cur.end())) {
        out.push_back(cur);
      }
      return;
    }
    for (unsigned q = 0; q < num_qubits; ++q) {
      if (used[q]) continue;
      used[q] = true;
      cur.push_back(q);
      self(self);
      cur.pop_back();
      used[q] = false;
    }
  };
  rec(rec);
  return out;
}

namespace patch_detail {

inline std::vector<unsigned> canonical_qubits(GateKind kind, std::vector<unsigned> qs) {
  if (info(kind).symmetric) std::sort(qs.begin(), qs.end());
  return qs;
}

inline std::optional<GateId> add_anchor(const Circuit& c, std::size_t pos) {
  if (c.empty()) return std::nullopt;
  return GateId::of(c.gate(std::min(pos, c.size() - 1)));
}

}  // namespace patch_detail

/// All single-gate Add and Replace edits of `c` over `catalog`: an Add for
/// every insertion point, kind and operand list, and a Replace for every
/// gate, kind and operand list except replacing a fixed gate by itself.
inline PatchQueue generate_patches(const Circuit& c, const std::vector<GateKind>& catalog) {
  PatchQueue pool;
  const unsigned n = c.num_qubits();
  for (GateKind k : catalog) {
    if (!is_unitary_kind(k)) {
      throw InvalidConfig(std::string(name_of(k)) + " cannot be used in patches");
    }
  }
  for (std::size_t pos = 0; pos <= c.size(); ++pos) {
    const auto anchor = patch_detail::add_anchor(c, pos);
    for (GateKind k : catalog) {
      for (auto& qs : qubit_choices(k, n)) {
        Patch p{PatchKind::Add, pos, k, qs, std::nullopt, anchor};
        if (!is_parametric(k)) p.params = std::vector<double>{};
        pool.patches.push_back(std::move(p));
      }
    }
  }
  for (std::size_t pos = 0; pos < c.size(); ++pos) {
    const GateApp& g = c.gate(pos);
    const auto g_qubits = patch_detail::canonical_qubits(g.kind, g.qubits);
    for (GateKind k : catalog) {
      for (auto& qs : qubit_choices(k, n)) {
        if (k == g.kind && !is_parametric(k) && qs == g_qubits) continue;
        Patch p{PatchKind::Replace, pos, k, qs, std::nullopt, GateId::of(g)};
        if (!is_parametric(k)) p.params = std::vector<double>{};
        pool.patches.push_back(std::move(p));
      }
    }
  }
  return pool;
}

inline PatchQueue generate_patches(const Circuit& c) {
  return generate_patches(c, default_patch_catalog(c.num_qubits()));
}

/// Spreads the pool over the circuit: positions are visited round-robin,
/// each visit alternates between Add and Replace, and successive picks at
/// one position cycle through the gate kinds (starting at a position-
/// dependent kind, never repeating the previous pick's kind while another
/// is available). Within a kind, operand lists sharing qubits with the
/// anchor gate come first.
inline PatchQueue order_uniform(const PatchQueue& pool, const Circuit& c) {
  // Patches of one (position, Add|Replace) pair, bucketed by gate kind.
  struct Lane {
    std::vector<std::vector<Patch>> by_kind;
    std::vector<std::size_t> taken;
    std::size_t next_kind = 0;
    std::size_t left = 0;

    bool empty() const { return left == 0; }

    // Next kind in the cycle, skipping `avoid` unless nothing else is left.
    Patch take(std::optional<std::size_t> avoid) {
      const std::size_t kinds = by_kind.size();
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t step = 0; step < kinds; ++step) {
          const std::size_t k = (next_kind + step) % kinds;
          if (taken[k] >= by_kind[k].size()) continue;
          if (pass == 0 && avoid && k == *avoid) continue;
          next_kind = (k + 1) % kinds;
          --left;
          return by_kind[k][taken[k]++];
        }
      }
      throw IndexOutOfRange("take() on an empty lane");
    }
  };

  for (std::size_t i = pool.cursor; i < pool.patches.size(); ++i) {
    if (pool.patches[i].position > c.size()) {
      throw IndexOutOfRange("patch position beyond the end of the circuit");
    }
  }
  std::vector<GateKind> kind_order;
  for (std::size_t i = pool.cursor; i < pool.patches.size(); ++i) {
    const GateKind k = pool.patches[i].gate;
    if (std::find(kind_order.begin(), kind_order.end(), k) == kind_order.end()) {
      kind_order.push_back(k);
    }
  }
  auto kind_index = [&](GateKind k) {
    return static_cast<std::size_t>(
        std::find(kind_order.begin(), kind_order.end(), k) - kind_order.begin());
  };

  // lanes[pos][0] = Add, lanes[pos][1] = Replace
  std::vector<std::array<Lane, 2>> lanes(c.size() + 1);
  for (auto& pair : lanes) {
    for (auto& lane : pair) {
      lane.by_kind.resize(kind_order.size());
      lane.taken.assign(kind_order.size(), 0);
    }
  }
  for (std::size_t i = pool.cursor; i < pool.patches.size(); ++i) {
    const Patch& p = pool.patches[i];
    Lane& lane = lanes[p.position][p.kind == PatchKind::Add ? 0 : 1];
    lane.by_kind[kind_index(p.gate)].push_back(p);
    ++lane.left;
  }

  auto overlap = [](const Patch& p) {
    if (!p.anchor) return 0;
    int shared = 0;
    for (unsigned q : p.qubits) {
      if (std::find(p.anchor->qubits.begin(), p.anchor->qubits.end(), q) !=
          p.anchor->qubits.end()) {
        ++shared;
      }
    }
    return shared * 2 + (p.qubits == p.anchor->qubits ? 1 : 0);
  };
  for (std::size_t pos = 0; pos < lanes.size(); ++pos) {
    for (auto& lane : lanes[pos]) {
      for (auto& bucket : lane.by_kind) {
        std::stable_sort(bucket.begin(), bucket.end(), [&](const Patch& a, const Patch& b) {
          return overlap(a) > overlap(b);
        });
      }
      if (!kind_order.empty()) lane.next_kind = pos % kind_order.size();
    }
  }

  PatchQueue out;
  out.patches.reserve(pool.remaining());
  std::vector<int> turn(lanes.size());
  std::vector<std::optional<std::size_t>> last_kind(lanes.size());
  for (std::size_t pos = 0; pos < lanes.size(); ++pos) turn[pos] = static_cast<int>(pos % 2);
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t pos = 0; pos < lanes.size(); ++pos) {
      auto& pair = lanes[pos];
      int side = turn[pos];
      if (pair[side].empty()) side = 1 - side;
      if (pair[side].empty()) continue;
      out.patches.push_back(pair[side].take(last_kind[pos]));
      last_kind[pos] = kind_index(out.patches.back().gate);
      turn[pos] = 1 - side;
      progress = true;
    }
  }
  return out;
}

/// Drops every unconsumed patch whose anchor is not among `keep` (original
/// gate positions). Order is preserved.
inline PatchQueue prune_to_gates(const PatchQueue& q, const std::set<std::size_t>& keep) {
  PatchQueue out;
  for (std::size_t i = q.cursor; i < q.patches.size(); ++i) {
    const Patch& p = q.patches[i];
    if (p.anchor && keep.count(p.anchor->position)) out.patches.push_back(p);
  }
  return out;
}

}  // namespace qrep

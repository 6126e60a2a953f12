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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qrep/circuit.hpp"
#include "qrep/errors.hpp"
#include "qrep/gate.hpp"
#include "qrep/patch.hpp"
#include "qrep/rng.hpp"
#include "qrep/testkit.hpp"

namespace qrep {

enum class MutationOp { Add, Remove, Replace };

inline const char* mutation_op_name(MutationOp op) {
  switch (op) {
    case MutationOp::Add:
      return "add";
    case MutationOp::Remove:
      return "remove";
    case MutationOp::Replace:
      return "replace";
  }
  return "?";
}

struct Mutant {
  std::string id;
  MutationOp op = MutationOp::Add;
  Circuit circuit;
  // The faulty gate in the mutant's own numbering. For removals this is the
  // gate that now occupies the removed slot (the last gate when the removal
  // was at the end); empty if the mutant has no gates left.
  std::optional<GateId> fault;
  std::string description;
  double fitness = 0;
};

struct MutationOptions {
  // Gate kinds used by Add and Replace; empty means the default patch
  // catalog for the circuit width.
  std::vector<GateKind> catalog;
  // Angle given to every parametric gate a mutation introduces.
  double angle = std::numbers::pi / 2;
  EvalConfig eval;
};

namespace mutation_detail {

using Key = std::vector<std::tuple<GateKind, std::vector<unsigned>, std::vector<long long>>>;

// Structural identity: kinds, operands and angles rounded to 1e-9.
inline Key structural_key(const Circuit& c) {
  Key key;
  key.reserve(c.size());
  for (const auto& g : c.gates()) {
    std::vector<long long> rounded;
    for (double a : g.params) rounded.push_back(std::llround(a * 1e9));
    key.emplace_back(g.kind, g.qubits, std::move(rounded));
  }
  return key;
}

inline std::optional<GateId> gate_at_or_last(const Circuit& c, std::size_t pos) {
  if (c.empty()) return std::nullopt;
  return GateId::of(c.gate(std::min(pos, c.size() - 1)));
}

}  // namespace mutation_detail

/// Every single-gate mutant of `c`, grouped by operator (Add, Remove,
/// Replace in that order) with structural duplicates dropped. Replace keeps
/// the operands and swaps in a different kind of the same arity.
inline std::vector<Mutant> enumerate_mutants(const Circuit& c, const MutationOptions& opts = {}) {
  const auto catalog =
      opts.catalog.empty() ? default_patch_catalog(c.num_qubits()) : opts.catalog;
  std::vector<Mutant> out;
  std::set<mutation_detail::Key> seen{mutation_detail::structural_key(c)};
  auto push = [&](MutationOp op, Circuit m, std::optional<GateId> fault, std::string desc) {
    if (!seen.insert(mutation_detail::structural_key(m)).second) return;
    out.push_back({"", op, std::move(m), std::move(fault), std::move(desc), 0});
  };
  auto params_for = [&](GateKind k) {
    return std::vector<double>(param_count(k), opts.angle);
  };

  for (std::size_t pos = 0; pos <= c.size(); ++pos) {
    for (GateKind k : catalog) {
      for (const auto& qs : qubit_choices(k, c.num_qubits())) {
        GateApp g = make_gate(k, qs, params_for(k));
        const std::string desc = "add " + describe(g) + " at " + std::to_string(pos);
        Circuit m = insert_gate(c, pos, std::move(g));
        auto fault = GateId::of(m.gate(pos));
        push(MutationOp::Add, std::move(m), std::move(fault), desc);
      }
    }
  }
  for (std::size_t pos = 0; pos < c.size(); ++pos) {
    Circuit m = remove_gate(c, pos);
    auto fault = mutation_detail::gate_at_or_last(m, pos);
    push(MutationOp::Remove, std::move(m), std::move(fault),
         "remove " + describe(c.gate(pos)) + " at " + std::to_string(pos));
  }
  for (std::size_t pos = 0; pos < c.size(); ++pos) {
    const GateApp& orig = c.gate(pos);
    for (GateKind k : catalog) {
      if (k == orig.kind || arity(k) != arity(orig.kind)) continue;
      GateApp g = make_gate(k, orig.qubits, params_for(k));
      const std::string desc =
          "replace " + describe(orig) + " at " + std::to_string(pos) + " by " + describe(g);
      Circuit m = replace_gate(c, pos, std::move(g));
      auto fault = GateId::of(m.gate(pos));
      push(MutationOp::Replace, std::move(m), std::move(fault), desc);
    }
  }
  return out;
}

/// Builds a benchmark of faulty circuits from a correct `reference`:
/// enumerates single-gate mutants, drops those that fail no test of the
/// reference's suite, then draws `per_group` mutants per operator group
/// with a seeded shuffle.
inline std::vector<Mutant> inject_faults(
    const Circuit& reference, std::uint64_t seed, std::size_t per_group,
    const MutationOptions& opts = {}) {
  if (per_group == 0) return {};
  const TestSuite ts = generate_suite(reference);
  std::vector<std::vector<Mutant>> groups(3);
  for (auto& m : enumerate_mutants(reference, opts)) {
    const FitnessScore f = fitness(m.circuit, ts, opts.eval);
    if (f.all_passed()) continue;
    m.fitness = f.value;
    groups[static_cast<std::size_t>(m.op)].push_back(std::move(m));
  }
  if (groups[0].empty() && groups[1].empty() && groups[2].empty()) {
    throw NoNonEquivalentMutant();
  }
  std::vector<Mutant> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& group = groups[g];
    std::vector<std::size_t> idx(group.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(mix_seed(seed, g));
    shuffle(idx, rng);
    idx.resize(std::min(per_group, idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      Mutant m = std::move(group[idx[k]]);
      m.id = std::string(mutation_op_name(m.op)) + "_" + std::to_string(k);
      out.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace qrep

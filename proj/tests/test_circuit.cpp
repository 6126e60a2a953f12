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

#include "qrep/circuit.hpp"
#include "test_util.hpp"

namespace qrep {
namespace {

using testing::bell;

TEST(GateTable, CatalogAndParamCounts) {
  const std::vector<std::pair<std::string_view, unsigned>> expected{
      {"id", 0}, {"x", 0},   {"y", 0},  {"z", 0},  {"h", 0},    {"s", 0},
      {"sdg", 0}, {"t", 0},  {"tdg", 0}, {"rx", 1}, {"ry", 1},   {"rz", 1},
      {"p", 1},  {"u", 3},   {"cx", 0}, {"cz", 0}, {"cp", 1},   {"crz", 1},
      {"swap", 0}, {"ccx", 0}, {"measure", 0}, {"barrier", 0}};
  ASSERT_EQ(kGateTable.size(), expected.size());
  for (const auto& [name, params] : expected) {
    auto k = kind_from_name(name);
    ASSERT_TRUE(k) << name;
    EXPECT_EQ(param_count(*k), params) << name;
    EXPECT_EQ(name_of(*k), name);
  }
  EXPECT_EQ(arity(GateKind::CCX), 3u);
  EXPECT_EQ(arity(GateKind::Swap), 2u);
  EXPECT_FALSE(kind_from_name("cswap"));
}

TEST(GateTable, Aliases) {
  EXPECT_EQ(kind_from_name("u3"), GateKind::U);
  EXPECT_EQ(kind_from_name("u1"), GateKind::P);
  EXPECT_EQ(kind_from_name("cu1"), GateKind::CP);
  EXPECT_EQ(kind_from_name("cnot"), GateKind::CX);
}

TEST(Circuit, ValidatesGates) {
  Circuit c(2);
  EXPECT_THROW(c.add(GateKind::CX, {0, 0}), InvalidGate);
  EXPECT_THROW(c.add(GateKind::X, {2}), QubitOutOfRange);
  EXPECT_THROW(c.add(GateKind::RZ, {0}), InvalidGate);
  EXPECT_THROW(c.add(GateKind::RZ, {0}, {std::nan("")}), InvalidGate);
  EXPECT_THROW(c.add(GateKind::H, {0, 1}), InvalidGate);
  EXPECT_THROW(c.add(GateKind::Measure, {0}), InvalidGate);
  EXPECT_THROW(c.measure(3, 0), QubitOutOfRange);
  EXPECT_TRUE(c.empty());
}

TEST(Circuit, GateAccessOutOfRange) {
  const Circuit c = bell();
  EXPECT_EQ(c.gate(1).kind, GateKind::CX);
  EXPECT_THROW(c.gate(2), IndexOutOfRange);
}

TEST(Circuit, RemoveHFromBellLeavesCxAtZero) {
  const Circuit c = bell();
  const Circuit r = remove_gate(c, 0);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.gate(0).kind, GateKind::CX);
  EXPECT_EQ(r.gate(0).position, 0u);
  EXPECT_EQ(r.measurements(), c.measurements());
}

TEST(Circuit, RemoveFromSingleGateCircuit) {
  Circuit c(1);
  c.add(GateKind::H, {0});
  EXPECT_TRUE(remove_gate(c, 0).empty());
}

TEST(Circuit, RemoveRenumbers) {
  Circuit c(2);
  c.add(GateKind::H, {0}).add(GateKind::X, {1}).add(GateKind::CX, {0, 1});
  const Circuit r = remove_gate(c, 1);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r.gate(0).kind, GateKind::H);
  EXPECT_EQ(r.gate(1).kind, GateKind::CX);
  EXPECT_EQ(r.gate(1).position, 1u);
  EXPECT_TRUE(r.positions_contiguous());
  EXPECT_THROW(remove_gate(c, 3), IndexOutOfRange);
}

TEST(Circuit, InsertXBeforeCx) {
  const Circuit c = bell();
  const Circuit r = insert_gate(c, 1, make_gate(GateKind::X, {1}));
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r.gate(0).kind, GateKind::H);
  EXPECT_EQ(r.gate(1).kind, GateKind::X);
  EXPECT_EQ(r.gate(1).qubits, std::vector<unsigned>{1});
  EXPECT_EQ(r.gate(2).kind, GateKind::CX);
  EXPECT_TRUE(r.positions_contiguous());
}

TEST(Circuit, InsertAtEndAppends) {
  const Circuit c = bell();
  const Circuit r = insert_gate(c, c.size(), make_gate(GateKind::Z, {0}));
  EXPECT_EQ(r.gate(2).kind, GateKind::Z);
  EXPECT_EQ(r.gate(2).position, 2u);
  EXPECT_THROW(insert_gate(c, 3, make_gate(GateKind::Z, {0})), IndexOutOfRange);
  EXPECT_THROW(insert_gate(c, 0, make_gate(GateKind::Z, {5})), QubitOutOfRange);
}

TEST(Circuit, ReplaceWithItselfIsIdentity) {
  const Circuit c = bell();
  for (std::size_t pos = 0; pos < c.size(); ++pos) {
    EXPECT_EQ(replace_gate(c, pos, c.gate(pos)), c);
  }
  EXPECT_THROW(replace_gate(c, 2, make_gate(GateKind::X, {0})), IndexOutOfRange);
  EXPECT_THROW(replace_gate(c, 0, make_gate(GateKind::X, {2})), QubitOutOfRange);
}

TEST(Circuit, EditsArePure) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Circuit c = testing::random_circuit(3, 6, rng);
    const Circuit copy = c;
    const std::size_t pos = uniform_index(rng, c.size());
    const Circuit a = remove_gate(c, pos);
    const Circuit b = insert_gate(c, pos, testing::random_gate(3, rng));
    const Circuit d = replace_gate(c, pos, testing::random_gate(3, rng));
    EXPECT_EQ(c, copy);
    EXPECT_TRUE(a.positions_contiguous());
    EXPECT_TRUE(b.positions_contiguous());
    EXPECT_TRUE(d.positions_contiguous());
    EXPECT_EQ(a.size() + 1, c.size());
    EXPECT_EQ(b.size(), c.size() + 1);
    EXPECT_EQ(d.size(), c.size());
  }
}

TEST(Circuit, BarriersShiftWithEdits) {
  Circuit c(2);
  c.add(GateKind::H, {0}).barrier({0, 1}).add(GateKind::CX, {0, 1});
  ASSERT_EQ(c.barriers().size(), 1u);
  EXPECT_EQ(c.barriers()[0].before, 1u);
  EXPECT_EQ(insert_gate(c, 0, make_gate(GateKind::X, {0})).barriers()[0].before, 2u);
  EXPECT_EQ(insert_gate(c, 2, make_gate(GateKind::X, {0})).barriers()[0].before, 1u);
  EXPECT_EQ(remove_gate(c, 0).barriers()[0].before, 0u);
}

TEST(GateId, LabelAndOrdering) {
  const Circuit c = bell();
  const GateId a = GateId::of(c.gate(0));
  const GateId b = GateId::of(c.gate(1));
  EXPECT_EQ(a.label(), "0:h(0)");
  EXPECT_EQ(b.label(), "1:cx(0,1)");
  EXPECT_LT(a, b);
  EXPECT_EQ(describe(make_gate(GateKind::RZ, {2}, {0.5})), "rz[0.5](2)");
}

}  // namespace
}  // namespace qrep

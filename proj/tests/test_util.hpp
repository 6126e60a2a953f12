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

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qrep/qrep.hpp"

namespace qrep::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Circuit load_benchmark(const std::string& name) {
  return parse_qasm(read_file(std::string(QREP_BENCHMARK_DIR) + "/" + name + ".qasm"));
}

/// H on q0, CX(0,1): the two-qubit entangler.
inline Circuit bell() {
  Circuit c(2, 2);
  c.add(GateKind::H, {0}).add(GateKind::CX, {0, 1}).measure_all();
  return c;
}

/// Every unitary gate kind of the catalog.
inline std::vector<GateKind> unitary_kinds() {
  std::vector<GateKind> out;
  for (const auto& g : kGateTable) {
    if (is_unitary_kind(g.kind)) out.push_back(g.kind);
  }
  return out;
}

/// A uniformly random gate of the catalog that fits `n` qubits.
inline GateApp random_gate(unsigned n, Rng& rng) {
  std::vector<GateKind> kinds;
  for (GateKind k : unitary_kinds()) {
    if (arity(k) <= n) kinds.push_back(k);
  }
  const GateKind k = kinds[uniform_index(rng, kinds.size())];
  std::vector<unsigned> all(n);
  for (unsigned q = 0; q < n; ++q) all[q] = q;
  shuffle(all, rng);
  std::vector<unsigned> qs(all.begin(), all.begin() + arity(k));
  std::vector<double> ps(param_count(k));
  for (double& p : ps) p = (2 * uniform01(rng) - 1) * 4.0;
  return make_gate(k, qs, ps);
}

inline Circuit random_circuit(unsigned n, std::size_t gates, Rng& rng) {
  Circuit c(n);
  for (std::size_t i = 0; i < gates; ++i) c.append(random_gate(n, rng));
  return c;
}

}  // namespace qrep::testing

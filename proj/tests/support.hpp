// Copyright 2026 The qpulba Authors
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

// Independent oracles shared by the test binaries.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpulba/circuit.hpp"

namespace qpulba::testing {

inline int bits_for(std::uint64_t count) {
  int bits = 0;
  while ((std::uint64_t{1} << bits) < count) ++bits;
  return bits;
}

struct OracleResult {
  std::string tape;  // 'o' for untouched cells
  std::uint32_t state = 0;
  std::uint32_t head = 0;
};

/// Direct interpretation of a description number, written without the
/// library's codec.
inline OracleResult oracle_run(std::uint64_t program, int m, int n, int c, int t) {
  const int qs = bits_for(m);
  const int qg = bits_for(n);
  const int width = qs + 1 + qg;
  std::vector<int> tape(c, -1);
  std::uint32_t state = 0;
  int head = 0;
  auto field = [&](int offset, int count) {
    return static_cast<std::uint32_t>((program >> offset) & ((1ull << count) - 1));
  };
  for (int k = 0; k < t; ++k) {
    const int read = tape[head] < 0 ? 0 : tape[head];
    std::uint32_t write = 0, move = 0, next = 0;
    if (static_cast<int>(state) < m && read < n) {
      const int base = (static_cast<int>(state) * n + read) * width;
      write = field(base, qg);
      move = field(base + qg, 1);
      next = field(base + qg + 1, qs);
    }
    tape[head] = static_cast<int>(write);
    head = move ? (head + 1) % c : (head + c - 1) % c;
    state = next;
  }
  OracleResult r;
  for (int v : tape) {
    r.tape += v < 0 ? 'o' : static_cast<char>(v < 10 ? '0' + v : 'a' + v - 10);
  }
  r.state = state;
  r.head = static_cast<std::uint32_t>(head);
  return r;
}

/// Bit-vector evaluation of a reversible circuit. Rotations are rejected.
inline std::vector<bool> evaluate(const Circuit& circuit, std::vector<bool> bits) {
  for (const Gate& g : circuit.gates()) {
    bool fire = true;
    for (const Control& c : g.controls) {
      fire = fire && bits[c.qubit] == (c.polarity == Polarity::kPositive);
    }
    switch (g.kind) {
      case GateKind::kX:
      case GateKind::kCNOT:
      case GateKind::kToffoli:
      case GateKind::kMCX:
        if (fire) bits[g.targets[0]] = !bits[g.targets[0]];
        break;
      case GateKind::kSWAP: {
        const bool a = bits[g.targets[0]];
        bits[g.targets[0]] = bits[g.targets[1]];
        bits[g.targets[1]] = a;
        break;
      }
      default:
        throw std::logic_error("evaluate: not a permutation gate");
    }
  }
  return bits;
}

inline std::uint64_t read_bits(const std::vector<bool>& bits,
                               const std::vector<Qubit>& qubits) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (bits[qubits[i]]) v |= 1ull << i;
  }
  return v;
}

inline void write_bits(std::vector<bool>& bits, const std::vector<Qubit>& qubits,
                       std::uint64_t value) {
  for (std::size_t i = 0; i < qubits.size(); ++i) bits[qubits[i]] = (value >> i) & 1;
}

}  // namespace qpulba::testing

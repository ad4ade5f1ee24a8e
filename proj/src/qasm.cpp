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

#include "qpulba/qasm.hpp"

#include <cstdio>
#include <sstream>

#include "qpulba/errors.hpp"

namespace qpulba {

namespace {

std::string ref(Qubit q) { return "q[" + std::to_string(q) + "]"; }

std::string angle_text(double angle) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", angle);
  return buffer;
}

std::string qubit_list(const std::vector<Qubit>& qubits) {
  std::string out;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(qubits[i]);
  }
  return out;
}

}  // namespace

std::string emit_qasm(const Circuit& circuit) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  for (const Register& r : circuit.registers()) {
    out << "// " << r.name << ": [" << qubit_list(r.qubits) << "]\n";
  }
  out << "qreg q[" << circuit.qubit_count() << "];\n";
  const auto& gates = circuit.gates();
  for (std::size_t index = 0; index < gates.size(); ++index) {
    const Gate& g = gates[index];
    if (g.kind == GateKind::kMCX || g.has_negative_control()) {
      throw UnloweredGate("gate " + std::to_string(index) + " (" + g.describe() +
                          ") is not in the base set; transpile first");
    }
    switch (g.kind) {
      case GateKind::kH:
        out << "h " << ref(g.targets[0]) << ";\n";
        break;
      case GateKind::kX:
        out << "x " << ref(g.targets[0]) << ";\n";
        break;
      case GateKind::kRY:
        out << "ry(" << angle_text(g.angle) << ") " << ref(g.targets[0]) << ";\n";
        break;
      case GateKind::kCNOT:
        out << "cx " << ref(g.controls[0].qubit) << ',' << ref(g.targets[0]) << ";\n";
        break;
      case GateKind::kToffoli:
        out << "ccx " << ref(g.controls[0].qubit) << ',' << ref(g.controls[1].qubit)
            << ',' << ref(g.targets[0]) << ";\n";
        break;
      case GateKind::kSWAP:
        out << "swap " << ref(g.targets[0]) << ',' << ref(g.targets[1]) << ";\n";
        break;
      case GateKind::kMCX:
        break;
    }
  }
  return out.str();
}

}  // namespace qpulba

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

#include "doctest.h"
#include "qpulba/builder.hpp"
#include "qpulba/circuit.hpp"
#include "qpulba/errors.hpp"

using namespace qpulba;

TEST_CASE("gate validation") {
  CHECK_NOTHROW(validate_gate(Gate::toffoli(pos(0), neg(1), 2), 3));
  CHECK_THROWS_AS(validate_gate(Gate::toffoli(pos(0), pos(0), 2), 3), InvalidGate);
  CHECK_THROWS_AS(validate_gate(Gate::cnot(pos(0), 0), 3), InvalidGate);
  CHECK_THROWS_AS(validate_gate(Gate::x(3), 3), InvalidGate);
  CHECK_THROWS_AS(validate_gate(Gate::swap(1, 1), 3), InvalidGate);
  Circuit c(2);
  CHECK_THROWS_AS(c.append(Gate::mcx({pos(0), pos(1)}, 2)), InvalidGate);
}

TEST_CASE("gate kinds") {
  for (GateKind kind : kAllGateKinds) {
    CHECK(parse_gate_kind(gate_kind_name(kind)) == kind);
  }
  CHECK(gate_kind_name(GateKind::kToffoli) == "TOFFOLI");
  CHECK_FALSE(parse_gate_kind("CZ").has_value());
  CHECK(Gate::ry(0, 0.3).inverse().angle == doctest::Approx(-0.3));
  CHECK(Gate::x(1).is_permutation());
  CHECK_FALSE(Gate::h(1).is_permutation());
  CHECK(Gate::mcx({neg(0), pos(1)}, 2).has_negative_control());
}

TEST_CASE("registers") {
  Circuit c(4);
  c.add_register("A", {0, 1});
  CHECK_THROWS_AS(c.add_register("B", {1, 2}), InvalidGate);
  CHECK_THROWS_AS(c.add_register("A", {3}), InvalidGate);
  CHECK(c.register_named("A").qubits == std::vector<Qubit>{0, 1});
  CHECK(c.find_register("C") == nullptr);
  CHECK_THROWS_AS(c.register_named("C"), UnknownRegister);
}

TEST_CASE("invert is an involution and reverses order") {
  const Circuit machine = build_machine(MachineSpec::make(1, 2, 4));
  CHECK(invert(invert(machine)) == machine);
  Circuit c(3);
  c.append(Gate::h(0));
  c.append(Gate::ry(1, 0.25));
  c.append(Gate::toffoli(pos(0), neg(1), 2));
  const Circuit inv = invert(c);
  REQUIRE(inv.gates().size() == 3);
  CHECK(inv.gates()[0] == c.gates()[2]);
  CHECK(inv.gates()[1].angle == doctest::Approx(-0.25));
  CHECK(inv.gates()[2] == c.gates()[0]);
}

TEST_CASE("stats are additive under composition") {
  const QubitLayout layout = plan_layout(MachineSpec::make(2, 2, 12));
  const Circuit a = build_read(layout, 0);
  const Circuit b = build_move(layout);
  CHECK(stats(compose(a, b)) == stats(a) + stats(b));
  CHECK(stats(compose(a, b)).total() == a.gates().size() + b.gates().size());
}

TEST_CASE("JSON round trip") {
  const Circuit machine = build_machine(MachineSpec::make(2, 1, 4));
  const std::string text = circuit_to_json(machine);
  const Circuit back = circuit_from_json(text);
  CHECK(back == machine);
  CHECK(circuit_to_json(back) == text);
  Circuit rot(2);
  rot.append(Gate::ry(1, 0.1234567890123456789));
  CHECK(circuit_from_json(circuit_to_json(rot)) == rot);
}

TEST_CASE("grow adds zeroed qubits") {
  Circuit c(2);
  c.grow(3);
  CHECK(c.qubit_count() == 5);
  CHECK_NOTHROW(c.append(Gate::x(4)));
}

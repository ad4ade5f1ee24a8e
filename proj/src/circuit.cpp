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

#include "qpulba/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "qpulba/errors.hpp"

namespace qpulba {

namespace {

constexpr std::array<std::string_view, kGateKindCount> kKindNames = {
    "H", "X", "RY", "CNOT", "SWAP", "TOFFOLI", "MCX"};

}  // namespace

std::string_view gate_kind_name(GateKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<GateKind> parse_gate_kind(std::string_view name) {
  for (GateKind kind : kAllGateKinds) {
    if (gate_kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

Gate Gate::h(Qubit target) { return {GateKind::kH, {target}, {}, 0.0}; }
Gate Gate::x(Qubit target) { return {GateKind::kX, {target}, {}, 0.0}; }
Gate Gate::ry(Qubit target, double angle) {
  return {GateKind::kRY, {target}, {}, angle};
}
Gate Gate::cnot(Control control, Qubit target) {
  return {GateKind::kCNOT, {target}, {control}, 0.0};
}
Gate Gate::swap(Qubit a, Qubit b) { return {GateKind::kSWAP, {a, b}, {}, 0.0}; }
Gate Gate::toffoli(Control c0, Control c1, Qubit target) {
  return {GateKind::kToffoli, {target}, {c0, c1}, 0.0};
}
Gate Gate::mcx(std::vector<Control> controls, Qubit target) {
  return {GateKind::kMCX, {target}, std::move(controls), 0.0};
}

Gate Gate::inverse() const {
  Gate inv = *this;
  if (kind == GateKind::kRY) inv.angle = -angle;
  return inv;
}

bool Gate::has_negative_control() const {
  return std::any_of(controls.begin(), controls.end(), [](const Control& c) {
    return c.polarity == Polarity::kNegative;
  });
}

std::vector<Qubit> Gate::support() const {
  std::vector<Qubit> qubits = targets;
  for (const Control& c : controls) qubits.push_back(c.qubit);
  return qubits;
}

std::string Gate::describe() const {
  std::ostringstream out;
  out << gate_kind_name(kind);
  if (kind == GateKind::kRY) out << '(' << angle << ')';
  out << " targets[";
  for (std::size_t i = 0; i < targets.size(); ++i) {
    out << (i ? "," : "") << targets[i];
  }
  out << ']';
  if (!controls.empty()) {
    out << " controls[";
    for (std::size_t i = 0; i < controls.size(); ++i) {
      out << (i ? "," : "")
          << (controls[i].polarity == Polarity::kPositive ? "+" : "-")
          << controls[i].qubit;
    }
    out << ']';
  }
  return out.str();
}

void validate_gate(const Gate& gate, std::size_t qubit_count) {
  auto fail = [&](const std::string& why) {
    throw InvalidGate("invalid gate " + gate.describe() + ": " + why);
  };
  const std::size_t n_targets = gate.kind == GateKind::kSWAP ? 2 : 1;
  if (gate.targets.size() != n_targets) fail("wrong number of targets");
  switch (gate.kind) {
    case GateKind::kH:
    case GateKind::kX:
    case GateKind::kRY:
    case GateKind::kSWAP:
      if (!gate.controls.empty()) fail("gate takes no controls");
      break;
    case GateKind::kCNOT:
      if (gate.controls.size() != 1) fail("CNOT takes exactly one control");
      break;
    case GateKind::kToffoli:
      if (gate.controls.size() != 2) fail("TOFFOLI takes exactly two controls");
      break;
    case GateKind::kMCX:
      if (gate.controls.empty()) fail("MCX needs at least one control");
      break;
  }
  if (gate.kind == GateKind::kRY && !std::isfinite(gate.angle)) {
    fail("rotation angle is not finite");
  }
  std::unordered_set<Qubit> seen;
  for (Qubit q : gate.support()) {
    if (q >= qubit_count) {
      fail("qubit " + std::to_string(q) + " outside circuit of " +
           std::to_string(qubit_count) + " qubits");
    }
    if (!seen.insert(q).second) {
      fail("qubit " + std::to_string(q) + " used twice");
    }
  }
}

void Circuit::add_register(std::string name, std::vector<Qubit> qubits) {
  if (find_register(name) != nullptr) {
    throw InvalidGate("duplicate register name " + name);
  }
  std::unordered_set<Qubit> used;
  for (const Register& r : registers_) used.insert(r.qubits.begin(), r.qubits.end());
  for (Qubit q : qubits) {
    if (q >= qubit_count_) {
      throw RangeError("register " + name + " references qubit " +
                       std::to_string(q) + " outside the circuit");
    }
    if (!used.insert(q).second) {
      throw InvalidGate("register " + name + " overlaps qubit " +
                        std::to_string(q));
    }
  }
  registers_.push_back({std::move(name), std::move(qubits)});
}

const Register* Circuit::find_register(std::string_view name) const {
  for (const Register& r : registers_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const Register& Circuit::register_named(std::string_view name) const {
  if (const Register* r = find_register(name)) return *r;
  throw UnknownRegister("no register named " + std::string(name));
}

Circuit& Circuit::append(Gate gate) {
  validate_gate(gate, qubit_count_);
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.qubit_count() > qubit_count_) {
    throw InvalidGate("cannot append a circuit of " +
                      std::to_string(other.qubit_count()) + " qubits to one of " +
                      std::to_string(qubit_count_));
  }
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  return *this;
}

void Circuit::validate() const {
  Circuit fresh(qubit_count_);
  for (const Register& r : registers_) fresh.add_register(r.name, r.qubits);
  for (const Gate& g : gates_) validate_gate(g, qubit_count_);
}

Circuit invert(const Circuit& circuit) {
  std::vector<Gate> reversed;
  reversed.reserve(circuit.gates().size());
  for (auto it = circuit.gates().rbegin(); it != circuit.gates().rend(); ++it) {
    reversed.push_back(it->inverse());
  }
  Circuit result(circuit.qubit_count());
  for (const Register& r : circuit.registers()) result.add_register(r.name, r.qubits);
  result.set_prep_zero(circuit.prep_zero());
  for (Gate& g : reversed) result.append(std::move(g));
  return result;
}

Circuit compose(const Circuit& a, const Circuit& b) {
  Circuit out = a;
  out.append(b);
  return out;
}

std::size_t GateStats::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

GateStats& GateStats::operator+=(const GateStats& other) {
  for (std::size_t i = 0; i < kGateKindCount; ++i) counts[i] += other.counts[i];
  return *this;
}

GateStats stats(const Circuit& circuit) {
  GateStats s;
  for (const Gate& g : circuit.gates()) ++s.counts[static_cast<std::size_t>(g.kind)];
  return s;
}

std::string circuit_to_json(const Circuit& circuit) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["version"] = 1;
  doc["num_qubits"] = circuit.qubit_count();
  if (circuit.prep_zero()) doc["prep_zero"] = true;
  doc["registers"] = ordered_json::array();
  for (const Register& r : circuit.registers()) {
    doc["registers"].push_back({{"name", r.name}, {"qubits", r.qubits}});
  }
  doc["gates"] = ordered_json::array();
  for (const Gate& g : circuit.gates()) {
    ordered_json gate;
    gate["kind"] = gate_kind_name(g.kind);
    gate["targets"] = g.targets;
    if (!g.controls.empty()) {
      gate["controls"] = ordered_json::array();
      for (const Control& c : g.controls) {
        gate["controls"].push_back(
            {{"q", c.qubit}, {"pol", c.polarity == Polarity::kPositive ? 1 : 0}});
      }
    }
    if (g.kind == GateKind::kRY) gate["angle"] = g.angle;
    doc["gates"].push_back(std::move(gate));
  }
  return doc.dump() + "\n";
}

Circuit circuit_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidGate(std::string("malformed circuit JSON: ") + e.what());
  }
  try {
    if (doc.at("version").get<int>() != 1) {
      throw InvalidGate("unsupported circuit JSON version");
    }
    Circuit circuit(doc.at("num_qubits").get<std::size_t>());
    circuit.set_prep_zero(doc.value("prep_zero", false));
    for (const auto& r : doc.at("registers")) {
      circuit.add_register(r.at("name").get<std::string>(),
                           r.at("qubits").get<std::vector<Qubit>>());
    }
    for (const auto& g : doc.at("gates")) {
      const auto name = g.at("kind").get<std::string>();
      const auto kind = parse_gate_kind(name);
      if (!kind) throw InvalidGate("unknown gate kind " + name);
      Gate gate;
      gate.kind = *kind;
      gate.targets = g.at("targets").get<std::vector<Qubit>>();
      if (g.contains("controls")) {
        for (const auto& c : g.at("controls")) {
          gate.controls.push_back(
              {c.at("q").get<Qubit>(),
               c.at("pol").get<int>() ? Polarity::kPositive : Polarity::kNegative});
        }
      }
      if (gate.kind == GateKind::kRY) gate.angle = g.at("angle").get<double>();
      circuit.append(std::move(gate));
    }
    return circuit;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidGate(std::string("malformed circuit JSON: ") + e.what());
  }
}

}  // namespace qpulba

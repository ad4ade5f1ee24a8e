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

// Gate-level circuit IR. Gates address a flat qubit numbering; named
// registers are metadata layered on top of it.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qpulba {

using Qubit = std::uint32_t;

enum class Polarity : std::uint8_t {
  kNegative = 0,  // fires when the control qubit is 0 (open circle)
  kPositive = 1,  // fires when the control qubit is 1
};

struct Control {
  Qubit qubit = 0;
  Polarity polarity = Polarity::kPositive;

  bool fires_on(bool bit) const {
    return bit == (polarity == Polarity::kPositive);
  }
  bool operator==(const Control&) const = default;
};

inline Control pos(Qubit q) { return {q, Polarity::kPositive}; }
inline Control neg(Qubit q) { return {q, Polarity::kNegative}; }

enum class GateKind : std::uint8_t { kH, kX, kRY, kCNOT, kSWAP, kToffoli, kMCX };

inline constexpr std::size_t kGateKindCount = 7;
inline constexpr std::array<GateKind, kGateKindCount> kAllGateKinds = {
    GateKind::kH,    GateKind::kX,       GateKind::kRY, GateKind::kCNOT,
    GateKind::kSWAP, GateKind::kToffoli, GateKind::kMCX};

std::string_view gate_kind_name(GateKind kind);
std::optional<GateKind> parse_gate_kind(std::string_view name);

struct Gate {
  GateKind kind = GateKind::kX;
  std::vector<Qubit> targets;
  std::vector<Control> controls;
  double angle = 0.0;  // RY only, radians

  static Gate h(Qubit target);
  static Gate x(Qubit target);
  static Gate ry(Qubit target, double angle);
  static Gate cnot(Control control, Qubit target);
  static Gate swap(Qubit a, Qubit b);
  static Gate toffoli(Control c0, Control c1, Qubit target);
  static Gate mcx(std::vector<Control> controls, Qubit target);

  /// Every gate kind is self-inverse except RY(theta) -> RY(-theta).
  Gate inverse() const;
  /// True for gates that map basis states to basis states.
  bool is_permutation() const {
    return kind != GateKind::kH && kind != GateKind::kRY;
  }
  bool has_negative_control() const;
  /// Every qubit the gate touches, targets first.
  std::vector<Qubit> support() const;
  std::string describe() const;

  bool operator==(const Gate&) const = default;
};

/// Throws InvalidGate when arity, range or distinctness rules fail.
void validate_gate(const Gate& gate, std::size_t qubit_count);

struct Register {
  std::string name;
  std::vector<Qubit> qubits;

  bool operator==(const Register&) const = default;
};

class Circuit {
 public:
  explicit Circuit(std::size_t qubit_count = 0) : qubit_count_(qubit_count) {}

  std::size_t qubit_count() const { return qubit_count_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<Register>& registers() const { return registers_; }

  /// Registers must have unique names and be pairwise disjoint.
  void add_register(std::string name, std::vector<Qubit> qubits);
  const Register* find_register(std::string_view name) const;
  /// Throws UnknownRegister.
  const Register& register_named(std::string_view name) const;

  Circuit& append(Gate gate);
  /// Appends every gate of other; other must have the same qubit count.
  Circuit& append(const Circuit& other);

  /// Declarative marker: all qubits are prepared in |0> before the first gate.
  bool prep_zero() const { return prep_zero_; }
  void set_prep_zero(bool value) { prep_zero_ = value; }

  /// Adds qubits at the end of the numbering; existing gates are unaffected.
  void grow(std::size_t extra) { qubit_count_ += extra; }

  /// Re-checks every gate and register from scratch.
  void validate() const;

  bool operator==(const Circuit&) const = default;

 private:
  std::size_t qubit_count_ = 0;
  std::vector<Register> registers_;
  std::vector<Gate> gates_;
  bool prep_zero_ = false;
};

Circuit invert(const Circuit& circuit);
/// Gates of a followed by gates of b; metadata taken from a.
Circuit compose(const Circuit& a, const Circuit& b);

struct GateStats {
  std::array<std::size_t, kGateKindCount> counts{};

  std::size_t count(GateKind kind) const {
    return counts[static_cast<std::size_t>(kind)];
  }
  std::size_t total() const;
  GateStats& operator+=(const GateStats& other);
  friend GateStats operator+(GateStats a, const GateStats& b) { return a += b; }
  bool operator==(const GateStats&) const = default;
};

GateStats stats(const Circuit& circuit);

std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(std::string_view text);

}  // namespace qpulba

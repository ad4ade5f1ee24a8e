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

#include "qpulba/builder.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "qpulba/errors.hpp"

namespace qpulba {

std::string_view layout_mode_name(LayoutMode mode) {
  return mode == LayoutMode::kGeneral ? "general" : "paper-compat";
}

std::string_view block_kind_name(BlockKind kind) {
  switch (kind) {
    case BlockKind::kInit: return "INIT";
    case BlockKind::kRead: return "READ";
    case BlockKind::kDelta: return "DELTA";
    case BlockKind::kWrite: return "WRITE";
    case BlockKind::kMove: return "MOVE";
    case BlockKind::kReset: return "RESET";
  }
  return "?";
}

const std::vector<Qubit>& QubitLayout::read_for(std::size_t cycle) const {
  return reads.at(std::min(cycle, reads.size() - 1));
}

std::vector<Qubit> QubitLayout::cell(std::size_t i) const {
  const auto width = static_cast<std::size_t>(spec.symbol_bits());
  return {tape.begin() + static_cast<std::ptrdiff_t>(i * width),
          tape.begin() + static_cast<std::ptrdiff_t>((i + 1) * width)};
}

std::vector<Qubit> QubitLayout::state_role() const {
  std::vector<Qubit> out = state;
  for (const auto& slot : state_history) out.insert(out.end(), slot.begin(), slot.end());
  return out;
}

std::vector<Qubit> QubitLayout::read_role() const {
  std::vector<Qubit> out;
  for (const auto& r : reads) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::size_t QubitLayout::formula_base() const {
  return fsm.size() + state_role().size() + move.size() + head.size() +
         read_role().size() + write.size() + tape.size();
}

Circuit QubitLayout::empty_circuit() const {
  Circuit circuit(qubit_count);
  circuit.add_register("FSM", fsm);
  circuit.add_register("STATE", state);
  for (std::size_t k = 0; k < state_history.size(); ++k) {
    if (!state_history[k].empty()) {
      circuit.add_register("STATE_HIST_" + std::to_string(k), state_history[k]);
    }
  }
  circuit.add_register("MOVE", move);
  circuit.add_register("HEAD", head);
  for (std::size_t k = 0; k < reads.size(); ++k) {
    circuit.add_register("READ_" + std::to_string(k), reads[k]);
  }
  circuit.add_register("WRITE", write);
  circuit.add_register("TAPE", tape);
  circuit.add_register("ANCILLA", ancilla);
  return circuit;
}

namespace {

bool is_power_of_two(std::uint64_t value) {
  return value != 0 && (value & (value - 1)) == 0;
}

class Allocator {
 public:
  std::vector<Qubit> take(std::size_t count) {
    std::vector<Qubit> out(count);
    for (auto& q : out) q = next_++;
    return out;
  }
  std::size_t used() const { return next_; }

 private:
  Qubit next_ = 0;
};

}  // namespace

std::size_t move_ancilla_count(std::uint32_t cells) {
  const int q_head = ceil_log2(cells);
  return static_cast<std::size_t>(std::max(q_head - 2, 0)) +
         (is_power_of_two(cells) ? 0 : 1);
}

QubitLayout plan_layout(const MachineSpec& spec, LayoutMode mode) {
  std::size_t history_slots = 0;
  std::size_t read_registers = 0;
  std::size_t ancillas = move_ancilla_count(spec.cells);
  if (mode == LayoutMode::kGeneral) {
    spec.validate();
    // The last cycle never computes a next state.
    history_slots = spec.cycles - 1;
    read_registers = spec.cycles;
  } else {
    spec.validate_shape();
    const bool case_221 = spec.states == 2 && spec.symbols == 2 &&
                          spec.cells == 12 && spec.cycles == 1;
    const bool case_121 = spec.states == 1 && spec.symbols == 2 &&
                          spec.cells == 4 && spec.cycles == 4;
    if (!case_221 && !case_121) {
      throw LayoutUnavailable(
          "no published layout for " + spec.label() + " c=" +
          std::to_string(spec.cells) + " t=" + std::to_string(spec.cycles) +
          "; paper-compat supports 2-2-1 (c=12, t=1) and 1-2-1 (c=4, t=4)");
    }
    history_slots = spec.cycles;
    read_registers = 1;
    ancillas = 3;
  }

  const auto q_state = static_cast<std::size_t>(spec.state_bits());
  const auto q_gamma = static_cast<std::size_t>(spec.symbol_bits());
  QubitLayout layout;
  layout.spec = spec;
  layout.mode = mode;
  Allocator alloc;
  layout.fsm = alloc.take(static_cast<std::size_t>(spec.program_bits()));
  layout.state = alloc.take(q_state);
  for (std::size_t k = 0; k < history_slots; ++k) {
    layout.state_history.push_back(alloc.take(q_state));
  }
  layout.move = alloc.take(spec.dimensions);
  layout.head = alloc.take(static_cast<std::size_t>(spec.head_bits()));
  for (std::size_t k = 0; k < read_registers; ++k) {
    layout.reads.push_back(alloc.take(q_gamma));
  }
  layout.write = alloc.take(q_gamma);
  layout.tape = alloc.take(spec.cells * q_gamma);
  layout.ancilla = alloc.take(ancillas);
  layout.qubit_count = alloc.used();
  layout.carry_count = static_cast<std::size_t>(std::max(spec.head_bits() - 2, 0));
  layout.needs_wrap = !is_power_of_two(spec.cells);
  return layout;
}

namespace {

std::string index_list(const std::vector<Qubit>& qubits) {
  std::string out = "[";
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(qubits[i]);
  }
  return out + "]";
}

struct RoleRow {
  const char* name;
  std::vector<Qubit> qubits;
};

std::vector<RoleRow> role_rows(const QubitLayout& layout) {
  return {{"FSM", layout.fsm},     {"STATE", layout.state_role()},
          {"MOVE", layout.move},   {"HEAD", layout.head},
          {"READ", layout.read_role()}, {"WRITE", layout.write},
          {"TAPE", layout.tape},   {"ANCILLA", layout.ancilla}};
}

struct FormulaTerms {
  std::size_t q_delta, q_state, q_move, q_head, q_read, q_write, q_tape, q_ch;
};

FormulaTerms formula_terms(const QubitLayout& layout) {
  const MachineSpec& s = layout.spec;
  FormulaTerms f{};
  f.q_delta = layout.fsm.size();
  f.q_state = static_cast<std::size_t>(s.state_bits());
  f.q_move = layout.move.size();
  f.q_head = layout.head.size();
  f.q_read = static_cast<std::size_t>(s.symbol_bits());
  f.q_write = layout.write.size();
  f.q_tape = layout.tape.size();
  f.q_ch = layout.formula_base() - (f.q_delta + f.q_state + f.q_move + f.q_head +
                                    f.q_read + f.q_write + f.q_tape);
  return f;
}

}  // namespace

std::string layout_report_text(const QubitLayout& layout) {
  const MachineSpec& s = layout.spec;
  std::ostringstream out;
  out << "Number of " << s.states << "-state " << s.symbols << "-symbol "
      << s.dimensions << "-dimension QPULBA: " << s.program_count() << "\n";
  out << "cells: " << s.cells << ", cycles: " << s.cycles
      << ", mode: " << layout_mode_name(layout.mode) << "\n\n";
  for (const auto& row : role_rows(layout)) {
    std::string name = row.name;
    name.resize(8, ' ');
    out << name << ": " << index_list(row.qubits) << "\n";
  }
  const FormulaTerms f = formula_terms(layout);
  out << "\nq_delta = " << f.q_delta << ", q_state = " << f.q_state
      << ", q_move = " << f.q_move << ", q_head = " << f.q_head
      << ", q_read = " << f.q_read << ", q_write = " << f.q_write
      << ", q_tape = " << f.q_tape << ", q_ch = " << f.q_ch
      << ", q_a = " << layout.ancilla_count() << "\n";
  out << f.q_delta << "+" << f.q_state << "+" << f.q_move << "+" << f.q_head
      << "+" << f.q_read << "+" << f.q_write << "+" << f.q_tape << "+"
      << f.q_ch << "+q_a\n";
  out << "total: " << layout.formula_base() << " + q_a = " << layout.qubit_count
      << " (q_a = " << layout.ancilla_count() << ")\n";
  return out.str();
}

std::string layout_report_json(const QubitLayout& layout) {
  using nlohmann::ordered_json;
  const MachineSpec& s = layout.spec;
  const FormulaTerms f = formula_terms(layout);
  ordered_json doc;
  doc["spec"] = {{"m", s.states}, {"n", s.symbols}, {"d", s.dimensions},
                 {"c", s.cells},  {"t", s.cycles}};
  doc["mode"] = layout_mode_name(layout.mode);
  doc["programs"] = s.program_count();
  doc["registers"] = ordered_json::object();
  for (const auto& row : role_rows(layout)) doc["registers"][row.name] = row.qubits;
  doc["q"] = {{"delta", f.q_delta}, {"state", f.q_state}, {"move", f.q_move},
              {"head", f.q_head},   {"read", f.q_read},   {"write", f.q_write},
              {"tape", f.q_tape},   {"ch", f.q_ch},       {"a", layout.ancilla_count()}};
  doc["formula_base"] = layout.formula_base();
  doc["total"] = layout.qubit_count;
  return doc.dump(2) + "\n";
}

// --- blocks -----------------------------------------------------------------

namespace {

/// Controls that fire when register holds value.
void add_pattern(std::vector<Control>& controls, const std::vector<Qubit>& reg,
                 std::uint64_t value) {
  for (std::size_t b = 0; b < reg.size(); ++b) {
    controls.push_back(((value >> b) & 1) ? pos(reg[b]) : neg(reg[b]));
  }
}

std::vector<Control> pattern(const std::vector<Qubit>& reg, std::uint64_t value) {
  std::vector<Control> controls;
  add_pattern(controls, reg, value);
  return controls;
}

}  // namespace

Circuit build_init(const QubitLayout& layout) {
  Circuit circuit = layout.empty_circuit();
  circuit.set_prep_zero(true);
  for (Qubit q : layout.fsm) circuit.append(Gate::h(q));
  return circuit;
}

Circuit build_read(const QubitLayout& layout, std::size_t cycle) {
  Circuit circuit = layout.empty_circuit();
  const std::vector<Qubit>& read = layout.read_for(cycle);
  for (std::uint32_t i = 0; i < layout.spec.cells; ++i) {
    const std::vector<Qubit> cell = layout.cell(i);
    for (std::size_t b = 0; b < cell.size(); ++b) {
      std::vector<Control> controls = pattern(layout.head, i);
      controls.push_back(pos(cell[b]));
      circuit.append(Gate::mcx(std::move(controls), read[b]));
    }
  }
  return circuit;
}

Circuit build_delta(const QubitLayout& layout, std::size_t cycle,
                    bool include_next_state) {
  const MachineSpec& spec = layout.spec;
  Circuit circuit = layout.empty_circuit();
  const std::vector<Qubit>& read = layout.read_for(cycle);
  const auto q_gamma = static_cast<std::size_t>(spec.symbol_bits());
  const auto q_state = static_cast<std::size_t>(spec.state_bits());
  const bool next_state = include_next_state && layout.computes_next_state(cycle);
  for (std::uint32_t i = 0; i < spec.states; ++i) {
    for (std::uint32_t j = 0; j < spec.symbols; ++j) {
      std::vector<Control> lookup = pattern(layout.state, i);
      add_pattern(lookup, read, j);
      const std::size_t base = entry_offset(spec, i, j);
      auto emit = [&](std::size_t field_bit, Qubit target) {
        std::vector<Control> controls = lookup;
        controls.push_back(pos(layout.fsm[base + field_bit]));
        circuit.append(Gate::mcx(std::move(controls), target));
      };
      for (std::size_t w = 0; w < q_gamma; ++w) emit(w, layout.write[w]);
      emit(q_gamma, layout.move[0]);
      if (next_state) {
        for (std::size_t s = 0; s < q_state; ++s) {
          emit(q_gamma + 1 + s, layout.state_history[cycle][s]);
        }
      }
    }
  }
  return circuit;
}

Circuit build_write(const QubitLayout& layout, std::size_t cycle) {
  Circuit circuit = layout.empty_circuit();
  const std::vector<Qubit>& read = layout.read_for(cycle);
  // Clearing with the read value first turns the XOR demultiplexer into a
  // replacement of the cell under the head.
  for (const std::vector<Qubit>* source : {&read, &layout.write}) {
    for (std::uint32_t i = 0; i < layout.spec.cells; ++i) {
      const std::vector<Qubit> cell = layout.cell(i);
      for (std::size_t b = 0; b < cell.size(); ++b) {
        std::vector<Control> controls = pattern(layout.head, i);
        controls.push_back(pos((*source)[b]));
        circuit.append(Gate::mcx(std::move(controls), cell[b]));
      }
    }
  }
  return circuit;
}

namespace {

using AddendBits = std::vector<std::optional<Qubit>>;

/// Ripple-carry addition head += addend (mod 2^q_head) built from carry and
/// sum blocks. Addend bits are qubits used only as controls, or absent for
/// constant zero. The carry into the top bit is accumulated directly on the
/// top head bit, so only q_head - 2 carry ancillas are needed.
std::vector<Gate> ripple_add(const QubitLayout& layout, const AddendBits& a) {
  const std::vector<Qubit>& b = layout.head;
  const std::size_t q = b.size();
  std::vector<Gate> gates;
  if (q == 0) return gates;
  // carry(i) is the carry into bit i; none for i == 0.
  auto carry = [&](std::size_t i) -> std::optional<Qubit> {
    if (i == 0) return std::nullopt;
    return layout.ancilla.at(i - 1);
  };
  auto sum = [&](std::size_t i) {
    if (a[i]) gates.push_back(Gate::cnot(pos(*a[i]), b[i]));
    if (auto c = carry(i)) gates.push_back(Gate::cnot(pos(*c), b[i]));
  };
  auto carry_into = [&](std::size_t i, Qubit out) {
    if (a[i]) {
      gates.push_back(Gate::toffoli(pos(*a[i]), pos(b[i]), out));
      gates.push_back(Gate::cnot(pos(*a[i]), b[i]));
    }
    if (auto c = carry(i)) gates.push_back(Gate::toffoli(pos(*c), pos(b[i]), out));
  };
  auto uncarry = [&](std::size_t i, Qubit out) {
    if (auto c = carry(i)) gates.push_back(Gate::toffoli(pos(*c), pos(b[i]), out));
    if (a[i]) {
      gates.push_back(Gate::cnot(pos(*a[i]), b[i]));
      gates.push_back(Gate::toffoli(pos(*a[i]), pos(b[i]), out));
    }
  };

  if (q == 1) {
    sum(0);
    return gates;
  }
  for (std::size_t i = 0; i + 2 < q; ++i) carry_into(i, *carry(i + 1));
  // Top: b[q-1] ^= carry into q-1, then ^= a[q-1].
  const std::size_t i = q - 2;
  if (carry(i)) {
    carry_into(i, b[q - 1]);
    if (a[i]) gates.push_back(Gate::cnot(pos(*a[i]), b[i]));
  } else if (a[i]) {
    gates.push_back(Gate::toffoli(pos(*a[i]), pos(b[i]), b[q - 1]));
  }
  if (a[q - 1]) gates.push_back(Gate::cnot(pos(*a[q - 1]), b[q - 1]));
  sum(i);
  for (std::size_t k = q - 2; k-- > 0;) {
    uncarry(k, *carry(k + 1));
    sum(k);
  }
  return gates;
}

}  // namespace

Circuit build_move(const QubitLayout& layout) {
  Circuit circuit = layout.empty_circuit();
  const std::uint32_t c = layout.spec.cells;
  const std::size_t q = layout.head.size();
  if (q == 0) return circuit;
  const Qubit move = layout.move[0];

  // With a wrap flag set the addend becomes k = 2^q - c + 1 instead of 1, so
  // c - 1 + k == 0 and 0 - k == c - 1 (mod 2^q).
  const bool wrap = layout.needs_wrap;
  const std::uint64_t k = wrap ? (std::uint64_t{1} << q) - c + 1 : 1;
  const bool fold_move = wrap && (k & 1) == 0;
  AddendBits addend(q);
  addend[0] = move;
  if (wrap) {
    for (std::size_t i = 1; i < q; ++i) {
      if ((k >> i) & 1) addend[i] = layout.wrap_qubit();
    }
  }
  const std::vector<Gate> add = ripple_add(layout, addend);

  auto flag = [&](std::uint64_t head_value) {
    std::vector<Control> controls = pattern(layout.head, head_value);
    controls.push_back(pos(move));
    circuit.append(Gate::mcx(std::move(controls), layout.wrap_qubit()));
  };
  // For odd c the low addend bit must be 0 while wrapping, i.e. move XOR wrap.
  auto fold = [&] {
    if (fold_move) circuit.append(Gate::cnot(pos(layout.wrap_qubit()), move));
  };

  // Increment when move == 1.
  if (wrap) flag(c - 1);
  fold();
  for (const Gate& g : add) circuit.append(g);
  fold();
  if (wrap) flag(0);

  // Decrement when move == 0.
  circuit.append(Gate::x(move));
  if (wrap) flag(0);
  fold();
  for (auto it = add.rbegin(); it != add.rend(); ++it) circuit.append(it->inverse());
  fold();
  if (wrap) flag(c - 1);
  circuit.append(Gate::x(move));
  return circuit;
}

Circuit build_reset(const QubitLayout& layout, std::size_t cycle) {
  Circuit circuit = build_delta(layout, cycle, false);
  if (layout.computes_next_state(cycle)) {
    const auto& slot = layout.state_history[cycle];
    for (std::size_t s = 0; s < layout.state.size(); ++s) {
      circuit.append(Gate::swap(layout.state[s], slot[s]));
    }
  }
  return circuit;
}

Circuit build_cycle(const QubitLayout& layout, std::size_t cycle) {
  Circuit circuit = build_read(layout, cycle);
  circuit.append(build_delta(layout, cycle, true));
  circuit.append(build_write(layout, cycle));
  circuit.append(build_move(layout));
  circuit.append(build_reset(layout, cycle));
  return circuit;
}

Circuit build_machine(const QubitLayout& layout) {
  Circuit circuit = build_init(layout);
  for (std::size_t k = 0; k < layout.spec.cycles; ++k) {
    circuit.append(build_cycle(layout, k));
  }
  return circuit;
}

Circuit build_machine(const MachineSpec& spec, LayoutMode mode) {
  return build_machine(plan_layout(spec, mode));
}

}  // namespace qpulba

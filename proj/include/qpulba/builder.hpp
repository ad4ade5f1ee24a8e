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

// Qubit layout planning and synthesis of the quantum parallel ULBA circuit:
// the FSM register holds a superposition of every description number and
// each cycle runs read, transition lookup, write, move and reset blocks.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qpulba/circuit.hpp"
#include "qpulba/ulba.hpp"

namespace qpulba {

enum class LayoutMode {
  kGeneral,
  /// Reproduces the published flat indexing for 2-2-1 (c=12, t=1) and
  /// 1-2-1 (c=4, t=4).
  kPublished,
};

std::string_view layout_mode_name(LayoutMode mode);

enum class BlockKind { kInit, kRead, kDelta, kWrite, kMove, kReset };

std::string_view block_kind_name(BlockKind kind);

/// Qubit assignment by role. Tape cell i, symbol bit b lives at
/// tape[i * q_gamma + b]; multi-bit registers are least-significant bit first.
struct QubitLayout {
  MachineSpec spec;
  LayoutMode mode = LayoutMode::kGeneral;

  std::vector<Qubit> fsm;
  std::vector<Qubit> state;  // current state, read by the lookup
  /// One slot per cycle that computes a next state. After that cycle's reset
  /// the slot holds the state the cycle started in.
  std::vector<std::vector<Qubit>> state_history;
  std::vector<Qubit> move;
  std::vector<Qubit> head;
  /// Read registers. Cycle k uses reads[min(k, reads.size() - 1)].
  std::vector<std::vector<Qubit>> reads;
  std::vector<Qubit> write;
  std::vector<Qubit> tape;
  std::vector<Qubit> ancilla;

  std::size_t qubit_count = 0;
  /// Adder carries, ancilla[0, carry_count).
  std::size_t carry_count = 0;
  /// Whether the head wrap flag ancilla[carry_count] is needed (c is not a
  /// power of two).
  bool needs_wrap = false;

  const std::vector<Qubit>& read_for(std::size_t cycle) const;
  bool computes_next_state(std::size_t cycle) const {
    return cycle < state_history.size();
  }
  /// Qubits of tape cell i.
  std::vector<Qubit> cell(std::size_t i) const;
  Qubit wrap_qubit() const { return ancilla.at(carry_count); }

  /// Every qubit of the STATE role (current state followed by history slots).
  std::vector<Qubit> state_role() const;
  /// Every qubit of the READ role.
  std::vector<Qubit> read_role() const;

  /// q_delta + q_state + q_move + q_head + q_read + q_write + q_tape + q_ch,
  /// the ancilla-free part of the qubit complexity formula.
  std::size_t formula_base() const;
  std::size_t ancilla_count() const { return ancilla.size(); }

  /// Empty circuit over this layout with all role registers attached.
  Circuit empty_circuit() const;
};

/// Ancilla qubits the move block needs for a tape of c cells:
/// max(q_head - 2, 0) carries plus one wrap flag when c is not a power of two.
std::size_t move_ancilla_count(std::uint32_t cells);

QubitLayout plan_layout(const MachineSpec& spec,
                        LayoutMode mode = LayoutMode::kGeneral);

/// Human-readable listing in the "ROLE : [indices]" format, ending with the
/// qubit total.
std::string layout_report_text(const QubitLayout& layout);
std::string layout_report_json(const QubitLayout& layout);

Circuit build_init(const QubitLayout& layout);
Circuit build_read(const QubitLayout& layout, std::size_t cycle);
Circuit build_delta(const QubitLayout& layout, std::size_t cycle,
                    bool include_next_state);
Circuit build_write(const QubitLayout& layout, std::size_t cycle);
Circuit build_move(const QubitLayout& layout);
Circuit build_reset(const QubitLayout& layout, std::size_t cycle);

/// One cycle: read, delta, write, move, reset.
Circuit build_cycle(const QubitLayout& layout, std::size_t cycle);

/// init followed by t cycles.
Circuit build_machine(const QubitLayout& layout);
Circuit build_machine(const MachineSpec& spec,
                      LayoutMode mode = LayoutMode::kGeneral);

}  // namespace qpulba

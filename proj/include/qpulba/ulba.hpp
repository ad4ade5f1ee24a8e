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

// Classical restricted universal linear bounded automaton: a stored-program
// Turing machine on a circular tape of c cells that is forced to halt after
// t steps. This is the ground truth every quantum result is checked against.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qpulba {

using ProgramNumber = std::uint64_t;

/// ceil(log2(value)), with ceil_log2(1) == 0.
int ceil_log2(std::uint64_t value);

/// Machine parameters (m states, n symbols, d tape dimensions, c cells,
/// t cycles). Only d == 1 with a circular tape is supported.
struct MachineSpec {
  std::uint32_t states = 1;   // m
  std::uint32_t symbols = 1;  // n
  std::uint32_t dimensions = 1;
  std::uint32_t cells = 1;    // c
  std::uint32_t cycles = 1;   // t

  /// m-n-1 machine run for t cycles on a tape of c = t cells.
  static MachineSpec make(std::uint32_t m, std::uint32_t n, std::uint32_t t);
  /// As make(), with t defaulted to the program size q_delta.
  static MachineSpec with_default_cycles(std::uint32_t m, std::uint32_t n);

  int symbol_bits() const { return ceil_log2(symbols); }  // q_gamma
  int state_bits() const { return ceil_log2(states); }    // q_state
  int head_bits() const { return ceil_log2(cells); }      // q_head
  int move_bits() const { return static_cast<int>(dimensions); }
  /// Bits per transition entry: next state, move, write.
  int entry_bits() const { return state_bits() + move_bits() + symbol_bits(); }
  int program_bits() const;  // q_delta
  /// Number of programs, 2^q_delta.
  std::uint64_t program_count() const;
  /// Computation-history qubits, (t-1) * (q_state + q_read).
  int history_bits() const;

  /// Throws UnsupportedSpec unless the parameters describe a machine this
  /// library can emulate and synthesize, including the causal-cone bound
  /// c <= 2t+1.
  void validate() const;
  /// validate() without the causal-cone bound. Single-cycle compilations of a
  /// full-length tape use this.
  void validate_shape() const;

  /// "m-n-d" label, e.g. "2-2-1".
  std::string label() const;

  bool operator==(const MachineSpec&) const = default;
};

/// Output of delta for one (state, read) pair. Fields are raw register codes:
/// next_state < 2^q_state and write < 2^q_gamma. For power-of-two m and n
/// these coincide with [0,m) and [0,n).
struct TransitionEntry {
  std::uint32_t next_state = 0;
  std::uint32_t move = 0;  // 0 = left, 1 = right
  std::uint32_t write = 0;

  bool operator==(const TransitionEntry&) const = default;
};

/// delta as a dense table indexed by state * n + read.
class TransitionTable {
 public:
  explicit TransitionTable(const MachineSpec& spec);

  const TransitionEntry& at(std::uint32_t state, std::uint32_t read) const;
  TransitionEntry& at(std::uint32_t state, std::uint32_t read);

  /// Entry that fires for (state, read). Codes outside [0,m) x [0,n) have
  /// no table row and yield the all-zero entry, which is what the circuit
  /// does when no lookup control pattern matches.
  TransitionEntry lookup(std::uint32_t state, std::uint32_t read) const;

  std::uint32_t states() const { return states_; }
  std::uint32_t symbols() const { return symbols_; }
  const std::vector<TransitionEntry>& entries() const { return entries_; }

  bool operator==(const TransitionTable&) const = default;

 private:
  std::uint32_t states_;
  std::uint32_t symbols_;
  std::vector<TransitionEntry> entries_;
};

/// Bit offset of the (state, read) entry inside a description number. Within
/// an entry the write field occupies the low bits, then the move bit, then
/// the next-state field.
std::size_t entry_offset(const MachineSpec& spec, std::uint32_t state,
                         std::uint32_t read);

TransitionTable decode_program(ProgramNumber number, const MachineSpec& spec);
ProgramNumber encode_program(const TransitionTable& table,
                             const MachineSpec& spec);

struct MachineConfig {
  std::vector<std::uint32_t> tape;
  std::vector<bool> written;  // rendering only, never read by step()
  std::uint32_t head = 0;
  std::uint32_t state = 0;
  std::uint32_t cycle = 0;

  /// All cells blank, head on cell 0, state Q0.
  static MachineConfig initial(const MachineSpec& spec);

  bool operator==(const MachineConfig&) const = default;
};

/// One transition: read, write, move, then change state.
MachineConfig step(const MachineConfig& config, const TransitionTable& table,
                   const MachineSpec& spec);

/// State and symbol observed at the start of one cycle.
struct TraceStep {
  std::uint32_t state = 0;
  std::uint32_t read = 0;
};

struct RunResult {
  MachineConfig final_config;
  std::vector<TraceStep> trace;  // one entry per executed cycle
};

MachineConfig run(ProgramNumber program, const MachineSpec& spec);
RunResult run_traced(ProgramNumber program, const MachineSpec& spec);

/// One character per cell from cell 0: 'o' for never-written cells, else the
/// symbol digit (0-9, then a-z).
std::string render_tape(const MachineConfig& config, const MachineSpec& spec);

struct EnumerationRecord {
  ProgramNumber program = 0;
  std::string final_tape;
  std::uint32_t final_state = 0;
  std::uint32_t final_head = 0;

  bool operator==(const EnumerationRecord&) const = default;
};

inline constexpr std::uint64_t kDefaultEnumerationGuard = std::uint64_t{1} << 20;

struct EnumerateOptions {
  std::uint64_t guard = kDefaultEnumerationGuard;
  unsigned jobs = 1;
};

/// Every program in [0, P), sorted by program number. Throws GuardExceeded
/// when P exceeds the guard.
std::vector<EnumerationRecord> enumerate(const MachineSpec& spec,
                                         const EnumerateOptions& options = {});

/// count programs drawn uniformly (with replacement) using the given seed,
/// returned sorted by program number. Used where P is too large to sweep.
std::vector<EnumerationRecord> sample_programs(const MachineSpec& spec,
                                               std::uint64_t count,
                                               std::uint64_t seed);

/// Frequency of each rendered final tape.
std::map<std::string, std::uint64_t> tape_histogram(
    const std::vector<EnumerationRecord>& records);

/// CSV with header program,final_tape,final_state,final_head.
std::string records_to_csv(const std::vector<EnumerationRecord>& records);
/// CSV with header final_tape,count, rows sorted by tape string.
std::string histogram_to_csv(
    const std::map<std::string, std::uint64_t>& histogram);

}  // namespace qpulba

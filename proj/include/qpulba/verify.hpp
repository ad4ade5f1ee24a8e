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

// Quantum/classical equivalence and block-level unit tests.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpulba/builder.hpp"
#include "qpulba/simulator.hpp"
#include "qpulba/ulba.hpp"

namespace qpulba {

inline constexpr std::uint64_t kDefaultBranchBudget = std::uint64_t{1} << 16;

struct EquivalenceOptions {
  LayoutMode mode = LayoutMode::kGeneral;
  /// Largest program count simulated; above it BudgetExceeded is thrown.
  std::uint64_t budget = kDefaultBranchBudget;
  Backend backend = Backend::kSparse;
  std::size_t dense_cap = kDefaultDenseCap;
};

struct BranchMismatch {
  ProgramNumber program = 0;
  std::string field;
  std::string expected;
  std::string actual;
};

struct EquivalenceReport {
  MachineSpec spec;
  LayoutMode mode = LayoutMode::kGeneral;
  std::size_t qubit_count = 0;
  std::uint64_t expected_branches = 0;
  std::uint64_t branch_count = 0;
  std::uint64_t matched = 0;
  std::uint64_t tape_matches = 0;
  std::uint64_t state_matches = 0;
  std::uint64_t head_matches = 0;
  double expected_amplitude = 0;
  double min_amplitude = 0;
  double max_amplitude = 0;
  bool uniform = false;
  /// Total number of mismatching fields; the list keeps the first few.
  std::uint64_t mismatch_count = 0;
  std::vector<BranchMismatch> mismatches;

  bool passed() const {
    return mismatch_count == 0 && branch_count == expected_branches && uniform;
  }
};

inline constexpr std::size_t kMaxListedMismatches = 64;

/// Builds and simulates the full machine, then checks every branch against
/// the classical run of the program held in its FSM register: tape (blanks as
/// 0), head, state, the computation history, zeroed WRITE/MOVE/ANCILLA and
/// amplitude 1/sqrt(P).
EquivalenceReport check_equivalence(const MachineSpec& spec,
                                    const EquivalenceOptions& options = {});

/// Per-branch check of an already simulated machine state.
EquivalenceReport compare_with_oracle(const QubitLayout& layout,
                                      const SparseState& state);

std::string equivalence_report_text(const EquivalenceReport& report);
std::string equivalence_report_json(const EquivalenceReport& report);

/// A block wrapped in the rotation and snapshot harness. Qubits are renumbered
/// compactly; the snapshot register TEST follows the block's qubits.
struct BlockTest {
  BlockKind block = BlockKind::kInit;
  QubitLayout layout;
  std::uint64_t seed = 0;
  Circuit circuit{0};
  /// Layout qubit of each compact block qubit.
  std::vector<Qubit> original;
  /// Compact index of each layout qubit, or kNoQubit.
  std::vector<Qubit> compact;
  /// Layout qubits copied into TEST before the block runs.
  std::vector<Qubit> targets;
  std::vector<Qubit> test;
  /// Layout qubits given an RY rotation, with their angles.
  std::vector<Qubit> rotated;
  std::vector<double> angles;

  static constexpr Qubit kNoQubit = ~Qubit{0};
  std::size_t block_qubits() const { return original.size(); }
};

/// RY rotations with seeded angles in (0, pi) on the block's inputs, CNOT
/// fan-out of the target register onto TEST, then the block. WRITE is
/// preceded by READ and RESET by DELTA, which establish their preconditions.
BlockTest build_block_test(BlockKind block, const QubitLayout& layout,
                           std::uint64_t seed);

struct BlockBranch {
  std::string old_value;
  std::string new_value;
  bool ok = true;
};

struct BlockTestReport {
  BlockKind block = BlockKind::kInit;
  MachineSpec spec;
  LayoutMode mode = LayoutMode::kGeneral;
  std::size_t trials = 0;
  std::size_t circuit_qubits = 0;
  std::size_t test_qubits = 0;
  std::uint64_t branches_checked = 0;
  /// Branches whose head code is not a cell index; MOVE makes no promise there.
  std::uint64_t branches_out_of_domain = 0;
  std::uint64_t failures = 0;
  /// Whether the dense backend was run as well, and the largest difference.
  bool dense_checked = false;
  double dense_difference = 0;
  /// (old, new) target values of the first trial, capped.
  std::vector<BlockBranch> pairs;

  bool passed() const {
    return failures == 0 && branches_checked > 0 &&
           (!dense_checked || dense_difference <= 1e-10);
  }
};

inline constexpr std::size_t kMaxListedPairs = 4096;
/// Harnesses rotating more qubits than this are refused with BudgetExceeded.
inline constexpr std::size_t kMaxRotatedQubits = 24;
/// Block circuits up to this width are also simulated densely.
inline constexpr std::size_t kBlockDenseLimit = 20;

/// Simulates one harness and checks each branch against the block's
/// basis-state contract.
BlockTestReport check_block_test(const BlockTest& test);

/// Runs trials harnesses with seeds seed, seed + 1, ... and merges the
/// reports.
BlockTestReport check_block(BlockKind block, const QubitLayout& layout,
                            std::size_t trials, std::uint64_t seed = 0);

std::string block_report_text(const BlockTestReport& report);
std::string block_report_json(const BlockTestReport& report);

}  // namespace qpulba

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

// Lowering of polarity-typed multi-controlled X gates to the base gate set
// {H, X, RY, CNOT, TOFFOLI, SWAP}.

#pragma once

#include <optional>
#include <string>

#include "qpulba/circuit.hpp"

namespace qpulba {

enum class LoweringStrategy {
  /// Toffoli V-chain through freshly allocated zeroed ancillas
  /// (2k - 3 Toffolis for k controls).
  kCleanChain,
  /// Toffoli chain through idle qubits that are restored afterwards
  /// (4(k - 2) Toffolis for k controls).
  kBorrowedBit,
};

std::string_view strategy_name(LoweringStrategy strategy);

struct LoweringOptions {
  LoweringStrategy strategy = LoweringStrategy::kBorrowedBit;
  /// When borrowing finds too few idle qubits, allocate zeroed ones instead
  /// of failing.
  bool allow_allocation = true;
};

/// Name of the register holding qubits allocated by lowering.
inline constexpr std::string_view kLoweringAncillaRegister = "LOWERING_ANCILLA";

/// Replaces every negative control by a positive one conjugated with X, then
/// cancels X pairs it inserted back to back on the same qubit.
Circuit resolve_negative_controls(const Circuit& circuit);

/// Rewrites CNOT/TOFFOLI-shaped MCX gates to those kinds and decomposes wider
/// ones. Requires positive controls only. Throws InsufficientAncilla naming
/// the gate index when borrowing fails and allocation is disallowed.
Circuit lower_mcx(const Circuit& circuit, const LoweringOptions& options = {});

/// resolve_negative_controls followed by lower_mcx.
Circuit transpile(const Circuit& circuit, const LoweringOptions& options = {});

/// Only base-set gates with positive controls.
bool is_lowered(const Circuit& circuit);

/// Published census for one cycle of the 2-2-1 machine.
GateStats published_221_cycle_census();

/// Per-kind counts; with a reference, adds reference and delta columns.
std::string stats_report_text(const GateStats& stats,
                              const std::optional<GateStats>& reference = {});
std::string stats_report_json(const GateStats& stats,
                              const std::optional<GateStats>& reference = {});

}  // namespace qpulba

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

#include "qpulba/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "qpulba/errors.hpp"

namespace qpulba {

namespace {

char symbol_char(std::uint64_t symbol) {
  return static_cast<char>(symbol < 10 ? '0' + symbol : 'a' + (symbol - 10));
}

std::string bits_text(std::uint64_t value, std::size_t width) {
  std::string out(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if ((value >> i) & 1) out[width - 1 - i] = '1';
  }
  return out;
}

std::string spec_text(const MachineSpec& spec, LayoutMode mode) {
  return spec.label() + " c=" + std::to_string(spec.cells) +
         " t=" + std::to_string(spec.cycles) + " (" +
         std::string(layout_mode_name(mode)) + ")";
}

}  // namespace

EquivalenceReport compare_with_oracle(const QubitLayout& layout,
                                      const SparseState& state) {
  const MachineSpec& spec = layout.spec;
  EquivalenceReport report;
  report.spec = spec;
  report.mode = layout.mode;
  report.qubit_count = layout.qubit_count;
  report.expected_branches = spec.program_count();
  report.branch_count = state.branch_count();
  report.expected_amplitude = 1.0 / std::sqrt(static_cast<double>(report.expected_branches));
  report.min_amplitude = state.branches().empty() ? 0 : state.branches()[0].amplitude;
  report.max_amplitude = report.min_amplitude;

  const std::size_t cycles = spec.cycles;
  const std::size_t slots = layout.state_history.size();
  std::vector<bool> seen(report.expected_branches, false);

  for (const Branch& branch : state.branches()) {
    const BasisState& bits = branch.bits;
    const ProgramNumber program = bits.extract(layout.fsm);
    bool ok = true;
    auto fail = [&](std::string field, std::string expected, std::string actual) {
      ok = false;
      ++report.mismatch_count;
      if (report.mismatches.size() < kMaxListedMismatches) {
        report.mismatches.push_back(
            {program, std::move(field), std::move(expected), std::move(actual)});
      }
    };
    auto check_value = [&](const std::string& field, std::uint64_t expected,
                           std::uint64_t actual) {
      if (expected != actual) fail(field, std::to_string(expected), std::to_string(actual));
      return expected == actual;
    };

    report.min_amplitude = std::min(report.min_amplitude, branch.amplitude);
    report.max_amplitude = std::max(report.max_amplitude, branch.amplitude);
    if (std::abs(branch.amplitude - report.expected_amplitude) > 1e-9) {
      fail("amplitude", std::to_string(report.expected_amplitude),
           std::to_string(branch.amplitude));
    }
    if (seen[program]) fail("fsm", "distinct program", "repeated");
    seen[program] = true;

    const RunResult run = run_traced(program, spec);
    const MachineConfig& final_config = run.final_config;

    std::string expected_tape;
    std::string actual_tape;
    for (std::uint32_t i = 0; i < spec.cells; ++i) {
      expected_tape += symbol_char(final_config.tape[i]);
      actual_tape += symbol_char(bits.extract(layout.cell(i)));
    }
    if (expected_tape == actual_tape) {
      ++report.tape_matches;
    } else {
      fail("tape", expected_tape, actual_tape);
    }
    if (check_value("head", final_config.head, bits.extract(layout.head))) {
      ++report.head_matches;
    }

    const std::uint64_t held_state = bits.extract(layout.state);
    bool state_ok = true;
    if (slots >= cycles || cycles == 0) {
      state_ok = check_value("state", final_config.state, held_state);
    } else {
      // The last cycle leaves the state it started in; its successor is a
      // function of registers that are still present.
      state_ok = check_value("state", run.trace[cycles - 1].state, held_state);
      const TransitionTable table = decode_program(program, spec);
      const std::uint64_t last_read = bits.extract(layout.read_for(cycles - 1));
      state_ok &= check_value(
          "final_state", final_config.state,
          table.lookup(static_cast<std::uint32_t>(held_state),
                       static_cast<std::uint32_t>(last_read))
              .next_state);
    }
    if (state_ok) ++report.state_matches;

    for (std::size_t k = 0; k < slots && k < cycles; ++k) {
      check_value("state_history_" + std::to_string(k), run.trace[k].state,
                  bits.extract(layout.state_history[k]));
    }
    std::vector<std::uint64_t> expected_reads(layout.reads.size(), 0);
    for (std::size_t k = 0; k < cycles; ++k) {
      expected_reads[std::min(k, layout.reads.size() - 1)] ^= run.trace[k].read;
    }
    for (std::size_t j = 0; j < layout.reads.size(); ++j) {
      check_value("read_" + std::to_string(j), expected_reads[j],
                  bits.extract(layout.reads[j]));
    }
    check_value("write", 0, bits.extract(layout.write));
    check_value("move", 0, bits.extract(layout.move));
    check_value("ancilla", 0, bits.extract(layout.ancilla));
    if (ok) ++report.matched;
  }
  report.uniform = report.branch_count > 0 &&
                   report.max_amplitude - report.min_amplitude <= 1e-9 &&
                   std::abs(report.min_amplitude - report.expected_amplitude) <= 1e-9;
  return report;
}

EquivalenceReport check_equivalence(const MachineSpec& spec,
                                    const EquivalenceOptions& options) {
  const QubitLayout layout = plan_layout(spec, options.mode);
  if (spec.program_count() > options.budget) {
    throw BudgetExceeded(spec.label() + " has " + std::to_string(spec.program_count()) +
                         " branches, over the budget of " +
                         std::to_string(options.budget));
  }
  RunOptions run;
  run.backend = options.backend;
  run.dense_cap = options.dense_cap;
  return compare_with_oracle(layout, simulate(build_machine(layout), run));
}

std::string equivalence_report_text(const EquivalenceReport& report) {
  std::ostringstream out;
  out << "machine: " << spec_text(report.spec, report.mode) << '\n';
  out << "qubits: " << report.qubit_count << '\n';
  out << "branches: " << report.branch_count << " (expected "
      << report.expected_branches << ")\n";
  out << "amplitude: min " << report.min_amplitude << " max " << report.max_amplitude
      << " expected " << report.expected_amplitude << '\n';
  out << "tape " << report.tape_matches << '/' << report.branch_count << ", state "
      << report.state_matches << '/' << report.branch_count << ", head "
      << report.head_matches << '/' << report.branch_count << '\n';
  for (const BranchMismatch& m : report.mismatches) {
    out << "mismatch: program " << m.program << ' ' << m.field << " expected "
        << m.expected << " got " << m.actual << '\n';
  }
  if (report.mismatch_count > report.mismatches.size()) {
    out << "... " << report.mismatch_count - report.mismatches.size()
        << " more mismatches\n";
  }
  out << report.matched << '/' << report.expected_branches << " branches match\n";
  out << "result: " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

std::string equivalence_report_json(const EquivalenceReport& report) {
  nlohmann::ordered_json doc;
  doc["machine"] = report.spec.label();
  doc["cells"] = report.spec.cells;
  doc["cycles"] = report.spec.cycles;
  doc["mode"] = std::string(layout_mode_name(report.mode));
  doc["qubits"] = report.qubit_count;
  doc["branches"] = report.branch_count;
  doc["expected_branches"] = report.expected_branches;
  doc["matched"] = report.matched;
  doc["tape_matches"] = report.tape_matches;
  doc["state_matches"] = report.state_matches;
  doc["head_matches"] = report.head_matches;
  doc["amplitude"] = {{"expected", report.expected_amplitude},
                      {"min", report.min_amplitude},
                      {"max", report.max_amplitude},
                      {"uniform", report.uniform}};
  doc["mismatch_count"] = report.mismatch_count;
  doc["mismatches"] = nlohmann::ordered_json::array();
  for (const BranchMismatch& m : report.mismatches) {
    doc["mismatches"].push_back({{"program", m.program},
                                 {"field", m.field},
                                 {"expected", m.expected},
                                 {"actual", m.actual}});
  }
  doc["passed"] = report.passed();
  return doc.dump(2) + "\n";
}

// Block tests --------------------------------------------------------------

namespace {

struct BlockPlan {
  std::vector<Qubit> involved;
  std::vector<Qubit> rotated;
  std::vector<Qubit> targets;
  Circuit body{0};
};

void add(std::vector<Qubit>& to, const std::vector<Qubit>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

std::vector<Qubit> next_slot(const QubitLayout& layout) {
  return layout.computes_next_state(0) ? layout.state_history[0] : std::vector<Qubit>{};
}

BlockPlan plan_block(BlockKind block, const QubitLayout& layout) {
  BlockPlan plan;
  const std::vector<Qubit>& read = layout.read_for(0);
  const std::vector<Qubit> slot = next_slot(layout);
  switch (block) {
    case BlockKind::kInit:
      add(plan.involved, layout.fsm);
      plan.body = build_init(layout);
      break;
    case BlockKind::kRead:
      for (const auto* r : {&layout.head, &layout.tape, &read}) add(plan.involved, *r);
      plan.rotated = plan.involved;
      plan.targets = read;
      plan.body = build_read(layout, 0);
      break;
    case BlockKind::kDelta:
      for (const auto* r : {&layout.fsm, &layout.state, &read, &slot, &layout.move,
                            &layout.write}) {
        add(plan.involved, *r);
      }
      plan.rotated = plan.involved;
      for (const auto* r : {&slot, &layout.move, &layout.write}) add(plan.targets, *r);
      plan.body = build_delta(layout, 0, true);
      break;
    case BlockKind::kWrite:
      for (const auto* r : {&layout.head, &layout.tape, &read, &layout.write}) {
        add(plan.involved, *r);
      }
      for (const auto* r : {&layout.head, &layout.tape, &layout.write}) {
        add(plan.rotated, *r);
      }
      plan.targets = layout.tape;
      plan.body = build_read(layout, 0);
      plan.body.append(build_write(layout, 0));
      break;
    case BlockKind::kMove:
      for (const auto* r : {&layout.move, &layout.head, &layout.ancilla}) {
        add(plan.involved, *r);
      }
      add(plan.rotated, layout.move);
      add(plan.rotated, layout.head);
      plan.targets = layout.head;
      plan.body = build_move(layout);
      break;
    case BlockKind::kReset:
      for (const auto* r : {&layout.fsm, &layout.state, &read, &slot, &layout.move,
                            &layout.write}) {
        add(plan.involved, *r);
      }
      for (const auto* r : {&layout.fsm, &layout.state, &read}) add(plan.rotated, *r);
      plan.targets = layout.state;
      plan.body = build_delta(layout, 0, true);
      plan.body.append(build_reset(layout, 0));
      break;
  }
  std::sort(plan.involved.begin(), plan.involved.end());
  return plan;
}

Qubit remap(const BlockTest& test, Qubit q) {
  const Qubit c = test.compact.at(q);
  if (c == BlockTest::kNoQubit) {
    throw InvalidGate("block touches qubit " + std::to_string(q) +
                      " outside its registers");
  }
  return c;
}

std::vector<Qubit> remap(const BlockTest& test, const std::vector<Qubit>& qubits) {
  std::vector<Qubit> out;
  out.reserve(qubits.size());
  for (Qubit q : qubits) out.push_back(remap(test, q));
  return out;
}

}  // namespace

BlockTest build_block_test(BlockKind block, const QubitLayout& layout,
                           std::uint64_t seed) {
  BlockPlan plan = plan_block(block, layout);
  if (plan.rotated.size() > kMaxRotatedQubits) {
    throw BudgetExceeded(std::string(block_kind_name(block)) + " harness on " +
                         layout.spec.label() + " rotates " +
                         std::to_string(plan.rotated.size()) + " qubits, over the limit of " +
                         std::to_string(kMaxRotatedQubits));
  }
  BlockTest test;
  test.block = block;
  test.layout = layout;
  test.seed = seed;
  test.original = plan.involved;
  test.compact.assign(layout.qubit_count, BlockTest::kNoQubit);
  for (std::size_t i = 0; i < plan.involved.size(); ++i) {
    test.compact[plan.involved[i]] = static_cast<Qubit>(i);
  }
  test.targets = plan.targets;
  test.rotated = plan.rotated;

  const std::size_t width = plan.involved.size();
  test.circuit = Circuit(width + plan.targets.size());
  const Circuit roles = layout.empty_circuit();
  for (const Register& r : roles.registers()) {
    std::vector<Qubit> kept;
    for (Qubit q : r.qubits) {
      if (test.compact[q] != BlockTest::kNoQubit) kept.push_back(test.compact[q]);
    }
    if (!kept.empty()) test.circuit.add_register(r.name, kept);
  }
  for (std::size_t i = 0; i < plan.targets.size(); ++i) {
    test.test.push_back(static_cast<Qubit>(width + i));
  }
  if (!test.test.empty()) test.circuit.add_register("TEST", test.test);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  for (Qubit q : plan.rotated) {
    double theta = angle(rng);
    while (theta < 1e-3 || std::abs(theta - std::numbers::pi / 2) < 1e-3 ||
           theta > std::numbers::pi - 1e-3) {
      theta = angle(rng);
    }
    test.angles.push_back(theta);
    test.circuit.append(Gate::ry(remap(test, q), theta));
  }
  for (std::size_t i = 0; i < plan.targets.size(); ++i) {
    test.circuit.append(Gate::cnot(pos(remap(test, plan.targets[i])), test.test[i]));
  }
  for (Gate g : plan.body.gates()) {
    for (Qubit& q : g.targets) q = remap(test, q);
    for (Control& c : g.controls) c.qubit = remap(test, c.qubit);
    test.circuit.append(std::move(g));
  }
  return test;
}

namespace {

enum class Verdict { kPass, kFail, kOutOfDomain };

class BranchView {
 public:
  BranchView(const BlockTest& test, const BasisState& bits) : test_(test), bits_(bits) {}
  std::uint64_t operator()(const std::vector<Qubit>& layout_qubits) const {
    return bits_.extract(remap(test_, layout_qubits));
  }
  std::uint64_t snapshot() const { return bits_.extract(test_.test); }

 private:
  const BlockTest& test_;
  const BasisState& bits_;
};

Verdict check_branch(const BlockTest& test, const Branch& branch,
                     std::uint64_t& old_value, std::uint64_t& new_value) {
  const QubitLayout& layout = test.layout;
  const MachineSpec& spec = layout.spec;
  const BranchView value(test, branch.bits);
  const std::vector<Qubit>& read = layout.read_for(0);
  old_value = value.snapshot();
  new_value = test.targets.empty() ? 0 : value(test.targets);
  auto verdict = [](bool ok) { return ok ? Verdict::kPass : Verdict::kFail; };

  switch (test.block) {
    case BlockKind::kInit: {
      const double expected =
          1.0 / std::sqrt(static_cast<double>(spec.program_count()));
      return verdict(std::abs(branch.amplitude - expected) <= 1e-9);
    }
    case BlockKind::kRead: {
      const std::uint64_t head = value(layout.head);
      const std::uint64_t symbol = head < spec.cells ? value(layout.cell(head)) : 0;
      return verdict(new_value == (old_value ^ symbol));
    }
    case BlockKind::kDelta: {
      const TransitionEntry entry =
          decode_program(value(layout.fsm), spec)
              .lookup(static_cast<std::uint32_t>(value(layout.state)),
                      static_cast<std::uint32_t>(value(read)));
      const std::size_t slot_bits = next_slot(layout).size();
      std::uint64_t flip = (slot_bits ? entry.next_state : 0) |
                           (std::uint64_t{entry.move} << slot_bits) |
                           (std::uint64_t{entry.write} << (slot_bits + 1));
      return verdict(new_value == (old_value ^ flip));
    }
    case BlockKind::kWrite: {
      const std::uint64_t head = value(layout.head);
      const std::size_t bits = static_cast<std::size_t>(spec.symbol_bits());
      if (head >= spec.cells) {
        return verdict(new_value == old_value && value(read) == 0);
      }
      const std::size_t shift = head * bits;
      const std::uint64_t mask = ((std::uint64_t{1} << bits) - 1) << shift;
      const std::uint64_t old_symbol = (old_value & mask) >> shift;
      const std::uint64_t expected =
          (old_value & ~mask) | (value(layout.write) << shift);
      return verdict(new_value == expected && value(read) == old_symbol);
    }
    case BlockKind::kMove: {
      if (old_value >= spec.cells) return Verdict::kOutOfDomain;
      const std::uint64_t c = spec.cells;
      const std::uint64_t expected =
          value(layout.move) ? (old_value + 1) % c : (old_value + c - 1) % c;
      return verdict(new_value == expected && value(layout.ancilla) == 0);
    }
    case BlockKind::kReset: {
      const TransitionEntry entry =
          decode_program(value(layout.fsm), spec)
              .lookup(static_cast<std::uint32_t>(old_value),
                      static_cast<std::uint32_t>(value(read)));
      const std::vector<Qubit> slot = next_slot(layout);
      const std::uint64_t expected_state = slot.empty() ? old_value : entry.next_state;
      bool ok = new_value == expected_state && value(layout.move) == 0 &&
                value(layout.write) == 0;
      if (!slot.empty()) ok &= value(slot) == old_value;
      return verdict(ok);
    }
  }
  return Verdict::kFail;
}

}  // namespace

BlockTestReport check_block_test(const BlockTest& test) {
  const QubitLayout& layout = test.layout;
  BlockTestReport report;
  report.block = test.block;
  report.spec = layout.spec;
  report.mode = layout.mode;
  report.trials = 1;
  report.circuit_qubits = test.block_qubits();
  report.test_qubits = test.test.size();
  if (test.targets.size() > 64) {
    throw CapExceeded("block target register wider than 64 qubits");
  }
  const SparseState state = simulate(test.circuit);
  if (test.circuit.qubit_count() <= kBlockDenseLimit) {
    RunOptions dense;
    dense.backend = Backend::kDense;
    report.dense_checked = true;
    report.dense_difference = max_abs_difference(state, simulate(test.circuit, dense));
  }
  if (test.block == BlockKind::kInit &&
      state.branch_count() != layout.spec.program_count()) {
    ++report.failures;
  }
  for (const Branch& branch : state.branches()) {
    std::uint64_t old_value = 0;
    std::uint64_t new_value = 0;
    const Verdict verdict = check_branch(test, branch, old_value, new_value);
    if (verdict == Verdict::kOutOfDomain) {
      ++report.branches_out_of_domain;
      continue;
    }
    ++report.branches_checked;
    if (verdict == Verdict::kFail) ++report.failures;
    if (report.pairs.size() < kMaxListedPairs) {
      report.pairs.push_back({bits_text(old_value, test.targets.size()),
                              bits_text(new_value, test.targets.size()),
                              verdict == Verdict::kPass});
    }
  }
  return report;
}

BlockTestReport check_block(BlockKind block, const QubitLayout& layout,
                            std::size_t trials, std::uint64_t seed) {
  BlockTestReport report;
  report.block = block;
  report.spec = layout.spec;
  report.mode = layout.mode;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    BlockTestReport one = check_block_test(build_block_test(block, layout, seed + trial));
    report.trials += 1;
    report.circuit_qubits = one.circuit_qubits;
    report.test_qubits = one.test_qubits;
    report.branches_checked += one.branches_checked;
    report.branches_out_of_domain += one.branches_out_of_domain;
    report.failures += one.failures;
    report.dense_checked = report.dense_checked || one.dense_checked;
    report.dense_difference = std::max(report.dense_difference, one.dense_difference);
    if (trial == 0) report.pairs = std::move(one.pairs);
  }
  return report;
}

std::string block_report_text(const BlockTestReport& report) {
  std::ostringstream out;
  out << "block: " << block_kind_name(report.block) << " on "
      << spec_text(report.spec, report.mode) << '\n';
  out << "qubits: " << report.circuit_qubits << " circuit + " << report.test_qubits
      << " test\n";
  out << "trials: " << report.trials << '\n';
  out << "branches checked: " << report.branches_checked;
  if (report.branches_out_of_domain) {
    out << " (" << report.branches_out_of_domain << " with head outside the tape)";
  }
  out << '\n';
  out << "failures: " << report.failures << '\n';
  if (report.dense_checked) {
    out << "dense cross-check: max difference " << report.dense_difference << '\n';
  } else {
    out << "dense cross-check: skipped (over " << kBlockDenseLimit << " qubits)\n";
  }
  out << "result: " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

std::string block_report_json(const BlockTestReport& report) {
  nlohmann::ordered_json doc;
  doc["block"] = std::string(block_kind_name(report.block));
  doc["machine"] = report.spec.label();
  doc["cells"] = report.spec.cells;
  doc["cycles"] = report.spec.cycles;
  doc["mode"] = std::string(layout_mode_name(report.mode));
  doc["trials"] = report.trials;
  doc["circuit_qubits"] = report.circuit_qubits;
  doc["test_qubits"] = report.test_qubits;
  doc["branches_checked"] = report.branches_checked;
  doc["branches_out_of_domain"] = report.branches_out_of_domain;
  doc["failures"] = report.failures;
  doc["dense_checked"] = report.dense_checked;
  doc["dense_difference"] = report.dense_difference;
  doc["pairs"] = nlohmann::ordered_json::array();
  for (const BlockBranch& p : report.pairs) {
    doc["pairs"].push_back({{"old", p.old_value}, {"new", p.new_value}, {"ok", p.ok}});
  }
  doc["passed"] = report.passed();
  return doc.dump(2) + "\n";
}

}  // namespace qpulba

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

// qpulba: plan, enumerate, build, transpile, simulate, verify, export and
// block-test QPULBA machines.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error,
// 3 guard, budget or cap refusal.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpulba/builder.hpp"
#include "qpulba/circuit.hpp"
#include "qpulba/errors.hpp"
#include "qpulba/qasm.hpp"
#include "qpulba/simulator.hpp"
#include "qpulba/transpile.hpp"
#include "qpulba/ulba.hpp"
#include "qpulba/verify.hpp"
#include "qpulba/version.hpp"

namespace {

using qpulba::Circuit;
using qpulba::LayoutMode;
using qpulba::MachineSpec;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLimit = 3;

struct Options {
  std::string command;
  std::uint32_t states = 0;
  std::uint32_t symbols = 0;
  std::optional<std::uint32_t> cells;
  std::optional<std::uint32_t> cycles;
  std::string mode = "general";
  std::string backend = "sparse";
  std::string strategy = "borrowed";
  std::optional<std::uint64_t> program;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> guard;
  std::string out;
  std::string format;
  unsigned jobs = 1;
  bool first_cycle = false;
  bool histogram = false;
  std::uint64_t sample = 0;
  std::string reg = "TAPE";
  std::uint64_t shots = 0;
  std::string block = "all";
  std::size_t trials = 1;
};

MachineSpec spec_of(const Options& o) {
  MachineSpec spec;
  spec.states = o.states;
  spec.symbols = o.symbols;
  spec.dimensions = 1;
  spec.cycles = o.cycles ? *o.cycles : static_cast<std::uint32_t>(
                                           MachineSpec::with_default_cycles(o.states, o.symbols)
                                               .cycles);
  spec.cells = o.cells ? *o.cells : spec.cycles;
  return spec;
}

LayoutMode mode_of(const Options& o) {
  return o.mode == "paper-compat" ? LayoutMode::kPublished : LayoutMode::kGeneral;
}

qpulba::LoweringOptions lowering_of(const Options& o) {
  qpulba::LoweringOptions lowering;
  lowering.strategy = o.strategy == "clean" ? qpulba::LoweringStrategy::kCleanChain
                                            : qpulba::LoweringStrategy::kBorrowedBit;
  return lowering;
}

Json manifest(const Options& o, const MachineSpec& spec) {
  Json doc;
  doc["tool"] = "qpulba";
  doc["version"] = qpulba::kVersion;
  doc["command"] = o.command;
  doc["spec"] = {{"states", spec.states},   {"symbols", spec.symbols},
                 {"dimensions", 1},         {"cells", spec.cells},
                 {"cycles", spec.cycles}};
  doc["mode"] = o.mode;
  doc["backend"] = o.backend;
  doc["strategy"] = o.strategy;
  doc["seed"] = o.seed;
  doc["guard"] = o.guard ? Json(*o.guard) : Json(nullptr);
  doc["program"] = o.program ? Json(*o.program) : Json(nullptr);
  doc["first_cycle"] = o.first_cycle;
  doc["format"] = o.format;
  doc["outputs"] = Json::array({o.out});
  return doc;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw qpulba::Error("cannot open " + path + " for writing");
  file << text;
  if (!file) throw qpulba::Error("failed writing " + path);
}

/// Writes text to --out with its manifest, or to stdout.
void emit(const Options& o, const MachineSpec& spec, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  write_file(o.out, text);
  write_file(o.out + ".manifest.json", manifest(o, spec).dump(2) + "\n");
  std::cout << "wrote " << o.out << '\n';
}

Circuit machine_circuit(const Options& o, const qpulba::QubitLayout& layout) {
  if (!o.first_cycle) return qpulba::build_machine(layout);
  Circuit circuit = qpulba::build_init(layout);
  circuit.append(qpulba::build_cycle(layout, 0));
  return circuit;
}

bool is_221(const MachineSpec& spec) { return spec.states == 2 && spec.symbols == 2; }

int run_plan(const Options& o) {
  const MachineSpec spec = spec_of(o);
  const qpulba::QubitLayout layout = qpulba::plan_layout(spec, mode_of(o));
  emit(o, spec, o.format == "json" ? qpulba::layout_report_json(layout)
                                   : qpulba::layout_report_text(layout));
  return kExitOk;
}

std::string records_json(const std::vector<qpulba::EnumerationRecord>& records) {
  Json doc = Json::array();
  for (const auto& r : records) {
    doc.push_back({{"program", r.program},
                   {"final_tape", r.final_tape},
                   {"final_state", r.final_state},
                   {"final_head", r.final_head}});
  }
  return doc.dump(2) + "\n";
}

std::string histogram_json(const std::map<std::string, std::uint64_t>& histogram) {
  Json doc = Json::object();
  for (const auto& [tape, count] : histogram) doc[tape] = count;
  return doc.dump(2) + "\n";
}

int run_enumerate(const Options& o) {
  const MachineSpec spec = spec_of(o);
  if (o.program) {
    spec.validate();
    if (*o.program >= spec.program_count()) {
      throw qpulba::RangeError("program " + std::to_string(*o.program) +
                               " is not below " + std::to_string(spec.program_count()));
    }
    const qpulba::RunResult run = qpulba::run_traced(*o.program, spec);
    std::vector<qpulba::EnumerationRecord> one{
        {*o.program, qpulba::render_tape(run.final_config, spec),
         run.final_config.state, run.final_config.head}};
    emit(o, spec, o.format == "json" ? records_json(one) : qpulba::records_to_csv(one));
    return kExitOk;
  }
  std::vector<qpulba::EnumerationRecord> records;
  if (o.sample > 0) {
    records = qpulba::sample_programs(spec, o.sample, o.seed);
  } else {
    qpulba::EnumerateOptions options;
    options.guard = o.guard.value_or(qpulba::kDefaultEnumerationGuard);
    options.jobs = o.jobs;
    records = qpulba::enumerate(spec, options);
  }
  std::string text;
  if (o.histogram) {
    const auto histogram = qpulba::tape_histogram(records);
    text = o.format == "json" ? histogram_json(histogram) : qpulba::histogram_to_csv(histogram);
  } else {
    text = o.format == "json" ? records_json(records) : qpulba::records_to_csv(records);
  }
  emit(o, spec, text);
  return kExitOk;
}

int run_build(const Options& o) {
  const MachineSpec spec = spec_of(o);
  const Circuit circuit = machine_circuit(o, qpulba::plan_layout(spec, mode_of(o)));
  emit(o, spec, o.format == "txt" ? qpulba::stats_report_text(qpulba::stats(circuit))
                                  : qpulba::circuit_to_json(circuit));
  return kExitOk;
}

int run_transpile(const Options& o) {
  const MachineSpec spec = spec_of(o);
  const Circuit lowered = qpulba::transpile(
      machine_circuit(o, qpulba::plan_layout(spec, mode_of(o))), lowering_of(o));
  std::optional<qpulba::GateStats> reference;
  if (is_221(spec) && o.first_cycle) reference = qpulba::published_221_cycle_census();
  const qpulba::GateStats counts = qpulba::stats(lowered);
  std::cout << "qubits: " << lowered.qubit_count() << '\n';
  std::cout << (o.format == "json" ? qpulba::stats_report_json(counts, reference)
                                   : qpulba::stats_report_text(counts, reference));
  if (!o.out.empty()) emit(o, spec, qpulba::circuit_to_json(lowered));
  return kExitOk;
}

qpulba::Backend backend_of(const Options& o) {
  return o.backend == "dense" ? qpulba::Backend::kDense : qpulba::Backend::kSparse;
}

void check_budget(const Options& o, const MachineSpec& spec) {
  const std::uint64_t budget = o.guard.value_or(qpulba::kDefaultBranchBudget);
  if (spec.program_count() > budget) {
    throw qpulba::BudgetExceeded(spec.label() + " has " +
                                 std::to_string(spec.program_count()) +
                                 " branches, over the budget of " + std::to_string(budget));
  }
}

int run_simulate(const Options& o) {
  const MachineSpec spec = spec_of(o);
  check_budget(o, spec);
  const qpulba::QubitLayout layout = qpulba::plan_layout(spec, mode_of(o));
  const Circuit circuit = machine_circuit(o, layout);
  qpulba::RunOptions run;
  run.backend = backend_of(o);
  qpulba::SparseState state = qpulba::simulate(circuit, run);
  if (o.program) {
    std::vector<qpulba::Branch> kept;
    double norm = 0;
    for (const qpulba::Branch& b : state.branches()) {
      if (b.bits.extract(layout.fsm) == *o.program) {
        kept.push_back(b);
        norm += b.amplitude * b.amplitude;
      }
    }
    if (kept.empty()) {
      throw qpulba::RangeError("no branch holds program " + std::to_string(*o.program));
    }
    // Condition on the program register.
    for (qpulba::Branch& b : kept) b.amplitude /= std::sqrt(norm);
    state = qpulba::SparseState::from_branches(state.qubit_count(), std::move(kept));
  }
  const qpulba::Distribution dist = qpulba::marginal(state, circuit, o.reg);
  std::string summary;
  if (o.shots > 0) {
    Json counts = Json::object();
    for (const auto& [bits, n] : qpulba::sample_counts(dist, o.shots, o.seed)) {
      counts[bits] = n;
    }
    summary = counts.dump(2) + "\n";
  } else if (o.format == "json") {
    summary = qpulba::distribution_to_json(dist);
  } else {
    summary = "branches: " + std::to_string(state.branch_count()) + "\n";
    for (const auto& [bits, p] : dist) {
      std::ostringstream line;
      line << o.reg << ' ' << bits << ' ' << p << '\n';
      summary += line.str();
    }
  }
  std::cout << summary;
  if (!o.out.empty()) emit(o, spec, qpulba::state_to_json(state));
  return kExitOk;
}

int run_verify(const Options& o) {
  const MachineSpec spec = spec_of(o);
  qpulba::EquivalenceOptions options;
  options.mode = mode_of(o);
  options.budget = o.guard.value_or(qpulba::kDefaultBranchBudget);
  options.backend = backend_of(o);
  const qpulba::EquivalenceReport report = qpulba::check_equivalence(spec, options);
  emit(o, spec, o.format == "json" ? qpulba::equivalence_report_json(report)
                                   : qpulba::equivalence_report_text(report));
  return report.passed() ? kExitOk : kExitVerifyFailed;
}

int run_export(const Options& o) {
  const MachineSpec spec = spec_of(o);
  const Circuit lowered = qpulba::transpile(
      machine_circuit(o, qpulba::plan_layout(spec, mode_of(o))), lowering_of(o));
  emit(o, spec, qpulba::emit_qasm(lowered));
  return kExitOk;
}

std::optional<qpulba::BlockKind> parse_block(const std::string& name) {
  for (auto kind : {qpulba::BlockKind::kInit, qpulba::BlockKind::kRead,
                    qpulba::BlockKind::kDelta, qpulba::BlockKind::kWrite,
                    qpulba::BlockKind::kMove, qpulba::BlockKind::kReset}) {
    std::string lower(qpulba::block_kind_name(kind));
    for (char& ch : lower) ch = static_cast<char>(std::tolower(ch));
    if (lower == name) return kind;
  }
  return std::nullopt;
}

int run_blocktest(const Options& o) {
  const MachineSpec spec = spec_of(o);
  const qpulba::QubitLayout layout = qpulba::plan_layout(spec, mode_of(o));
  std::vector<qpulba::BlockKind> blocks;
  if (o.block == "all") {
    blocks = {qpulba::BlockKind::kInit,  qpulba::BlockKind::kRead,
              qpulba::BlockKind::kDelta, qpulba::BlockKind::kWrite,
              qpulba::BlockKind::kMove,  qpulba::BlockKind::kReset};
  } else {
    blocks = {*parse_block(o.block)};
  }
  bool passed = true;
  std::string text;
  Json reports = Json::array();
  for (qpulba::BlockKind kind : blocks) {
    const qpulba::BlockTestReport report = qpulba::check_block(kind, layout, o.trials, o.seed);
    passed &= report.passed();
    if (o.format == "json") {
      reports.push_back(Json::parse(qpulba::block_report_json(report)));
    } else {
      text += qpulba::block_report_text(report);
    }
  }
  emit(o, spec, o.format == "json" ? reports.dump(2) + "\n" : text);
  return passed ? kExitOk : kExitVerifyFailed;
}

void add_spec_options(CLI::App* sub, Options& o) {
  sub->add_option("-m,--states", o.states, "number of states")->required()
      ->check(CLI::Range(1u, 1u << 16));
  sub->add_option("-n,--symbols", o.symbols, "number of symbols")->required()
      ->check(CLI::Range(1u, 1u << 16));
  sub->add_option("-c,--cells", o.cells, "tape cells (default: cycles)");
  sub->add_option("-t,--cycles", o.cycles, "cycles (default: program size)");
  sub->add_option("--mode", o.mode, "qubit layout")
      ->check(CLI::IsMember({"general", "paper-compat"}));
  sub->add_option("--out", o.out, "output file; a manifest is written beside it");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--guard", o.guard, "program or branch count limit");
  sub->add_option("--jobs", o.jobs, "worker threads")->envname("QPULBA_JOBS")
      ->check(CLI::Range(1u, 1024u));
}

/// Per-subcommand --format values, defaulting to the first listed format.
std::map<std::string, std::string>& format_slots() {
  static std::map<std::string, std::string> slots;
  return slots;
}

void add_format(CLI::App* sub, std::vector<std::string> formats) {
  std::string& slot = format_slots()[sub->get_name()];
  slot = formats.front();
  sub->add_option("--format", slot, "output format")->check(CLI::IsMember(formats));
}

void add_circuit_options(CLI::App* sub, Options& o) {
  sub->add_flag("--first-cycle", o.first_cycle, "init and the first cycle only");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QPULBA circuit synthesis, simulation and verification"};
  app.set_version_flag("--version", qpulba::kVersion);
  app.require_subcommand(1);
  Options o;

  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> commands;
  auto sub = [&](const char* name, const char* help, int (*handler)(const Options&)) {
    CLI::App* s = app.add_subcommand(name, help);
    add_spec_options(s, o);
    commands.emplace_back(s, handler);
    return s;
  };

  CLI::App* plan = sub("plan", "print the qubit layout", run_plan);
  add_format(plan, {"txt", "json"});

  CLI::App* enumerate = sub("enumerate", "run every program classically", run_enumerate);
  add_format(enumerate, {"csv", "json"});
  enumerate->add_option("--program", o.program, "run a single program");
  enumerate->add_flag("--histogram", o.histogram, "final tape frequencies");
  enumerate->add_option("--sample", o.sample, "run this many seeded random programs");

  CLI::App* build = sub("build", "synthesize the circuit", run_build);
  add_format(build, {"json", "txt"});
  add_circuit_options(build, o);

  CLI::App* transpile = sub("transpile", "lower to the base gate set", run_transpile);
  add_format(transpile, {"txt", "json"});
  add_circuit_options(transpile, o);
  transpile->add_option("--strategy", o.strategy, "MCX lowering")
      ->check(CLI::IsMember({"borrowed", "clean"}));

  CLI::App* simulate = sub("simulate", "simulate and print a register marginal", run_simulate);
  add_format(simulate, {"txt", "json"});
  add_circuit_options(simulate, o);
  simulate->add_option("--backend", o.backend, "simulator")
      ->check(CLI::IsMember({"sparse", "dense"}));
  simulate->add_option("--program", o.program, "keep only this program's branch");
  simulate->add_option("--register", o.reg, "register to marginalize");
  simulate->add_option("--shots", o.shots, "sample this many shots");

  CLI::App* verify = sub("verify", "compare every branch with the classical run", run_verify);
  add_format(verify, {"txt", "json"});
  verify->add_option("--backend", o.backend, "simulator")
      ->check(CLI::IsMember({"sparse", "dense"}));

  CLI::App* exporter = sub("export", "write OpenQASM 2.0", run_export);
  add_format(exporter, {"qasm"});
  add_circuit_options(exporter, o);
  exporter->add_option("--strategy", o.strategy, "MCX lowering")
      ->check(CLI::IsMember({"borrowed", "clean"}));

  CLI::App* blocktest = sub("blocktest", "run block unit tests", run_blocktest);
  add_format(blocktest, {"txt", "json"});
  blocktest->add_option("--block", o.block, "block name or all")
      ->check(CLI::IsMember({"all", "init", "read", "delta", "write", "move", "reset"}));
  blocktest->add_option("--trials", o.trials, "seeded trials per block")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& [command, handler] : commands) {
      if (command->parsed()) {
        o.command = command->get_name();
        o.format = format_slots()[o.command];
        return handler(o);
      }
    }
  } catch (const qpulba::LimitExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitLimit;
  } catch (const qpulba::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

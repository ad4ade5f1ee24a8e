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

#include "qpulba/ulba.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <thread>
#include <utility>

#include "qpulba/errors.hpp"

namespace qpulba {

int ceil_log2(std::uint64_t value) {
  int bits = 0;
  while ((std::uint64_t{1} << bits) < value) ++bits;
  return bits;
}

MachineSpec MachineSpec::make(std::uint32_t m, std::uint32_t n,
                              std::uint32_t t) {
  MachineSpec spec;
  spec.states = m;
  spec.symbols = n;
  spec.dimensions = 1;
  spec.cycles = t;
  spec.cells = t;
  return spec;
}

MachineSpec MachineSpec::with_default_cycles(std::uint32_t m,
                                             std::uint32_t n) {
  MachineSpec spec = make(m, n, 1);
  const int q_delta = spec.program_bits();
  spec.cycles = static_cast<std::uint32_t>(std::max(q_delta, 1));
  spec.cells = spec.cycles;
  return spec;
}

int MachineSpec::program_bits() const {
  return static_cast<int>(states) * static_cast<int>(symbols) * entry_bits();
}

std::uint64_t MachineSpec::program_count() const {
  return std::uint64_t{1} << program_bits();
}

int MachineSpec::history_bits() const {
  return (static_cast<int>(cycles) - 1) * (state_bits() + symbol_bits());
}

namespace {

[[noreturn]] void reject(const MachineSpec& spec, const std::string& why) {
  throw UnsupportedSpec("unsupported machine " + spec.label() + " c=" +
                        std::to_string(spec.cells) + " t=" +
                        std::to_string(spec.cycles) + ": " + why);
}

}  // namespace

void MachineSpec::validate_shape() const {
  if (dimensions != 1) reject(*this, "only one-dimensional circular tapes are supported");
  if (states < 1 || symbols < 1 || cells < 1 || cycles < 1) {
    reject(*this, "m, n, c and t must all be at least 1");
  }
  // Guard the multiplication in program_bits() before calling it.
  if (states > 64 || symbols > 36) reject(*this, "state or symbol count too large");
  if (program_bits() > 62) reject(*this, "description number wider than 62 bits");
}

void MachineSpec::validate() const {
  validate_shape();
  if (static_cast<std::uint64_t>(cells) > 2ull * cycles + 1) {
    reject(*this, "tape length must satisfy c <= 2t+1");
  }
}

std::string MachineSpec::label() const {
  return std::to_string(states) + "-" + std::to_string(symbols) + "-" +
         std::to_string(dimensions);
}

TransitionTable::TransitionTable(const MachineSpec& spec)
    : states_(spec.states),
      symbols_(spec.symbols),
      entries_(static_cast<std::size_t>(spec.states) * spec.symbols) {}

const TransitionEntry& TransitionTable::at(std::uint32_t state,
                                           std::uint32_t read) const {
  if (state >= states_ || read >= symbols_) {
    throw RangeError("transition (" + std::to_string(state) + ", " +
                     std::to_string(read) + ") outside the table");
  }
  return entries_[static_cast<std::size_t>(state) * symbols_ + read];
}

TransitionEntry& TransitionTable::at(std::uint32_t state, std::uint32_t read) {
  return const_cast<TransitionEntry&>(std::as_const(*this).at(state, read));
}

TransitionEntry TransitionTable::lookup(std::uint32_t state,
                                        std::uint32_t read) const {
  if (state >= states_ || read >= symbols_) return {};
  return entries_[static_cast<std::size_t>(state) * symbols_ + read];
}

std::size_t entry_offset(const MachineSpec& spec, std::uint32_t state,
                         std::uint32_t read) {
  return (static_cast<std::size_t>(state) * spec.symbols + read) *
         static_cast<std::size_t>(spec.entry_bits());
}

namespace {

std::uint64_t field(std::uint64_t number, std::size_t offset, int width) {
  if (width == 0) return 0;
  return (number >> offset) & ((std::uint64_t{1} << width) - 1);
}

}  // namespace

TransitionTable decode_program(ProgramNumber number, const MachineSpec& spec) {
  spec.validate_shape();
  if (number >= spec.program_count()) {
    throw RangeError("program " + std::to_string(number) +
                     " outside [0, " + std::to_string(spec.program_count()) +
                     ") for " + spec.label());
  }
  const int q_gamma = spec.symbol_bits();
  const int q_state = spec.state_bits();
  TransitionTable table(spec);
  for (std::uint32_t i = 0; i < spec.states; ++i) {
    for (std::uint32_t j = 0; j < spec.symbols; ++j) {
      const std::size_t base = entry_offset(spec, i, j);
      TransitionEntry& entry = table.at(i, j);
      entry.write = static_cast<std::uint32_t>(field(number, base, q_gamma));
      entry.move = static_cast<std::uint32_t>(field(number, base + q_gamma, 1));
      entry.next_state =
          static_cast<std::uint32_t>(field(number, base + q_gamma + 1, q_state));
    }
  }
  return table;
}

ProgramNumber encode_program(const TransitionTable& table,
                             const MachineSpec& spec) {
  spec.validate_shape();
  if (table.states() != spec.states || table.symbols() != spec.symbols) {
    throw RangeError("transition table shape does not match " + spec.label());
  }
  const int q_gamma = spec.symbol_bits();
  const int q_state = spec.state_bits();
  ProgramNumber number = 0;
  for (std::uint32_t i = 0; i < spec.states; ++i) {
    for (std::uint32_t j = 0; j < spec.symbols; ++j) {
      const TransitionEntry& entry = table.at(i, j);
      if ((std::uint64_t{entry.write} >> q_gamma) != 0 || entry.move > 1 ||
          (std::uint64_t{entry.next_state} >> q_state) != 0) {
        throw RangeError("transition (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") has an out-of-range field");
      }
      const std::size_t base = entry_offset(spec, i, j);
      number |= ProgramNumber{entry.write} << base;
      number |= ProgramNumber{entry.move} << (base + q_gamma);
      number |= ProgramNumber{entry.next_state} << (base + q_gamma + 1);
    }
  }
  return number;
}

MachineConfig MachineConfig::initial(const MachineSpec& spec) {
  MachineConfig config;
  config.tape.assign(spec.cells, 0);
  config.written.assign(spec.cells, false);
  return config;
}

MachineConfig step(const MachineConfig& config, const TransitionTable& table,
                   const MachineSpec& spec) {
  MachineConfig next = config;
  const std::uint32_t read = config.tape[config.head];
  const TransitionEntry entry = table.lookup(config.state, read);
  next.tape[config.head] = entry.write;
  next.written[config.head] = true;
  const std::uint32_t c = spec.cells;
  next.head = entry.move == 1 ? (config.head + 1) % c : (config.head + c - 1) % c;
  next.state = entry.next_state;
  next.cycle = config.cycle + 1;
  return next;
}

RunResult run_traced(ProgramNumber program, const MachineSpec& spec) {
  const TransitionTable table = decode_program(program, spec);
  RunResult result{MachineConfig::initial(spec), {}};
  result.trace.reserve(spec.cycles);
  for (std::uint32_t k = 0; k < spec.cycles; ++k) {
    const MachineConfig& config = result.final_config;
    result.trace.push_back({config.state, config.tape[config.head]});
    result.final_config = step(config, table, spec);
  }
  return result;
}

MachineConfig run(ProgramNumber program, const MachineSpec& spec) {
  const TransitionTable table = decode_program(program, spec);
  MachineConfig config = MachineConfig::initial(spec);
  for (std::uint32_t k = 0; k < spec.cycles; ++k) {
    config = step(config, table, spec);
  }
  return config;
}

std::string render_tape(const MachineConfig& config, const MachineSpec& spec) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  out.reserve(spec.cells);
  for (std::size_t i = 0; i < config.tape.size(); ++i) {
    if (!config.written[i]) {
      out.push_back('o');
    } else {
      const std::uint32_t symbol = config.tape[i];
      out.push_back(symbol < 36 ? kDigits[symbol] : '?');
    }
  }
  return out;
}

namespace {

EnumerationRecord record_for(ProgramNumber program, const MachineSpec& spec) {
  const MachineConfig config = run(program, spec);
  return {program, render_tape(config, spec), config.state, config.head};
}

}  // namespace

std::vector<EnumerationRecord> enumerate(const MachineSpec& spec,
                                         const EnumerateOptions& options) {
  spec.validate();
  const std::uint64_t count = spec.program_count();
  if (count > options.guard) {
    throw GuardExceeded("enumerating " + spec.label() + " needs " +
                        std::to_string(count) + " programs, guard is " +
                        std::to_string(options.guard));
  }
  std::vector<EnumerationRecord> records(count);
  const unsigned jobs = static_cast<unsigned>(
      std::clamp<std::uint64_t>(options.jobs, 1, std::max<std::uint64_t>(count, 1)));
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t p = begin; p < end; ++p) records[p] = record_for(p, spec);
  };
  if (jobs == 1) {
    work(0, count);
    return records;
  }
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  const std::uint64_t chunk = (count + jobs - 1) / jobs;
  for (unsigned w = 0; w < jobs; ++w) {
    const std::uint64_t begin = std::min(count, w * chunk);
    const std::uint64_t end = std::min(count, begin + chunk);
    workers.emplace_back(work, begin, end);
  }
  for (auto& worker : workers) worker.join();
  return records;
}

std::vector<EnumerationRecord> sample_programs(const MachineSpec& spec,
                                               std::uint64_t count,
                                               std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  const std::uint64_t mask = spec.program_count() - 1;
  std::vector<ProgramNumber> programs(count);
  for (auto& p : programs) p = rng() & mask;
  std::sort(programs.begin(), programs.end());
  std::vector<EnumerationRecord> records;
  records.reserve(count);
  for (ProgramNumber p : programs) records.push_back(record_for(p, spec));
  return records;
}

std::map<std::string, std::uint64_t> tape_histogram(
    const std::vector<EnumerationRecord>& records) {
  std::map<std::string, std::uint64_t> histogram;
  for (const auto& record : records) ++histogram[record.final_tape];
  return histogram;
}

std::string records_to_csv(const std::vector<EnumerationRecord>& records) {
  std::ostringstream out;
  out << "program,final_tape,final_state,final_head\n";
  for (const auto& r : records) {
    out << r.program << ',' << r.final_tape << ',' << r.final_state << ','
        << r.final_head << '\n';
  }
  return out.str();
}

std::string histogram_to_csv(
    const std::map<std::string, std::uint64_t>& histogram) {
  std::ostringstream out;
  out << "final_tape,count\n";
  for (const auto& [tape, count] : histogram) out << tape << ',' << count << '\n';
  return out.str();
}

}  // namespace qpulba

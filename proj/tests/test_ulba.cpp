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

#include <random>

#include "doctest.h"
#include "qpulba/errors.hpp"
#include "qpulba/ulba.hpp"
#include "support.hpp"

using namespace qpulba;
using qpulba::testing::oracle_run;

namespace {

std::vector<std::string> tapes(const MachineSpec& spec) {
  std::vector<std::string> out;
  for (const auto& r : enumerate(spec)) out.push_back(r.final_tape);
  return out;
}

}  // namespace

TEST_CASE("ceil_log2") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(4) == 2);
  CHECK(ceil_log2(12) == 4);
  CHECK(ceil_log2(16) == 4);
  CHECK(ceil_log2(17) == 5);
}

TEST_CASE("derived sizes follow the program-size formula") {
  for (std::uint32_t m = 1; m <= 4; ++m) {
    for (std::uint32_t n = 1; n <= 4; ++n) {
      const MachineSpec spec = MachineSpec::with_default_cycles(m, n);
      const int qs = qpulba::testing::bits_for(m);
      const int qg = qpulba::testing::bits_for(n);
      const int q_delta = static_cast<int>(m * n) * (qs + qg + 1);
      CHECK(spec.program_bits() == q_delta);
      CHECK(spec.cycles == static_cast<std::uint32_t>(q_delta));
      CHECK(spec.cells == spec.cycles);
      CHECK(spec.history_bits() == (q_delta - 1) * (qs + qg));
    }
  }
  CHECK(MachineSpec::with_default_cycles(2, 2).program_count() == 4096);
  CHECK(MachineSpec::with_default_cycles(2, 1).program_bits() == 4);
  CHECK(MachineSpec::with_default_cycles(1, 2).program_bits() == 4);
  CHECK(MachineSpec::with_default_cycles(1, 1).program_bits() == 1);
  CHECK(MachineSpec::with_default_cycles(2, 4).program_bits() == 32);
}

TEST_CASE("validation") {
  MachineSpec spec = MachineSpec::make(2, 2, 3);
  spec.cells = 7;
  CHECK_NOTHROW(spec.validate());
  spec.cells = 8;
  CHECK_THROWS_AS(spec.validate(), UnsupportedSpec);
  CHECK_NOTHROW(spec.validate_shape());
  spec = MachineSpec::make(2, 2, 3);
  spec.dimensions = 2;
  CHECK_THROWS_AS(spec.validate(), UnsupportedSpec);
  spec = MachineSpec::make(0, 2, 3);
  CHECK_THROWS_AS(spec.validate(), UnsupportedSpec);
  spec = MachineSpec::make(2, 2, 0);
  CHECK_THROWS_AS(spec.validate(), UnsupportedSpec);
}

TEST_CASE("description number layout") {
  const MachineSpec s211 = MachineSpec::make(2, 1, 4);
  const TransitionTable t3 = decode_program(3, s211);
  CHECK(t3.at(0, 0) == TransitionEntry{1, 1, 0});
  CHECK(t3.at(1, 0) == TransitionEntry{0, 0, 0});

  const MachineSpec s121 = MachineSpec::make(1, 2, 4);
  const TransitionTable t13 = decode_program(13, s121);
  CHECK(t13.at(0, 0) == TransitionEntry{0, 0, 1});
  CHECK(t13.at(0, 1) == TransitionEntry{0, 1, 1});

  const MachineSpec s221 = MachineSpec::make(2, 2, 12);
  CHECK(entry_offset(s221, 0, 0) == 0);
  CHECK(entry_offset(s221, 0, 1) == 3);
  CHECK(entry_offset(s221, 1, 0) == 6);
  CHECK(entry_offset(s221, 1, 1) == 9);
}

TEST_CASE("codec is a bijection on 2-2-1") {
  const MachineSpec spec = MachineSpec::make(2, 2, 12);
  for (ProgramNumber p = 0; p < spec.program_count(); ++p) {
    REQUIRE(encode_program(decode_program(p, spec), spec) == p);
  }
}

TEST_CASE("codec round-trips random tables with non power-of-two sizes") {
  std::mt19937_64 rng(11);
  for (auto [m, n] : {std::pair{3u, 3u}, std::pair{2u, 3u}, std::pair{5u, 2u}}) {
    MachineSpec spec = MachineSpec::make(m, n, 4);
    for (int trial = 0; trial < 200; ++trial) {
      TransitionTable table(spec);
      for (std::uint32_t i = 0; i < m; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
          table.at(i, j) = {static_cast<std::uint32_t>(rng() % m),
                            static_cast<std::uint32_t>(rng() % 2),
                            static_cast<std::uint32_t>(rng() % n)};
        }
      }
      REQUIRE(decode_program(encode_program(table, spec), spec) == table);
    }
  }
  MachineSpec spec = MachineSpec::make(2, 2, 4);
  TransitionTable wide(spec);
  wide.at(0, 0).write = 2;
  CHECK_THROWS_AS(encode_program(wide, spec), RangeError);
}

TEST_CASE("out-of-range codes use the zero entry") {
  const MachineSpec spec = MachineSpec::make(3, 3, 4);
  const TransitionTable table = decode_program(spec.program_count() - 1, spec);
  CHECK(table.lookup(3, 0) == TransitionEntry{});
  CHECK(table.lookup(0, 3) == TransitionEntry{});
  CHECK(table.lookup(2, 2) == table.at(2, 2));
}

TEST_CASE("step order: read, write, move, then state") {
  const MachineSpec spec = MachineSpec::make(2, 2, 3);
  TransitionTable table(spec);
  table.at(0, 0) = {1, 0, 1};  // write 1, move left, go to Q1
  table.at(1, 0) = {0, 1, 1};
  MachineConfig c = MachineConfig::initial(spec);
  c = step(c, table, spec);
  CHECK(c.tape == std::vector<std::uint32_t>{1, 0, 0});
  CHECK(c.head == 2);
  CHECK(c.state == 1);
  CHECK(render_tape(c, spec) == "1oo");
  c = step(c, table, spec);
  CHECK(render_tape(c, spec) == "1o1");
  CHECK(c.head == 0);
  CHECK(c.state == 0);
  CHECK(c.cycle == 2);
}

TEST_CASE("1-1-1 enumeration table") {
  const MachineSpec spec = MachineSpec::with_default_cycles(1, 1);
  CHECK(tapes(spec) == std::vector<std::string>{"0", "0"});
}

TEST_CASE("2-1-1 enumeration table") {
  std::vector<std::string> expected(16, "0000");
  expected[3] = "00oo";
  expected[6] = "0oo0";
  expected[11] = "00o0";
  expected[14] = "00o0";
  CHECK(tapes(MachineSpec::with_default_cycles(2, 1)) == expected);
}

TEST_CASE("1-2-1 enumeration table") {
  std::vector<std::string> expected;
  for (int p = 0; p < 16; ++p) expected.push_back(p % 2 ? "1111" : "0000");
  CHECK(tapes(MachineSpec::with_default_cycles(1, 2)) == expected);
}

TEST_CASE("enumeration agrees with a direct interpreter") {
  for (auto [m, n, t] : {std::tuple{2, 2, 12}, std::tuple{3, 2, 5}, std::tuple{2, 3, 4}}) {
    const MachineSpec spec = MachineSpec::make(m, n, t);
    if (spec.program_count() > 200000) continue;
    for (const EnumerationRecord& r : enumerate(spec, {.guard = 1u << 20, .jobs = 2})) {
      const auto o = oracle_run(r.program, m, n, t, t);
      REQUIRE(r.final_tape == o.tape);
      REQUIRE(r.final_state == o.state);
      REQUIRE(r.final_head == o.head);
    }
  }
}

TEST_CASE("run_traced records each cycle's state and read") {
  const MachineSpec spec = MachineSpec::make(2, 2, 12);
  const RunResult r = run_traced(1234, spec);
  REQUIRE(r.trace.size() == 12);
  MachineConfig c = MachineConfig::initial(spec);
  const TransitionTable table = decode_program(1234, spec);
  for (const TraceStep& s : r.trace) {
    CHECK(s.state == c.state);
    CHECK(s.read == c.tape[c.head]);
    c = step(c, table, spec);
  }
  CHECK(c == r.final_config);
}

TEST_CASE("parallel sweep is byte-identical") {
  const MachineSpec spec = MachineSpec::with_default_cycles(2, 2);
  const auto serial = enumerate(spec, {.guard = 1u << 20, .jobs = 1});
  for (unsigned jobs : {2u, 3u, 8u}) {
    const auto parallel = enumerate(spec, {.guard = 1u << 20, .jobs = jobs});
    CHECK(records_to_csv(parallel) == records_to_csv(serial));
    CHECK(histogram_to_csv(tape_histogram(parallel)) ==
          histogram_to_csv(tape_histogram(serial)));
  }
}

TEST_CASE("guard and sampling") {
  const MachineSpec spec = MachineSpec::with_default_cycles(2, 4);
  CHECK_THROWS_AS(enumerate(spec), GuardExceeded);
  const auto a = sample_programs(spec, 50, 9);
  const auto b = sample_programs(spec, 50, 9);
  CHECK(a == b);
  REQUIRE(a.size() == 50);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].program <= a[i].program);
  for (const auto& r : a) {
    CHECK(r.final_tape == oracle_run(r.program, 2, 4, 32, 32).tape);
  }
}

TEST_CASE("CSV formats") {
  const auto records = enumerate(MachineSpec::with_default_cycles(1, 1));
  CHECK(records_to_csv(records) == "program,final_tape,final_state,final_head\n0,0,0,0\n1,0,0,0\n");
  CHECK(histogram_to_csv(tape_histogram(records)) == "final_tape,count\n0,2\n");
}

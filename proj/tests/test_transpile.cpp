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
#include "qpulba/builder.hpp"
#include "qpulba/errors.hpp"
#include "qpulba/simulator.hpp"
#include "qpulba/transpile.hpp"
#include "support.hpp"

using namespace qpulba;
using qpulba::testing::evaluate;

namespace {

std::size_t count(const Circuit& c, GateKind kind) { return stats(c).count(kind); }

std::vector<bool> to_bits(std::uint64_t value, std::size_t width) {
  std::vector<bool> bits(width);
  for (std::size_t i = 0; i < width; ++i) bits[i] = (value >> i) & 1;
  return bits;
}

/// Every basis input of the original qubits, extra qubits zero, must map as
/// the original does and leave the extra qubits at zero.
void check_equivalent(const Circuit& original, const Circuit& lowered) {
  const std::size_t n = original.qubit_count();
  REQUIRE(n <= 16);
  for (std::uint64_t v = 0; v < (1ull << n); ++v) {
    std::vector<bool> in = to_bits(v, n);
    const std::vector<bool> expected = evaluate(original, in);
    in.resize(lowered.qubit_count(), false);
    std::vector<bool> got = evaluate(lowered, in);
    CHECK(std::equal(expected.begin(), expected.end(), got.begin()));
    for (std::size_t q = n; q < got.size(); ++q) CHECK_FALSE(got[q]);
  }
}

}  // namespace

TEST_CASE("negative control becomes an X conjugation") {
  Circuit c(3);
  c.append(Gate::mcx({neg(0), pos(1)}, 2));
  const Circuit r = resolve_negative_controls(c);
  REQUIRE(r.gates().size() == 3);
  CHECK(r.gates()[0] == Gate::x(0));
  CHECK(r.gates()[1] == Gate::mcx({pos(0), pos(1)}, 2));
  CHECK(r.gates()[2] == Gate::x(0));
  check_equivalent(c, r);
}

TEST_CASE("adjacent inserted X pairs cancel") {
  Circuit c(4);
  c.append(Gate::mcx({neg(0), pos(1)}, 2));
  c.append(Gate::mcx({neg(0), pos(2)}, 3));
  const Circuit r = resolve_negative_controls(c);
  CHECK(count(r, GateKind::kX) == 2);
  check_equivalent(c, r);
}

TEST_CASE("an intervening gate on the qubit blocks cancellation") {
  Circuit c(3);
  c.append(Gate::cnot(neg(0), 1));
  c.append(Gate::cnot(pos(2), 0));
  c.append(Gate::cnot(neg(0), 1));
  const Circuit r = resolve_negative_controls(c);
  CHECK(count(r, GateKind::kX) == 4);
  check_equivalent(c, r);
}

TEST_CASE("user X gates are never cancelled") {
  Circuit c(2);
  c.append(Gate::x(0));
  c.append(Gate::x(0));
  CHECK(resolve_negative_controls(c) == c);
}

TEST_CASE("circuit without negative controls is unchanged") {
  Circuit c(3);
  c.append(Gate::toffoli(pos(0), pos(1), 2));
  c.append(Gate::h(0));
  CHECK(resolve_negative_controls(c) == c);
}

TEST_CASE("small MCX become CNOT and TOFFOLI") {
  Circuit c(3);
  c.append(Gate::mcx({pos(0)}, 1));
  c.append(Gate::mcx({pos(0), pos(1)}, 2));
  const Circuit l = lower_mcx(c);
  REQUIRE(l.gates().size() == 2);
  CHECK(l.gates()[0].kind == GateKind::kCNOT);
  CHECK(l.gates()[1].kind == GateKind::kToffoli);
}

TEST_CASE("clean V-chain for three controls") {
  Circuit c(4);
  c.append(Gate::mcx({pos(0), pos(1), pos(2)}, 3));
  LoweringOptions clean;
  clean.strategy = LoweringStrategy::kCleanChain;
  const Circuit l = lower_mcx(c, clean);
  CHECK(l.qubit_count() == 5);
  CHECK(count(l, GateKind::kToffoli) == 3);
  CHECK(l.register_named(kLoweringAncillaRegister).qubits == std::vector<Qubit>{4});
  check_equivalent(c, l);
}

TEST_CASE("clean V-chain for wide controls") {
  for (std::size_t k = 3; k <= 7; ++k) {
    Circuit c(k + 1);
    std::vector<Control> controls;
    for (std::size_t i = 0; i < k; ++i) controls.push_back(pos(static_cast<Qubit>(i)));
    c.append(Gate::mcx(controls, static_cast<Qubit>(k)));
    LoweringOptions clean;
    clean.strategy = LoweringStrategy::kCleanChain;
    const Circuit l = lower_mcx(c, clean);
    CHECK(count(l, GateKind::kToffoli) == 2 * k - 3);
    CHECK(l.qubit_count() == 2 * k - 1);
    check_equivalent(c, l);
  }
}

TEST_CASE("borrowed chain restores dirty qubits on every input") {
  for (std::size_t k = 3; k <= 6; ++k) {
    // k controls, target, and k - 2 extra qubits that start in any value
    const std::size_t n = 2 * k - 1;
    Circuit c(n);
    std::vector<Control> controls;
    for (std::size_t i = 0; i < k; ++i) controls.push_back(pos(static_cast<Qubit>(i)));
    c.append(Gate::mcx(controls, static_cast<Qubit>(k)));
    const Circuit l = lower_mcx(c);
    CHECK(l.qubit_count() == n);
    CHECK(count(l, GateKind::kToffoli) == 4 * (k - 2));
    check_equivalent(c, l);
  }
}

TEST_CASE("borrowing prefers ANCILLA") {
  Circuit c(6);
  c.add_register("DATA", {0, 1, 2, 3});
  c.add_register("ANCILLA", {4, 5});
  c.append(Gate::mcx({pos(0), pos(1), pos(2)}, 3));
  const Circuit l = lower_mcx(c);
  bool touches_ancilla = false;
  for (const Gate& g : l.gates()) {
    for (Qubit q : g.support()) touches_ancilla |= q == 4;
  }
  CHECK(touches_ancilla);
}

TEST_CASE("insufficient idle qubits") {
  Circuit c(4);
  c.append(Gate::x(0));
  c.append(Gate::mcx({pos(0), pos(1), pos(2)}, 3));
  LoweringOptions strict;
  strict.allow_allocation = false;
  try {
    lower_mcx(c, strict);
    FAIL("expected InsufficientAncilla");
  } catch (const InsufficientAncilla& e) {
    CHECK(std::string(e.what()).find("gate 1") != std::string::npos);
  }
  const Circuit grown = lower_mcx(c);
  CHECK(grown.qubit_count() == 5);
  check_equivalent(c, grown);
}

TEST_CASE("lowering requires resolved controls") {
  Circuit c(4);
  c.append(Gate::mcx({neg(0), pos(1), pos(2)}, 3));
  CHECK_THROWS_AS(lower_mcx(c), InvalidGate);
  CHECK(is_lowered(transpile(c)));
}

TEST_CASE("lowering is idempotent") {
  const Circuit once = transpile(build_machine(MachineSpec::make(2, 1, 4)));
  CHECK(is_lowered(once));
  CHECK(lower_mcx(once) == once);
  CHECK(transpile(once) == once);
}

TEST_CASE("transpiled 2-2-1 cycle") {
  MachineSpec spec = MachineSpec::make(2, 2, 1);
  spec.cells = 12;
  const QubitLayout l = plan_layout(spec, LayoutMode::kPublished);
  Circuit cycle = build_init(l);
  cycle.append(build_cycle(l, 0));
  for (LoweringStrategy strategy :
       {LoweringStrategy::kBorrowedBit, LoweringStrategy::kCleanChain}) {
    LoweringOptions options;
    options.strategy = strategy;
    const Circuit lowered = transpile(cycle, options);
    CHECK(is_lowered(lowered));
    const GateStats s = stats(lowered);
    CHECK(s.count(GateKind::kH) == 12);
    CHECK(s.count(GateKind::kSWAP) == 1);
    if (strategy == LoweringStrategy::kBorrowedBit) CHECK(lowered.qubit_count() == 36);

    Circuit body = l.empty_circuit();
    body.append(build_cycle(l, 0));
    const Circuit lowered_body = transpile(body, options);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<bool> in(36);
      for (std::size_t q = 0; q < 36; ++q) in[q] = rng() & 1;
      const std::vector<bool> expected = evaluate(body, in);
      in.resize(lowered_body.qubit_count(), false);
      const std::vector<bool> got = evaluate(lowered_body, in);
      CHECK(std::equal(expected.begin(), expected.end(), got.begin()));
    }
  }
}

TEST_CASE("stats report") {
  GateStats s;
  s.counts[static_cast<std::size_t>(GateKind::kH)] = 12;
  s.counts[static_cast<std::size_t>(GateKind::kToffoli)] = 500;
  const std::string text = stats_report_text(s, published_221_cycle_census());
  CHECK(text.find("TOFFOLI   500  reference 476  delta +24") != std::string::npos);
  CHECK(text.find("total     512  reference 627  delta -115") != std::string::npos);
  CHECK(published_221_cycle_census().total() == 627);
  const std::string json = stats_report_json(s, published_221_cycle_census());
  CHECK(json.find("\"delta_total\": -115") != std::string::npos);
  CHECK(stats_report_text(s).find("reference") == std::string::npos);
}

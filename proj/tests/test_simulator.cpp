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

#include <cmath>
#include <random>

#include "doctest.h"
#include "qpulba/builder.hpp"
#include "qpulba/errors.hpp"
#include "qpulba/simulator.hpp"

using namespace qpulba;

namespace {

Circuit random_circuit(std::size_t qubits, std::size_t gates, std::mt19937_64& rng) {
  Circuit c(qubits);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  auto pick = [&](std::vector<Qubit>& used) {
    Qubit q;
    do {
      q = static_cast<Qubit>(rng() % qubits);
    } while (std::find(used.begin(), used.end(), q) != used.end());
    used.push_back(q);
    return q;
  };
  for (std::size_t i = 0; i < gates; ++i) {
    std::vector<Qubit> used;
    const Qubit t = pick(used);
    auto control = [&] {
      const Qubit q = pick(used);
      return rng() % 2 ? pos(q) : neg(q);
    };
    switch (rng() % 7) {
      case 0: c.append(Gate::h(t)); break;
      case 1: c.append(Gate::x(t)); break;
      case 2: c.append(Gate::ry(t, angle(rng))); break;
      case 3: c.append(Gate::cnot(control(), t)); break;
      case 4: c.append(Gate::swap(t, pick(used))); break;
      case 5: {
        const Control a = control();
        c.append(Gate::toffoli(a, control(), t));
        break;
      }
      default: {
        std::vector<Control> cs;
        const std::size_t k = 1 + rng() % std::min<std::size_t>(4, qubits - 1);
        for (std::size_t j = 0; j < k; ++j) cs.push_back(control());
        c.append(Gate::mcx(cs, t));
      }
    }
  }
  return c;
}

}  // namespace

TEST_CASE("H on |0>") {
  Circuit c(1);
  c.append(Gate::h(0));
  const SparseState s = simulate(c);
  REQUIRE(s.branch_count() == 2);
  CHECK(s.amplitude(BasisState::from_u64(0)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(s.amplitude(BasisState::from_u64(1)) == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("H then H interferes back to |0>") {
  Circuit c(1);
  c.append(Gate::h(0));
  c.append(Gate::h(0));
  const SparseState s = simulate(c);
  REQUIRE(s.branch_count() == 1);
  CHECK(s.amplitude(BasisState::from_u64(0)) == doctest::Approx(1.0));
}

TEST_CASE("TOFFOLI on 110 gives 111") {
  Circuit c(3);
  c.append(Gate::toffoli(pos(1), pos(2), 0));
  RunOptions o;
  o.initial = BasisState::from_u64(0b110);
  const SparseState s = simulate(c, o);
  REQUIRE(s.branch_count() == 1);
  CHECK(s.branches()[0].bits == BasisState::from_u64(0b111));
}

TEST_CASE("RY amplitudes") {
  Circuit c(1);
  c.append(Gate::ry(0, 1.0));
  const SparseState s = simulate(c);
  CHECK(s.amplitude(BasisState::from_u64(0)) == doctest::Approx(std::cos(0.5)));
  CHECK(s.amplitude(BasisState::from_u64(1)) == doctest::Approx(std::sin(0.5)));
  RunOptions one;
  one.initial = BasisState::from_u64(1);
  const SparseState t = simulate(c, one);
  CHECK(t.amplitude(BasisState::from_u64(0)) == doctest::Approx(-std::sin(0.5)));
  CHECK(t.amplitude(BasisState::from_u64(1)) == doctest::Approx(std::cos(0.5)));
}

TEST_CASE("sparse and dense backends agree on random circuits") {
  std::mt19937_64 rng(5);
  RunOptions dense;
  dense.backend = Backend::kDense;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t qubits = 3 + rng() % 8;
    const Circuit c = random_circuit(qubits, 40, rng);
    const SparseState a = simulate(c);
    const SparseState b = simulate(c, dense);
    CHECK(max_abs_difference(a, b) <= 1e-10);
    CHECK(a.norm_squared() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("sparse and dense agree on the 1-2-1 machine") {
  const Circuit c = build_machine(MachineSpec::make(1, 2, 4));
  RunOptions dense;
  dense.backend = Backend::kDense;
  CHECK(max_abs_difference(simulate(c), simulate(c, dense)) <= 1e-10);
}

TEST_CASE("dense cap") {
  Circuit c(30);
  RunOptions dense;
  dense.backend = Backend::kDense;
  CHECK_THROWS_AS(simulate(c, dense), CapExceeded);
  CHECK_THROWS_AS(SparseState(kMaxSparseQubits + 1), CapExceeded);
}

TEST_CASE("marginals") {
  const QubitLayout l = plan_layout(MachineSpec::make(1, 2, 4));
  const Circuit init = build_init(l);
  const SparseState s = simulate(init);
  CHECK(s.branch_count() == 16);
  for (const Branch& b : s.branches()) CHECK(b.amplitude == doctest::Approx(0.25));
  const Distribution fsm = marginal(s, init, "FSM");
  CHECK(fsm.size() == 16);
  for (const auto& [bits, p] : fsm) CHECK(p == doctest::Approx(1.0 / 16));
  CHECK_THROWS_AS(marginal(s, init, "NOPE"), UnknownRegister);
}

TEST_CASE("register bit strings put qubit 0 last") {
  Circuit c(3);
  c.add_register("R", {0, 1, 2});
  c.append(Gate::x(0));
  CHECK(marginal(simulate(c), c, "R") == Distribution{{"001", 1.0}});
}

TEST_CASE("basis state helpers") {
  BasisState s;
  const std::vector<Qubit> qs{3, 70, 200};
  s.deposit(qs, 0b101);
  CHECK(s.test(3));
  CHECK_FALSE(s.test(70));
  CHECK(s.test(200));
  CHECK(s.extract(qs) == 0b101);
  CHECK(BasisState::from_u64(5).to_string(4) == "0101");
  CHECK(BasisState::from_u64(2) < BasisState::from_u64(3));
}

TEST_CASE("shot sampling is seeded") {
  const Distribution d{{"0", 0.25}, {"1", 0.75}};
  const auto a = sample_counts(d, 1000, 42);
  CHECK(a == sample_counts(d, 1000, 42));
  CHECK(a.at("0") + a.at("1") == 1000);
}

TEST_CASE("state JSON is sorted by bits") {
  Circuit c(2);
  c.append(Gate::h(0));
  c.append(Gate::h(1));
  const std::string json = state_to_json(simulate(c));
  CHECK(json.find("\"00\"") < json.find("\"01\""));
  CHECK(json.find("\"10\"") < json.find("\"11\""));
}

TEST_CASE("uniform superpositions are exact") {
  for (std::size_t n = 1; n <= 8; ++n) {
    Circuit c(n);
    for (Qubit q = 0; q < n; ++q) c.append(Gate::h(q));
    const SparseState s = simulate(c);
    REQUIRE(s.branch_count() == (1u << n));
    const double expected = std::pow(2.0, -static_cast<double>(n) / 2);
    for (const Branch& b : s.branches()) {
      if (n % 2 == 0) {
        CHECK(b.amplitude == expected);
      } else {
        CHECK(b.amplitude == doctest::Approx(expected).epsilon(1e-15));
      }
    }
  }
}

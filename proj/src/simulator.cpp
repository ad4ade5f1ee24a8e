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

#include "qpulba/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "json.hpp"
#include "qpulba/errors.hpp"

namespace qpulba {

std::uint64_t BasisState::extract(std::span<const Qubit> qubits) const {
  if (qubits.size() > 64) throw RangeError("cannot extract more than 64 qubits");
  std::uint64_t value = 0;
  for (std::size_t b = 0; b < qubits.size(); ++b) {
    value |= std::uint64_t{test(qubits[b])} << b;
  }
  return value;
}

void BasisState::deposit(std::span<const Qubit> qubits, std::uint64_t value) {
  for (std::size_t b = 0; b < qubits.size(); ++b) {
    set(qubits[b], b < 64 && ((value >> b) & 1));
  }
}

std::string BasisState::to_string(std::size_t width) const {
  std::string out(width, '0');
  for (std::size_t q = 0; q < width; ++q) {
    if (test(q)) out[width - 1 - q] = '1';
  }
  return out;
}

std::size_t BasisState::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::uint64_t w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

bool controls_fire(const Gate& gate, const BasisState& state) {
  for (const Control& c : gate.controls) {
    if (!c.fires_on(state.test(c.qubit))) return false;
  }
  return true;
}

void apply_permutation(const Gate& gate, BasisState& state) {
  switch (gate.kind) {
    case GateKind::kX:
      state.flip(gate.targets[0]);
      return;
    case GateKind::kCNOT:
    case GateKind::kToffoli:
    case GateKind::kMCX:
      if (controls_fire(gate, state)) state.flip(gate.targets[0]);
      return;
    case GateKind::kSWAP: {
      const bool a = state.test(gate.targets[0]);
      const bool b = state.test(gate.targets[1]);
      if (a != b) {
        state.flip(gate.targets[0]);
        state.flip(gate.targets[1]);
      }
      return;
    }
    case GateKind::kH:
    case GateKind::kRY:
      break;
  }
  throw InvalidGate("not a permutation gate: " + gate.describe());
}

namespace {

struct Rotation {
  double u00, u01, u10, u11;
};

/// RY(theta). H is handled with a deferred scale.
Rotation rotation_of(const Gate& gate) {
  const double c = std::cos(gate.angle / 2);
  const double s = std::sin(gate.angle / 2);
  return {c, -s, s, c};
}

void check_range(const Gate& gate, std::size_t qubit_count) {
  for (Qubit q : gate.support()) {
    if (q >= qubit_count) {
      throw RangeError("gate " + gate.describe() + " addresses qubit outside " +
                       std::to_string(qubit_count) + "-qubit state");
    }
  }
}

}  // namespace

SparseState::SparseState(std::size_t qubit_count) : qubit_count_(qubit_count) {
  if (qubit_count > kMaxSparseQubits) {
    throw CapExceeded("sparse simulation supports at most " +
                      std::to_string(kMaxSparseQubits) + " qubits, got " +
                      std::to_string(qubit_count));
  }
  branches_.push_back({BasisState{}, 1.0});
}

SparseState SparseState::basis(std::size_t qubit_count, const BasisState& bits) {
  SparseState state(qubit_count);
  state.branches_[0].bits = bits;
  return state;
}

void SparseState::apply(const Gate& gate) {
  check_range(gate, qubit_count_);
  if (gate.is_permutation()) {
    for (Branch& b : branches_) apply_permutation(gate, b.bits);
    return;
  }
  if (gate.kind == GateKind::kH) {
    const double scale = pending_scale_ ? 0.5 : 1.0;
    pending_scale_ = !pending_scale_;
    apply_rotation(gate.targets[0], 1.0, 1.0, 1.0, -1.0, scale);
    return;
  }
  settle();
  const Rotation u = rotation_of(gate);
  apply_rotation(gate.targets[0], u.u00, u.u01, u.u10, u.u11, 1.0);
}

void SparseState::settle() const {
  if (!pending_scale_) return;
  const double r = 1.0 / std::sqrt(2.0);
  for (Branch& b : branches_) b.amplitude *= r;
  pending_scale_ = false;
}

void SparseState::apply_rotation(Qubit target, double u00, double u01,
                                 double u10, double u11, double scale) {
  // Pair each branch with its partner that differs only on the target.
  struct Pair {
    BasisState zero;
    double a0 = 0.0;
    double a1 = 0.0;
  };
  std::vector<Pair> pairs;
  std::unordered_map<BasisState, std::size_t, BasisStateHash> index;
  pairs.reserve(branches_.size());
  index.reserve(branches_.size());
  for (const Branch& b : branches_) {
    BasisState zero = b.bits;
    const bool one = zero.test(target);
    zero.set(target, false);
    auto [it, inserted] = index.try_emplace(zero, pairs.size());
    if (inserted) pairs.push_back({zero, 0.0, 0.0});
    (one ? pairs[it->second].a1 : pairs[it->second].a0) += b.amplitude;
  }
  // Stored values are off by the pending factor when pruning.
  const double cutoff = kAmplitudeEpsilon * (pending_scale_ ? std::sqrt(2.0) : 1.0);
  std::vector<Branch> out;
  out.reserve(pairs.size() * 2);
  for (const Pair& p : pairs) {
    const double b0 = scale * (u00 * p.a0 + u01 * p.a1);
    const double b1 = scale * (u10 * p.a0 + u11 * p.a1);
    if (std::abs(b0) >= cutoff) out.push_back({p.zero, b0});
    if (std::abs(b1) >= cutoff) {
      BasisState bits = p.zero;
      bits.flip(target);
      out.push_back({bits, b1});
    }
  }
  branches_ = std::move(out);
}

void SparseState::canonicalize() {
  settle();
  std::sort(branches_.begin(), branches_.end(),
            [](const Branch& a, const Branch& b) { return a.bits < b.bits; });
}

SparseState SparseState::from_branches(std::size_t qubit_count,
                                       std::vector<Branch> branches) {
  SparseState state(qubit_count);
  state.branches_ = std::move(branches);
  state.canonicalize();
  return state;
}

double SparseState::norm_squared() const {
  settle();
  double sum = 0.0;
  for (const Branch& b : branches_) sum += b.amplitude * b.amplitude;
  return sum;
}

double SparseState::amplitude(const BasisState& bits) const {
  settle();
  for (const Branch& b : branches_) {
    if (b.bits == bits) return b.amplitude;
  }
  return 0.0;
}

DenseState::DenseState(std::size_t qubit_count, std::size_t cap)
    : qubit_count_(qubit_count) {
  if (qubit_count > cap || qubit_count > 40) {
    throw CapExceeded("dense simulation of " + std::to_string(qubit_count) +
                      " qubits exceeds the cap of " + std::to_string(cap));
  }
  amplitudes_.assign(std::size_t{1} << qubit_count, 0.0);
  amplitudes_[0] = 1.0;
}

void DenseState::set_basis(std::uint64_t index) {
  std::fill(amplitudes_.begin(), amplitudes_.end(), 0.0);
  amplitudes_.at(index) = 1.0;
  pending_scale_ = false;
}

void DenseState::apply(const Gate& gate) {
  check_range(gate, qubit_count_);
  const std::size_t size = amplitudes_.size();
  std::uint64_t mask = 0;
  std::uint64_t value = 0;
  for (const Control& c : gate.controls) {
    mask |= std::uint64_t{1} << c.qubit;
    if (c.polarity == Polarity::kPositive) value |= std::uint64_t{1} << c.qubit;
  }
  if (gate.kind == GateKind::kSWAP) {
    const std::uint64_t a = std::uint64_t{1} << gate.targets[0];
    const std::uint64_t b = std::uint64_t{1} << gate.targets[1];
    for (std::uint64_t i = 0; i < size; ++i) {
      if ((i & a) && !(i & b)) std::swap(amplitudes_[i], amplitudes_[i ^ a ^ b]);
    }
    return;
  }
  const std::uint64_t t = std::uint64_t{1} << gate.targets[0];
  if (gate.is_permutation()) {
    for (std::uint64_t i = 0; i < size; ++i) {
      if (!(i & t) && (i & mask) == value) std::swap(amplitudes_[i], amplitudes_[i | t]);
    }
    return;
  }
  Rotation u{1.0, 1.0, 1.0, -1.0};
  if (gate.kind == GateKind::kH) {
    if (pending_scale_) u = {0.5, 0.5, 0.5, -0.5};
    pending_scale_ = !pending_scale_;
  } else {
    settle();
    u = rotation_of(gate);
  }
  for (std::uint64_t i = 0; i < size; ++i) {
    if (i & t) continue;
    const double x = amplitudes_[i];
    const double y = amplitudes_[i | t];
    amplitudes_[i] = u.u00 * x + u.u01 * y;
    amplitudes_[i | t] = u.u10 * x + u.u11 * y;
  }
}

void DenseState::settle() const {
  if (!pending_scale_) return;
  const double r = 1.0 / std::sqrt(2.0);
  for (double& a : amplitudes_) a *= r;
  pending_scale_ = false;
}

double DenseState::norm_squared() const {
  settle();
  double sum = 0.0;
  for (double a : amplitudes_) sum += a * a;
  return sum;
}

SparseState DenseState::to_sparse() const {
  settle();
  std::vector<Branch> branches;
  for (std::uint64_t i = 0; i < amplitudes_.size(); ++i) {
    if (std::abs(amplitudes_[i]) >= kAmplitudeEpsilon) {
      branches.push_back({BasisState::from_u64(i), amplitudes_[i]});
    }
  }
  return SparseState::from_branches(qubit_count_, std::move(branches));
}

SparseState simulate(const Circuit& circuit, const RunOptions& options) {
  const std::size_t n = circuit.qubit_count();
  if (options.backend == Backend::kDense) {
    DenseState dense(n, options.dense_cap);
    dense.set_basis(options.initial.low_word());
    for (const Gate& g : circuit.gates()) dense.apply(g);
    return dense.to_sparse();
  }
  SparseState state = SparseState::basis(n, options.initial);
  for (const Gate& g : circuit.gates()) state.apply(g);
  state.canonicalize();
  return state;
}

namespace {

std::string register_bits(const BasisState& bits, std::span<const Qubit> qubits) {
  const std::size_t width = qubits.size();
  std::string out(width, '0');
  for (std::size_t b = 0; b < width; ++b) {
    if (bits.test(qubits[b])) out[width - 1 - b] = '1';
  }
  return out;
}

}  // namespace

Distribution marginal(const SparseState& state, std::span<const Qubit> qubits) {
  for (Qubit q : qubits) {
    if (q >= state.qubit_count()) {
      throw RangeError("register qubit " + std::to_string(q) +
                       " outside the simulated state");
    }
  }
  Distribution dist;
  for (const Branch& b : state.branches()) {
    dist[register_bits(b.bits, qubits)] += b.amplitude * b.amplitude;
  }
  return dist;
}

Distribution marginal(const SparseState& state, const Circuit& circuit,
                      std::string_view register_name) {
  return marginal(state, circuit.register_named(register_name).qubits);
}

double max_abs_difference(const SparseState& a, const SparseState& b) {
  const auto& x = a.branches();
  const auto& y = b.branches();
  double worst = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].bits < y[j].bits)) {
      worst = std::max(worst, std::abs(x[i++].amplitude));
    } else if (i == x.size() || y[j].bits < x[i].bits) {
      worst = std::max(worst, std::abs(y[j++].amplitude));
    } else {
      worst = std::max(worst, std::abs(x[i++].amplitude - y[j++].amplitude));
    }
  }
  return worst;
}

std::map<std::string, std::uint64_t> sample_counts(const Distribution& dist,
                                                   std::uint64_t shots,
                                                   std::uint64_t seed) {
  std::vector<std::string> keys;
  std::vector<double> weights;
  for (const auto& [k, p] : dist) {
    keys.push_back(k);
    weights.push_back(p);
  }
  std::map<std::string, std::uint64_t> counts;
  if (keys.empty()) return counts;
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  for (std::uint64_t s = 0; s < shots; ++s) ++counts[keys[pick(rng)]];
  return counts;
}

std::string state_to_json(const SparseState& state) {
  SparseState sorted = state;
  sorted.canonicalize();
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const Branch& b : sorted.branches()) {
    doc.push_back({{"bits", b.bits.to_string(state.qubit_count())},
                   {"amplitude", b.amplitude}});
  }
  return doc.dump(1) + "\n";
}

std::string distribution_to_json(const Distribution& dist) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& [bits, p] : dist) {
    doc.push_back({{"bits", bits}, {"probability", p}});
  }
  return doc.dump(1) + "\n";
}

}  // namespace qpulba

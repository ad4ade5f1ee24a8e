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

// Exact real-amplitude simulation. The sparse backend tracks one entry per
// nonzero basis state, so the permutation gates that make up every block
// after initialization only rewrite keys. The dense backend exists to
// cross-check it on small circuits.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpulba/circuit.hpp"

namespace qpulba {

inline constexpr std::size_t kMaxSparseQubits = 256;
inline constexpr std::size_t kDefaultDenseCap = 26;
/// Entries with |amplitude| below this are dropped after interference.
inline constexpr double kAmplitudeEpsilon = 1e-12;

/// Basis state key. Qubit 0 is the least-significant bit.
class BasisState {
 public:
  static constexpr std::size_t kWords = kMaxSparseQubits / 64;

  BasisState() = default;
  static BasisState from_u64(std::uint64_t bits) {
    BasisState s;
    s.words_[0] = bits;
    return s;
  }

  bool test(std::size_t q) const { return (words_[q >> 6] >> (q & 63)) & 1; }
  void flip(std::size_t q) { words_[q >> 6] ^= std::uint64_t{1} << (q & 63); }
  void set(std::size_t q, bool value) {
    if (test(q) != value) flip(q);
  }

  /// Value of the listed qubits, qubits[0] least significant. At most 64.
  std::uint64_t extract(std::span<const Qubit> qubits) const;
  void deposit(std::span<const Qubit> qubits, std::uint64_t value);
  std::uint64_t low_word() const { return words_[0]; }

  /// width characters, qubit width-1 first.
  std::string to_string(std::size_t width) const;

  friend bool operator==(const BasisState&, const BasisState&) = default;
  /// Orders by integer value.
  friend bool operator<(const BasisState& a, const BasisState& b) {
    for (std::size_t w = kWords; w-- > 0;) {
      if (a.words_[w] != b.words_[w]) return a.words_[w] < b.words_[w];
    }
    return false;
  }
  std::size_t hash() const;

 private:
  std::array<std::uint64_t, kWords> words_{};
};

struct BasisStateHash {
  std::size_t operator()(const BasisState& s) const { return s.hash(); }
};

/// True when every control fires on this basis state.
bool controls_fire(const Gate& gate, const BasisState& state);
/// Applies a permutation gate to a basis state.
void apply_permutation(const Gate& gate, BasisState& state);

struct Branch {
  BasisState bits;
  double amplitude = 0.0;
};

class SparseState {
 public:
  /// |0...0> over qubit_count qubits.
  explicit SparseState(std::size_t qubit_count);
  static SparseState basis(std::size_t qubit_count, const BasisState& bits);
  /// Takes ownership of branches with distinct keys; result is canonical.
  static SparseState from_branches(std::size_t qubit_count,
                                   std::vector<Branch> branches);

  std::size_t qubit_count() const { return qubit_count_; }
  std::size_t branch_count() const { return branches_.size(); }
  /// Branches in unspecified order; call canonicalize() for sorted order.
  const std::vector<Branch>& branches() const {
    settle();
    return branches_;
  }

  void apply(const Gate& gate);
  void canonicalize();
  double norm_squared() const;
  /// Amplitude of one basis state (0 when absent). Linear scan.
  double amplitude(const BasisState& bits) const;

 private:
  /// Applies a deferred 1/sqrt(2) factor.
  void settle() const;
  void apply_rotation(Qubit target, double u00, double u01, double u10,
                      double u11, double scale);

  std::size_t qubit_count_;
  // Hadamards are applied unscaled and their 1/sqrt(2) factors are paired
  // into exact halvings, so uniform superpositions hold exact dyadic values.
  mutable std::vector<Branch> branches_;
  mutable bool pending_scale_ = false;
};

class DenseState {
 public:
  DenseState(std::size_t qubit_count, std::size_t cap = kDefaultDenseCap);

  std::size_t qubit_count() const { return qubit_count_; }
  const std::vector<double>& amplitudes() const {
    settle();
    return amplitudes_;
  }
  void set_basis(std::uint64_t index);
  void apply(const Gate& gate);
  double norm_squared() const;
  /// Nonzero entries (|a| >= kAmplitudeEpsilon) as a canonical sparse state.
  SparseState to_sparse() const;

 private:
  void settle() const;

  std::size_t qubit_count_;
  // Deferred 1/sqrt(2) factor, as in SparseState.
  mutable std::vector<double> amplitudes_;
  mutable bool pending_scale_ = false;
};

enum class Backend { kSparse, kDense };

struct RunOptions {
  Backend backend = Backend::kSparse;
  std::size_t dense_cap = kDefaultDenseCap;
  /// Start state; all-zero by default.
  BasisState initial{};
};

/// Applies every gate in order; result is canonical (sorted by basis state).
SparseState simulate(const Circuit& circuit, const RunOptions& options = {});

/// Probability of each register value, keyed by its bit string (register
/// qubit 0 rightmost).
using Distribution = std::map<std::string, double>;

Distribution marginal(const SparseState& state, std::span<const Qubit> qubits);
/// Throws UnknownRegister.
Distribution marginal(const SparseState& state, const Circuit& circuit,
                      std::string_view register_name);

/// Largest absolute entry-wise amplitude difference.
double max_abs_difference(const SparseState& a, const SparseState& b);

/// Shot sampling from a marginal, reproducible for a given seed.
std::map<std::string, std::uint64_t> sample_counts(const Distribution& dist,
                                                   std::uint64_t shots,
                                                   std::uint64_t seed);

/// JSON list of {"bits": ..., "amplitude": ...} sorted by bits.
std::string state_to_json(const SparseState& state);
std::string distribution_to_json(const Distribution& dist);

}  // namespace qpulba

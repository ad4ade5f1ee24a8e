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

#include "qpulba/transpile.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "qpulba/errors.hpp"

namespace qpulba {

std::string_view strategy_name(LoweringStrategy strategy) {
  return strategy == LoweringStrategy::kCleanChain ? "clean" : "borrowed";
}

namespace {

Circuit same_shape(const Circuit& circuit) {
  Circuit out(circuit.qubit_count());
  for (const Register& r : circuit.registers()) out.add_register(r.name, r.qubits);
  out.set_prep_zero(circuit.prep_zero());
  return out;
}

}  // namespace

Circuit resolve_negative_controls(const Circuit& circuit) {
  struct Slot {
    Gate gate;
    bool inserted = false;
    bool alive = true;
  };
  std::vector<Slot> slots;
  std::vector<std::ptrdiff_t> last_touch(circuit.qubit_count(), -1);

  auto emit = [&](Gate gate, bool inserted) {
    if (inserted) {
      const Qubit q = gate.targets[0];
      const std::ptrdiff_t prev = last_touch[q];
      if (prev >= 0 && slots[prev].inserted && slots[prev].alive) {
        slots[prev].alive = false;
        last_touch[q] = -1;
        return;
      }
    }
    const auto index = static_cast<std::ptrdiff_t>(slots.size());
    for (Qubit q : gate.support()) last_touch[q] = index;
    slots.push_back({std::move(gate), inserted, true});
  };

  for (const Gate& gate : circuit.gates()) {
    if (!gate.has_negative_control()) {
      emit(gate, false);
      continue;
    }
    std::vector<Qubit> flipped;
    Gate positive = gate;
    for (Control& c : positive.controls) {
      if (c.polarity == Polarity::kNegative) {
        flipped.push_back(c.qubit);
        c.polarity = Polarity::kPositive;
      }
    }
    for (Qubit q : flipped) emit(Gate::x(q), true);
    emit(std::move(positive), false);
    for (Qubit q : flipped) emit(Gate::x(q), true);
  }

  Circuit out = same_shape(circuit);
  for (Slot& s : slots) {
    if (s.alive) out.append(std::move(s.gate));
  }
  return out;
}

namespace {

/// Idle-qubit preference: scratch and history registers first, then the
/// program register, then everything else.
std::vector<Qubit> borrow_order(const Circuit& circuit) {
  std::vector<Qubit> order;
  std::vector<bool> taken(circuit.qubit_count(), false);
  auto take = [&](const std::vector<Qubit>& qubits) {
    for (Qubit q : qubits) {
      if (!taken[q]) {
        taken[q] = true;
        order.push_back(q);
      }
    }
  };
  auto starts_with = [](const std::string& s, std::string_view prefix) {
    return s.rfind(prefix, 0) == 0;
  };
  for (const Register& r : circuit.registers()) {
    if (r.name == "ANCILLA" || r.name == kLoweringAncillaRegister) take(r.qubits);
  }
  for (const Register& r : circuit.registers()) {
    if (starts_with(r.name, "STATE_HIST_") || starts_with(r.name, "READ_")) {
      take(r.qubits);
    }
  }
  for (const Register& r : circuit.registers()) {
    if (r.name == "FSM") take(r.qubits);
  }
  std::vector<Qubit> all(circuit.qubit_count());
  for (Qubit q = 0; q < all.size(); ++q) all[q] = q;
  take(all);
  return order;
}

void v_chain_clean(std::vector<Gate>& out, const std::vector<Control>& x,
                   const std::vector<Qubit>& a, Qubit target) {
  const std::size_t k = x.size();
  std::vector<Gate> compute;
  compute.push_back(Gate::toffoli(x[0], x[1], a[0]));
  for (std::size_t i = 2; i + 1 < k; ++i) {
    compute.push_back(Gate::toffoli(x[i], pos(a[i - 2]), a[i - 1]));
  }
  out.insert(out.end(), compute.begin(), compute.end());
  out.push_back(Gate::toffoli(x[k - 1], pos(a[k - 3]), target));
  out.insert(out.end(), compute.rbegin(), compute.rend());
}

void chain_borrowed(std::vector<Gate>& out, const std::vector<Control>& x,
                    const std::vector<Qubit>& a, Qubit target) {
  const std::size_t k = x.size();
  // ladder: a[k-3] ^= x[k-2] & a[k-4], ..., a[1] ^= x[2] & a[0]
  std::vector<Gate> down;
  for (std::size_t i = k - 2; i >= 2; --i) {
    down.push_back(Gate::toffoli(x[i], pos(a[i - 2]), a[i - 1]));
  }
  const Gate base = Gate::toffoli(x[0], x[1], a[0]);
  const Gate top = Gate::toffoli(x[k - 1], pos(a[k - 3]), target);
  auto ladder = [&] {
    out.insert(out.end(), down.begin(), down.end());
    out.push_back(base);
    out.insert(out.end(), down.rbegin(), down.rend());
  };
  out.push_back(top);
  ladder();
  out.push_back(top);
  ladder();
}

}  // namespace

Circuit lower_mcx(const Circuit& circuit, const LoweringOptions& options) {
  std::size_t max_controls = 0;
  for (std::size_t index = 0; index < circuit.gates().size(); ++index) {
    const Gate& g = circuit.gates()[index];
    if (g.has_negative_control()) {
      throw InvalidGate("gate " + std::to_string(index) + " (" + g.describe() +
                        ") has negative controls; resolve them before lowering");
    }
    if (g.kind == GateKind::kMCX) max_controls = std::max(max_controls, g.controls.size());
  }

  Circuit out = same_shape(circuit);
  std::vector<Qubit> fresh;
  auto allocate = [&](std::size_t count) {
    while (fresh.size() < count) {
      fresh.push_back(static_cast<Qubit>(out.qubit_count()));
      out.grow(1);
    }
  };
  const bool clean = options.strategy == LoweringStrategy::kCleanChain;
  if (clean && max_controls >= 3) allocate(max_controls - 2);
  const std::vector<Qubit> order = borrow_order(circuit);

  std::vector<Gate> lowered;
  for (std::size_t index = 0; index < circuit.gates().size(); ++index) {
    const Gate& g = circuit.gates()[index];
    if (g.kind != GateKind::kMCX) {
      lowered.push_back(g);
      continue;
    }
    const std::size_t k = g.controls.size();
    const Qubit target = g.targets[0];
    if (k == 1) {
      lowered.push_back(Gate::cnot(g.controls[0], target));
      continue;
    }
    if (k == 2) {
      lowered.push_back(Gate::toffoli(g.controls[0], g.controls[1], target));
      continue;
    }
    if (clean) {
      v_chain_clean(lowered, g.controls, {fresh.begin(), fresh.begin() + (k - 2)},
                    target);
      continue;
    }
    std::unordered_set<Qubit> busy;
    for (Qubit q : g.support()) busy.insert(q);
    std::vector<Qubit> borrowed;
    for (Qubit q : order) {
      if (borrowed.size() == k - 2) break;
      if (!busy.count(q)) borrowed.push_back(q);
    }
    if (borrowed.size() < k - 2) {
      if (!options.allow_allocation) {
        throw InsufficientAncilla(
            "gate " + std::to_string(index) + " (" + g.describe() + ") needs " +
            std::to_string(k - 2) + " idle qubits, only " +
            std::to_string(borrowed.size()) + " available");
      }
      allocate(k - 2 - borrowed.size());
      for (Qubit q : fresh) {
        if (borrowed.size() == k - 2) break;
        borrowed.push_back(q);
      }
    }
    chain_borrowed(lowered, g.controls, borrowed, target);
  }
  if (!fresh.empty()) out.add_register(std::string(kLoweringAncillaRegister), fresh);
  for (Gate& g : lowered) out.append(std::move(g));
  return out;
}

Circuit transpile(const Circuit& circuit, const LoweringOptions& options) {
  return lower_mcx(resolve_negative_controls(circuit), options);
}

bool is_lowered(const Circuit& circuit) {
  return std::none_of(circuit.gates().begin(), circuit.gates().end(),
                      [](const Gate& g) {
                        return g.kind == GateKind::kMCX || g.has_negative_control();
                      });
}

GateStats published_221_cycle_census() {
  GateStats s;
  s.counts[static_cast<std::size_t>(GateKind::kToffoli)] = 476;
  s.counts[static_cast<std::size_t>(GateKind::kX)] = 126;
  s.counts[static_cast<std::size_t>(GateKind::kCNOT)] = 12;
  s.counts[static_cast<std::size_t>(GateKind::kH)] = 12;
  s.counts[static_cast<std::size_t>(GateKind::kSWAP)] = 1;
  return s;
}

namespace {

std::string signed_delta(long long value) {
  return (value >= 0 ? "+" : "") + std::to_string(value);
}

}  // namespace

std::string stats_report_text(const GateStats& stats,
                              const std::optional<GateStats>& reference) {
  std::ostringstream out;
  auto row = [&](std::string name, std::size_t count, std::size_t ref) {
    name.resize(9, ' ');
    out << name << ' ' << count;
    if (reference) {
      out << "  reference " << ref << "  delta "
          << signed_delta(static_cast<long long>(count) - static_cast<long long>(ref));
    }
    out << '\n';
  };
  for (GateKind kind : kAllGateKinds) {
    row(std::string(gate_kind_name(kind)), stats.count(kind),
        reference ? reference->count(kind) : 0);
  }
  row("total", stats.total(), reference ? reference->total() : 0);
  return out.str();
}

std::string stats_report_json(const GateStats& stats,
                              const std::optional<GateStats>& reference) {
  nlohmann::ordered_json doc;
  doc["counts"] = nlohmann::ordered_json::object();
  for (GateKind kind : kAllGateKinds) {
    doc["counts"][std::string(gate_kind_name(kind))] = stats.count(kind);
  }
  doc["total"] = stats.total();
  if (reference) {
    doc["reference"] = nlohmann::ordered_json::object();
    doc["delta"] = nlohmann::ordered_json::object();
    for (GateKind kind : kAllGateKinds) {
      const std::string name(gate_kind_name(kind));
      doc["reference"][name] = reference->count(kind);
      doc["delta"][name] = static_cast<long long>(stats.count(kind)) -
                           static_cast<long long>(reference->count(kind));
    }
    doc["reference_total"] = reference->total();
    doc["delta_total"] = static_cast<long long>(stats.total()) -
                         static_cast<long long>(reference->total());
  }
  return doc.dump(2) + "\n";
}

}  // namespace qpulba

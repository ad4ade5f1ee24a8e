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

// OpenQASM 2.0 emission for lowered circuits.

#pragma once

#include <string>

#include "qpulba/circuit.hpp"

namespace qpulba {

/// Renders a lowered circuit as OpenQASM 2.0 over one flat register q[N].
/// Register names appear as comments. Throws UnloweredGate naming the first
/// MCX or negatively controlled gate.
std::string emit_qasm(const Circuit& circuit);

}  // namespace qpulba

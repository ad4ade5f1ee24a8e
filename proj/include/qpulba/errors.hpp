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

#pragma once

#include <stdexcept>
#include <string>

namespace qpulba {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value lies outside its permitted range (program number, qubit index,
/// transition field).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The machine parameters cannot be handled (d != 1, zero counts, tape
/// longer than the causal cone, description number wider than 62 bits).
class UnsupportedSpec : public Error {
 public:
  using Error::Error;
};

/// The published layout mode was requested for a machine that has
/// none.
class LayoutUnavailable : public Error {
 public:
  using Error::Error;
};

/// A gate violates arity, distinctness or range rules.
class InvalidGate : public Error {
 public:
  using Error::Error;
};

/// Refusals caused by configured resource limits. The CLI maps all of these
/// to exit code 3.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

class GuardExceeded : public LimitExceeded {
 public:
  using LimitExceeded::LimitExceeded;
};

class CapExceeded : public LimitExceeded {
 public:
  using LimitExceeded::LimitExceeded;
};

class BudgetExceeded : public LimitExceeded {
 public:
  using LimitExceeded::LimitExceeded;
};

class InsufficientAncilla : public Error {
 public:
  using Error::Error;
};

class UnloweredGate : public Error {
 public:
  using Error::Error;
};

class UnknownRegister : public Error {
 public:
  using Error::Error;
};

}  // namespace qpulba

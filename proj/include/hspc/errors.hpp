// Copyright 2026 The hspc Authors
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

namespace hspc {

// Argument has the wrong length or qubit count.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Index or qubit outside its valid range.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Real-valued gate or training parameter outside its domain.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A structural precondition (subgroup membership, occupied index 0, ...) failed.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

// Not enough distinct m-bit values to label every coset.
struct CapacityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A compressed message is malformed (overlapping or missing cosets, bad header).
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A message does not reproduce the database it is applied to.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense simulation would exceed the configured qubit limit.
struct SizeLimitError : std::length_error {
  using std::length_error::length_error;
};

}  // namespace hspc

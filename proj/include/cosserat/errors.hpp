// Copyright 2026 The Cosserat Observer Authors
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

namespace cosserat {

// Matrix does not have the zero/skew pattern expected by a vee map.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is outside the domain of an operation (singular, non-SPD, zero tangent).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid model, observer or experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Query outside the span of a measurement log or horizon.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Non-finite state produced by time integration.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step, int node)
      : std::runtime_error(what), step_(step), node_(node) {}
  long step() const { return step_; }
  int node() const { return node_; }

 private:
  long step_;
  int node_;
};

// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cosserat

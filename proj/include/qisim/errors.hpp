// Copyright 2026 The qisim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qisim {

/// Input failed a numerical precondition (Hermiticity, PSD, normalization).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class NormalizationError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Register selector out of range, duplicated, or of the wrong kind.
class RegisterError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

class SignatureMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Post-selection left no support: the conditioning outcome has probability
/// below 1e-14.
class EmptyConditionedState : public std::runtime_error {
  public:
    EmptyConditionedState(const std::string &what, double probability)
        : std::runtime_error(what), probability_(probability) {}
    [[nodiscard]] double probability() const noexcept { return probability_; }

  private:
    double probability_;
};

class UnsupportedVariant : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A simulated result disagrees with its closed form beyond tolerance.
class OracleDivergence : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qisim

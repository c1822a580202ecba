// Copyright 2026 The cadsec Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Error type shared by every cadsec module.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cadsec {

enum class ErrorCode {
    NegativeCoefficient,
    NotNormalized,
    OutOfRange,
    InfeasibleFidelity,
    AsymmetricState,
    NotPositiveSemidefinite,
    EmptyClass,
    DegenerateChannel,
    LengthMismatch,
    OutsideAsymptoticRegime,
    BudgetExceeded,
    UnsupportedCombination,
    FileNotFound,
    ParseError,
    IOError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NegativeCoefficient: return "NegativeCoefficient";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InfeasibleFidelity: return "InfeasibleFidelity";
    case ErrorCode::AsymmetricState: return "AsymmetricState";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::DegenerateChannel: return "DegenerateChannel";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::OutsideAsymptoticRegime: return "OutsideAsymptoticRegime";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IOError: return "IOError";
    }
    return "Unknown";
}

/// Thrown by every validating operation; `code()` identifies the failure.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code), message_(what) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    /// The message without the error-code prefix.
    [[nodiscard]] const std::string &message() const noexcept { return message_; }

  private:
    ErrorCode code_;
    std::string message_;
};

} // namespace cadsec

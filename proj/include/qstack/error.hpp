// Copyright 2026 The qstack Authors

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
 * Error kinds shared by every qstack module.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qstack {

enum class ErrorKind {
    NonFiniteInput,
    ShapeMismatch,
    DimMismatch,
    ZeroState,
    DimNotPowerOfTwo,
    DimTooLarge,
    BudgetTooSmall,
    InvalidEpsilon,
    PlanJobMismatch,
    InvalidDistribution,
    InvalidSupport,
    InvalidEntropy,
    ConstantSeries,
    TooFewPoints,
    NoCrossing,
    InsufficientOverlap,
    EmptyDataset,
    ParseError,
    MagicMismatch,
    TruncatedFile,
    InvalidArgument,
    IoError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::DimNotPowerOfTwo: return "DimNotPowerOfTwo";
    case ErrorKind::DimTooLarge: return "DimTooLarge";
    case ErrorKind::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorKind::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorKind::PlanJobMismatch: return "PlanJobMismatch";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::InvalidSupport: return "InvalidSupport";
    case ErrorKind::InvalidEntropy: return "InvalidEntropy";
    case ErrorKind::ConstantSeries: return "ConstantSeries";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::InsufficientOverlap: return "InsufficientOverlap";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MagicMismatch: return "MagicMismatch";
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Exception thrown by all library entry points; kind() identifies the failure.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace qstack

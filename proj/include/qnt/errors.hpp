// Copyright 2026 The qnt Authors
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
#include <vector>

namespace qnt {

/// Machine-readable error classes surfaced by the library and the CLI.
enum class ErrorCode {
    ParseError,
    ConfigError,
    UnknownNode,
    SelfLoop,
    DuplicateLink,
    DisconnectedGraph,
    WernerOutOfRange,
    DomainError,
    ModeArityMismatch,
    EmptyProbeSet,
    SingularQfim,
    CapacityInfeasible,
    TooManyMonitors,
    Infeasible,
    BudgetExhausted,
    NotAStar,
    PartitionInfeasible,
    DegenerateLikelihood,
    MissingReport,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DuplicateLink: return "DuplicateLink";
        case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorCode::WernerOutOfRange: return "WernerOutOfRange";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::ModeArityMismatch: return "ModeArityMismatch";
        case ErrorCode::EmptyProbeSet: return "EmptyProbeSet";
        case ErrorCode::SingularQfim: return "SingularQfim";
        case ErrorCode::CapacityInfeasible: return "CapacityInfeasible";
        case ErrorCode::TooManyMonitors: return "TooManyMonitors";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::BudgetExhausted: return "BudgetExhausted";
        case ErrorCode::NotAStar: return "NotAStar";
        case ErrorCode::PartitionInfeasible: return "PartitionInfeasible";
        case ErrorCode::DegenerateLikelihood: return "DegenerateLikelihood";
        case ErrorCode::MissingReport: return "MissingReport";
    }
    return "UnknownError";
}

/// Library-wide exception. `indices()` carries the offending link indices
/// where that is meaningful (e.g. the null space of a singular QFIM).
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}
    Error(ErrorCode code, const std::string& message, std::vector<int> indices)
        : Error(code, message) {
        indices_ = std::move(indices);
    }

    ErrorCode code() const { return code_; }
    const std::vector<int>& indices() const { return indices_; }

  private:
    ErrorCode code_;
    std::vector<int> indices_;
};

}  // namespace qnt

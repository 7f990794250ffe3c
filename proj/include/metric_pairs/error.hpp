/*
 * Copyright 2026 The metric_pairs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace metric_pairs {

enum class ErrorCode {
    NotSquare,
    NonFinite,
    AsymmetricMatrix,
    NegativeEntry,
    ZeroOffDiagonal,
    NonZeroDiagonal,
    TriangleViolation,
    InvalidSubset,
    NegativeRadius,
    DisconnectedGraph,
    DifferentAmbient,
    GlueMismatch,
    ChainLengthMismatch,
    InvalidGlue,
    Infeasible,
    EmptyConstraintSet,
    NonPositiveEpsilon,
    DomainTooSmall,
    NetLengthMismatch,
    ResolutionTooCoarse,
    SizeLimitExceeded,
    PreconditionViolated,
    ShortcutDetected,
    LengthMismatch,
    EmptyLimit,
    InvalidArgument,
    UnknownVerb,
    ParseError,
    MissingParam,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotSquare: return "NotSquare";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::AsymmetricMatrix: return "AsymmetricMatrix";
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::ZeroOffDiagonal: return "ZeroOffDiagonal";
        case ErrorCode::NonZeroDiagonal: return "NonZeroDiagonal";
        case ErrorCode::TriangleViolation: return "TriangleViolation";
        case ErrorCode::InvalidSubset: return "InvalidSubset";
        case ErrorCode::NegativeRadius: return "NegativeRadius";
        case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorCode::DifferentAmbient: return "DifferentAmbient";
        case ErrorCode::GlueMismatch: return "GlueMismatch";
        case ErrorCode::ChainLengthMismatch: return "ChainLengthMismatch";
        case ErrorCode::InvalidGlue: return "InvalidGlue";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::EmptyConstraintSet: return "EmptyConstraintSet";
        case ErrorCode::NonPositiveEpsilon: return "NonPositiveEpsilon";
        case ErrorCode::DomainTooSmall: return "DomainTooSmall";
        case ErrorCode::NetLengthMismatch: return "NetLengthMismatch";
        case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
        case ErrorCode::SizeLimitExceeded: return "SizeLimitExceeded";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::ShortcutDetected: return "ShortcutDetected";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyLimit: return "EmptyLimit";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UnknownVerb: return "UnknownVerb";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::MissingParam: return "MissingParam";
    }
    return "Unknown";
}

/// Every failure in the library is reported as an Error. `indices` carries the
/// coordinates of the offending item (a violated triple, a shortcut pair, ...)
/// when there is one.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::vector<std::size_t> indices = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code),
          indices_(std::move(indices)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

private:
    ErrorCode code_;
    std::vector<std::size_t> indices_;
};

}  // namespace metric_pairs

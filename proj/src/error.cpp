// Copyright 2026 The mmforge Authors
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

#include "mmforge/error.hpp"

namespace mmforge {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedSyntax: return "MalformedSyntax";
    case ErrorCode::CoordOutOfRange: return "CoordOutOfRange";
    case ErrorCode::NonMonotonicLoci: return "NonMonotonicLoci";
    case ErrorCode::DuplicateObjectInFrame: return "DuplicateObjectInFrame";
    case ErrorCode::DuplicateObjectId: return "DuplicateObjectId";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::OutOfImage: return "OutOfImage";
    case ErrorCode::NonPositiveDuration: return "NonPositiveDuration";
    case ErrorCode::TooManyFrames: return "TooManyFrames";
    case ErrorCode::BadArity: return "BadArity";
    case ErrorCode::EmptyAnnotation: return "EmptyAnnotation";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InfeasibleCandidate: return "InfeasibleCandidate";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::CropOverflow: return "CropOverflow";
    case ErrorCode::NonPositiveCount: return "NonPositiveCount";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::InvalidMask: return "InvalidMask";
    case ErrorCode::MaskDimMismatch: return "MaskDimMismatch";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::DegenerateWins: return "DegenerateWins";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::TooFew: return "TooFew";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::TargetTooLarge: return "TargetTooLarge";
    case ErrorCode::EmptyEval: return "EmptyEval";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::OutOfUnitInterval: return "OutOfUnitInterval";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code), message_(message) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace mmforge

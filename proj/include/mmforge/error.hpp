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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmforge {

// Every failure raised by the library carries one of these codes. The CLI
// maps them onto process exit statuses.
enum class ErrorCode {
  InvalidArgument,
  // grounding
  MalformedSyntax,
  CoordOutOfRange,
  NonMonotonicLoci,
  DuplicateObjectInFrame,
  DuplicateObjectId,
  KindMismatch,
  InvariantViolation,
  OutOfImage,
  // frame sampling
  NonPositiveDuration,
  TooManyFrames,
  BadArity,
  // message trees
  EmptyAnnotation,
  IndexOutOfRange,
  TooLarge,
  // packing
  InfeasibleCandidate,
  EmptyPool,
  CropOverflow,
  // loss weighting
  NonPositiveCount,
  AllZero,
  // metrics
  InvalidMask,
  MaskDimMismatch,
  ArityMismatch,
  DisconnectedGraph,
  DegenerateWins,
  // data filters
  NonPositive,
  TooFew,
  TooShort,
  TargetTooLarge,
  EmptyEval,
  EmptyMask,
  OutOfUnitInterval,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  // The message without the leading error name.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace mmforge

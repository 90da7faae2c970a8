/*
 * Copyright 2026 The vidagg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VIDAGG_ERROR_H_
#define VIDAGG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vidagg {

enum class ErrorCode {
  kZeroNorm,
  kNonFinite,
  kDimMismatch,
  kInvalidTau,
  kLengthMismatch,
  kMissingScores,
  kMissingScorer,
  kBadMagic,
  kShapeMismatch,
  kMissingTensor,
  kDuplicateId,
  kZeroFrames,
  kParseError,
  kUnknownId,
  kEmptyRanks,
  kNonPositive,
  kNoPositives,
  kInvalidArgument,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this type; `code()` identifies
// the failure class so callers can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the ground-truth parser; carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace vidagg

#endif  // VIDAGG_ERROR_H_

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

#include "vidagg/error.h"

namespace vidagg {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroNorm:
      return "ZeroNorm";
    case ErrorCode::kNonFinite:
      return "NonFinite";
    case ErrorCode::kDimMismatch:
      return "DimMismatch";
    case ErrorCode::kInvalidTau:
      return "InvalidTau";
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kMissingScores:
      return "MissingScores";
    case ErrorCode::kMissingScorer:
      return "MissingScorer";
    case ErrorCode::kBadMagic:
      return "BadMagic";
    case ErrorCode::kShapeMismatch:
      return "ShapeMismatch";
    case ErrorCode::kMissingTensor:
      return "MissingTensor";
    case ErrorCode::kDuplicateId:
      return "DuplicateId";
    case ErrorCode::kZeroFrames:
      return "ZeroFrames";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kUnknownId:
      return "UnknownId";
    case ErrorCode::kEmptyRanks:
      return "EmptyRanks";
    case ErrorCode::kNonPositive:
      return "NonPositive";
    case ErrorCode::kNoPositives:
      return "NoPositives";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kIo:
      return "IoError";
  }
  return "Unknown";
}

}  // namespace vidagg

/*
 * Copyright 2026 The corpuskit Authors.
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

#include "corpuskit/error.hpp"

namespace corpuskit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyPage: return "EmptyPage";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kMissingScore: return "MissingScore";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicatePiece: return "DuplicatePiece";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kNamingConventionViolation: return "NamingConventionViolation";
    case ErrorCode::kLayerCountMismatch: return "LayerCountMismatch";
    case ErrorCode::kMissingTensor: return "MissingTensor";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kCorruption: return "Corruption";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace corpuskit

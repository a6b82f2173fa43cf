// Copyright 2026, The treeslam Authors
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

#include "treeslam/error.hpp"

namespace treeslam {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonOrthonormalInput: return "NonOrthonormalInput";
    case ErrorCode::NonUnitAxis: return "NonUnitAxis";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::DegenerateCloud: return "DegenerateCloud";
    case ErrorCode::DegenerateCorrespondences: return "DegenerateCorrespondences";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonFiniteTransform: return "NonFiniteTransform";
    case ErrorCode::EmptySpan: return "EmptySpan";
    case ErrorCode::MatchFailed: return "MatchFailed";
    case ErrorCode::EmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorCode::UnknownStrategy: return "UnknownStrategy";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyMap: return "EmptyMap";
    case ErrorCode::NoClusters: return "NoClusters";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::AreaTooSmall: return "AreaTooSmall";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonOrthonormalInput:
    case ErrorCode::NonUnitAxis:
    case ErrorCode::DegenerateCorrespondences:
    case ErrorCode::NonFiniteTransform:
    case ErrorCode::MatchFailed:
    case ErrorCode::DegenerateFit:
      return true;
    default:
      return false;
  }
}

}  // namespace treeslam

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

/**
 * \file error.hpp
 * \brief Error type shared by every treeslam module.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace treeslam {

enum class ErrorCode {
  NonOrthonormalInput,
  NonUnitAxis,
  EmptyCloud,
  DegenerateCloud,
  DegenerateCorrespondences,
  InvalidRatio,
  IndexOutOfRange,
  NonFiniteTransform,
  EmptySpan,
  MatchFailed,
  EmptyCandidateSet,
  UnknownStrategy,
  LengthMismatch,
  EmptyMap,
  NoClusters,
  DegenerateFit,
  AreaTooSmall,
  InvalidConfig,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// True for codes that stem from numerics rather than bad input data.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace treeslam

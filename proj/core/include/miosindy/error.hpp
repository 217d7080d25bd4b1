/*
 * Copyright 2026- The miosindy Authors.
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
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace miosindy {

enum class ErrorCode {
  kDimensionMismatch,
  kSingularSystem,
  kInfeasibleConstraints,
  kInvalidProblem,
  kInvalidArgument,
  kDiverged,
  kUnknownSystem,
  kOrderUnsupported,
  kTooFewSamples,
  kDomainTooSmall,
  kZeroColumn,
  kSingularSupport,
  kDegenerateSampleSize,
  kShapeMismatch,
  kConfigError,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library is an Error carrying one of the codes
// above, so callers can branch on the code rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace miosindy

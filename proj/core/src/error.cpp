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

#include "miosindy/error.hpp"

namespace miosindy {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kInfeasibleConstraints: return "InfeasibleConstraints";
    case ErrorCode::kInvalidProblem: return "InvalidProblem";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDiverged: return "Diverged";
    case ErrorCode::kUnknownSystem: return "UnknownSystem";
    case ErrorCode::kOrderUnsupported: return "OrderUnsupported";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kDomainTooSmall: return "DomainTooSmall";
    case ErrorCode::kZeroColumn: return "ZeroColumn";
    case ErrorCode::kSingularSupport: return "SingularSupport";
    case ErrorCode::kDegenerateSampleSize: return "DegenerateSampleSize";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace miosindy

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

#include "miosindy/differentiation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "miosindy/error.hpp"

namespace miosindy {

Matrix moving_average(const Matrix& states, int window) {
  require(window >= 3 && window % 2 == 1, ErrorCode::kInvalidArgument,
          "moving_average: window must be odd and at least 3");
  const Index n = states.rows();
  const Index half = window / 2;
  Matrix out(n, states.cols());
  for (Index i = 0; i < n; ++i) {
    const Index w = std::min({half, i, n - 1 - i});
    out.row(i) = states.middleRows(i - w, 2 * w + 1).colwise().mean();
  }
  return out;
}

Matrix savitzky_golay(const Matrix& states, int window, int order) {
  require(window >= 3 && window % 2 == 1, ErrorCode::kInvalidArgument,
          "savitzky_golay: window must be odd and at least 3");
  require(order >= 0 && order < window, ErrorCode::kInvalidArgument, "savitzky_golay: order must be below window");
  const Index n = states.rows();
  require(n >= window, ErrorCode::kTooFewSamples, "savitzky_golay: fewer samples than the window");
  const Index half = window / 2;
  // Row r of `weights` maps a window of samples to the fitted polynomial at offset r - half.
  Matrix vander(window, order + 1);
  for (Index r = 0; r < window; ++r) {
    for (Index p = 0; p <= order; ++p) vander(r, p) = std::pow(static_cast<double>(r - half), static_cast<double>(p));
  }
  const Matrix weights = vander * vander.colPivHouseholderQr().solve(Matrix::Identity(window, window));
  Matrix out(n, states.cols());
  for (Index i = 0; i < n; ++i) {
    const Index start = std::clamp<Index>(i - half, 0, n - window);
    out.row(i) = weights.row(i - start) * states.middleRows(start, window);
  }
  return out;
}

Matrix centered_difference(const Matrix& states, double dt) {
  const Index n = states.rows();
  require(n >= 3, ErrorCode::kTooFewSamples, "centered_difference: need at least 3 samples");
  require(dt > 0.0, ErrorCode::kInvalidArgument, "centered_difference: dt must be positive");
  Matrix out(n, states.cols());
  const double inv = 1.0 / (2.0 * dt);
  out.row(0) = (-3.0 * states.row(0) + 4.0 * states.row(1) - states.row(2)) * inv;
  out.middleRows(1, n - 2) = (states.bottomRows(n - 2) - states.topRows(n - 2)) * inv;
  out.row(n - 1) = (3.0 * states.row(n - 1) - 4.0 * states.row(n - 2) + states.row(n - 3)) * inv;
  return out;
}

Matrix differentiate(const Matrix& states, double dt, const Differentiator& diff) {
  if (diff.method == DiffMethod::kCentered) return centered_difference(states, dt);
  require(diff.window >= 3 && diff.window % 2 == 1, ErrorCode::kInvalidArgument,
          "differentiate: window must be odd and at least 3");
  require(states.rows() >= diff.window + 2, ErrorCode::kTooFewSamples,
          "differentiate: " + std::to_string(states.rows()) + " samples is fewer than window + 2");
  const Matrix smooth = diff.method == DiffMethod::kSmoothed ? moving_average(states, diff.window)
                                                              : savitzky_golay(states, diff.window);
  return centered_difference(smooth, dt);
}

std::string_view to_string(DiffMethod method) {
  switch (method) {
    case DiffMethod::kCentered: return "centered";
    case DiffMethod::kSmoothed: return "smoothed";
    case DiffMethod::kSavitzkyGolay: return "savgol";
  }
  return "unknown";
}

DiffMethod diff_method_from_string(std::string_view name) {
  for (DiffMethod m : {DiffMethod::kCentered, DiffMethod::kSmoothed, DiffMethod::kSavitzkyGolay}) {
    if (to_string(m) == name) return m;
  }
  fail(ErrorCode::kInvalidArgument, "unknown differentiation method '" + std::string(name) + "'");
}

Matrix differentiate(const Trajectory& traj, const Differentiator& diff) {
  return differentiate(traj.states, traj.dt, diff);
}

}  // namespace miosindy

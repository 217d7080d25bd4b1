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

#include <string_view>

#include "miosindy/linalg.hpp"
#include "miosindy/trajectory.hpp"

namespace miosindy {

enum class DiffMethod {
  kCentered,       // plain centered differences
  kSmoothed,       // moving average over `window`, then centered differences
  kSavitzkyGolay,  // local cubic least-squares smoothing over `window`, then centered differences
};

std::string_view to_string(DiffMethod method);
DiffMethod diff_method_from_string(std::string_view name);  // "centered", "smoothed", "savgol"

struct Differentiator {
  DiffMethod method = DiffMethod::kCentered;
  int window = 9;  // smoothing length, ignored by kCentered
};

// Time derivative of every column, n x d. Smoothed mode applies a centred
// moving average first; the window shrinks symmetrically near the ends.
// Throws TooFewSamples when n < window + 2 (n < 3 for plain differences).
Matrix differentiate(const Trajectory& traj, const Differentiator& diff);
Matrix differentiate(const Matrix& states, double dt, const Differentiator& diff);

Matrix moving_average(const Matrix& states, int window);
Matrix savitzky_golay(const Matrix& states, int window, int order = 3);
Matrix centered_difference(const Matrix& states, double dt);

}  // namespace miosindy

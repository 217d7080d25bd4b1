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

#include <iosfwd>
#include <string>

#include "miosindy/linalg.hpp"

namespace miosindy {

// Uniformly sampled state history: states is n x d, times[i] = times[0] + i * dt.
struct Trajectory {
  Vector times;
  Matrix states;
  double dt = 0.0;

  Index samples() const { return states.rows(); }
  Index dim() const { return states.cols(); }

  // Rows [begin, end).
  Trajectory slice(Index begin, Index end) const;
};

Trajectory make_trajectory(Matrix states, double dt, double t0 = 0.0);

// CSV with header `t,x1,...,xd` and 17 significant digits per value.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(std::istream& in);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace miosindy

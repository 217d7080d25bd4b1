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

#include "miosindy/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "miosindy/error.hpp"

namespace miosindy {

Trajectory Trajectory::slice(Index begin, Index end) const {
  require(0 <= begin && begin <= end && end <= samples(), ErrorCode::kInvalidArgument,
          "Trajectory::slice: range out of bounds");
  Trajectory out;
  out.times = times.segment(begin, end - begin);
  out.states = states.middleRows(begin, end - begin);
  out.dt = dt;
  return out;
}

Trajectory make_trajectory(Matrix states, double dt, double t0) {
  require(dt > 0.0, ErrorCode::kInvalidArgument, "make_trajectory: dt must be positive");
  Trajectory traj;
  traj.times.resize(states.rows());
  for (Index i = 0; i < states.rows(); ++i) traj.times[i] = t0 + static_cast<double>(i) * dt;
  traj.states = std::move(states);
  traj.dt = dt;
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "t";
  for (Index j = 0; j < traj.dim(); ++j) out << ",x" << (j + 1);
  out << '\n' << std::setprecision(17);
  for (Index i = 0; i < traj.samples(); ++i) {
    out << traj.times[i];
    for (Index j = 0; j < traj.dim(); ++j) out << ',' << traj.states(i, j);
    out << '\n';
  }
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::kIoError, "cannot open " + path + " for writing");
  write_trajectory_csv(traj, out);
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::kIoError,
          "trajectory CSV: missing header");
  const auto columns = static_cast<Index>(std::count(line.begin(), line.end(), ',') + 1);
  require(columns >= 2 && line.rfind("t,", 0) == 0, ErrorCode::kIoError,
          "trajectory CSV: header must be t,x1,...,xd");

  std::vector<double> values;
  Index rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Index count = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++count;
    }
    require(count == columns, ErrorCode::kIoError,
            "trajectory CSV: row " + std::to_string(rows + 1) + " has wrong column count");
    ++rows;
  }
  require(rows >= 2, ErrorCode::kIoError, "trajectory CSV: need at least two samples");

  Trajectory traj;
  traj.times.resize(rows);
  traj.states.resize(rows, columns - 1);
  for (Index i = 0; i < rows; ++i) {
    traj.times[i] = values[static_cast<std::size_t>(i * columns)];
    for (Index j = 1; j < columns; ++j) {
      traj.states(i, j - 1) = values[static_cast<std::size_t>(i * columns + j)];
    }
  }
  const double span = traj.times[rows - 1] - traj.times[0];
  traj.dt = span / static_cast<double>(rows - 1);
  require(traj.dt > 0.0, ErrorCode::kIoError, "trajectory CSV: times must increase");
  for (Index i = 0; i < rows; ++i) {
    const double expected = traj.times[0] + static_cast<double>(i) * traj.dt;
    require(std::abs(traj.times[i] - expected) <= 1e-9 * std::max(1.0, std::abs(span)),
            ErrorCode::kIoError, "trajectory CSV: times are not uniformly spaced");
  }
  return traj;
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIoError, "cannot open " + path);
  return read_trajectory_csv(in);
}

}  // namespace miosindy

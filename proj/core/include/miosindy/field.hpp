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

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "miosindy/linalg.hpp"

namespace miosindy {

struct Axis {
  std::string name;
  double start = 0.0;
  double step = 1.0;
  Index count = 0;
  bool periodic = false;

  double coordinate(Index i) const { return start + static_cast<double>(i) * step; }
  // Period of a periodic axis, count * step.
  double length() const { return static_cast<double>(count) * step; }
};

// Samples of one or more scalar variables on a (time, space...) grid. `values`
// is row-major with shape (time, space axes..., variables).
struct Field {
  Axis time;
  std::vector<Axis> space;
  std::vector<std::string> variables;
  std::vector<double> values;

  Index num_times() const { return time.count; }
  Index num_points() const;  // spatial points per snapshot
  Index num_variables() const { return static_cast<Index>(variables.size()); }
  std::vector<Index> shape() const;

  double& at(Index t, Index point, Index var) {
    return values[static_cast<std::size_t>((t * num_points() + point) * num_variables() + var)];
  }
  double at(Index t, Index point, Index var) const {
    return values[static_cast<std::size_t>((t * num_points() + point) * num_variables() + var)];
  }

  // One variable as a (time x spatial point) matrix, points in row-major order.
  Matrix variable(Index var) const;
  void set_variable(Index var, const Matrix& data);

  Index axis_index(const std::string& name) const;  // spatial axes only
};

Field make_field(Axis time, std::vector<Axis> space, std::vector<std::string> variables);

// Spatial derivative of every variable along `axis`. Spectral on periodic
// axes, second-order finite differences (one-sided at the ends) otherwise.
// Orders 1 through 4.
Field spatial_derivative(const Field& field, const std::string& axis, int order);
Field spatial_derivative(const Field& field, Index axis, int order);

// Time derivative by second-order finite differences.
Field time_derivative(const Field& field);

// Binary container: magic, rank, dims, row-major doubles. The sidecar JSON
// at `path + ".json"` carries axes and variable names.
void write_field(const Field& field, const std::string& path);
Field read_field(const std::string& path);

// n-dimensional real FFT over a row-major grid. The last axis is halved in
// the spectrum (n_last / 2 + 1 complex values). Inverse is normalized.
class RealFft {
 public:
  explicit RealFft(std::vector<int> shape);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t real_size() const { return real_size_; }
  std::size_t spectral_size() const { return spectral_size_; }

  void forward(const double* in, std::complex<double>* out);
  void inverse(const std::complex<double>* in, double* out);

 private:
  struct Plans;
  std::unique_ptr<Plans> plans_;
  std::size_t real_size_ = 0;
  std::size_t spectral_size_ = 0;
};

// Angular wavenumbers 2*pi*m/length in FFT order, m = 0..n/2, -n/2+1..-1.
Vector wavenumbers(Index n, double length);

}  // namespace miosindy

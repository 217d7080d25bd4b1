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

#include <utility>

#include "miosindy/field.hpp"
#include "miosindy/linalg.hpp"
#include "miosindy/rng.hpp"

namespace miosindy {

struct KsOptions {
  double length = 32.0 * 3.14159265358979323846;
  double max_step = 0.025;  // internal ETDRK4 step bound
};

// u_t = -u u_x - u_xx - u_xxxx on a periodic grid of u0.size() points (a power
// of two), sampled every dt_out from 0 to t_end. Throws Diverged.
Field simulate_ks(const Vector& u0, double t_end, double dt_out, const KsOptions& options = {});

// (cos(s + r0) + sin(q s)) / Z with s = 2 pi x / length the grid phase,
// r0, r1 ~ U[0, 1], q = round(4 r1) so the profile stays periodic, and Z the
// sup norm of the numerator.
Vector ks_initial_condition(Index points, RngStream& rng);

struct ReactionDiffusionOptions {
  double half_width = 10.0;  // domain [-half_width, half_width)^2
  double diffusion = 0.1;
  double max_step = 0.01;
};

// Lambda-omega reaction-diffusion system
//   u_t = d (u_xx + u_yy) + u - u v^2 - u^3 + v^3 + u^2 v
//   v_t = d (v_xx + v_yy) + v - u v^2 - u^3 - v^3 - u^2 v
// on a periodic square grid. u0(i, j) is the value at (x_i, y_j).
Field simulate_reaction_diffusion(const Matrix& u0, const Matrix& v0, double t_end, double dt_out,
                                  const ReactionDiffusionOptions& options = {});

// u0 = tanh(r) cos(angle + offset - scale r), v0 the same with sin, on the
// grid x_i = -half_width + i * step.
std::pair<Matrix, Matrix> spiral_initial_condition(Index points, double half_width, double scale,
                                                   double offset);

// Spiral with scale ~ U[0.95, 1.05] and offset ~ U[0, 2 pi].
std::pair<Matrix, Matrix> sample_spiral_initial_condition(Index points, double half_width,
                                                          RngStream& rng);

}  // namespace miosindy

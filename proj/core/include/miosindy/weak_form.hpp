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

#include <cstdint>
#include <vector>

#include "miosindy/field.hpp"
#include "miosindy/library.hpp"
#include "miosindy/trajectory.hpp"

namespace miosindy {

struct WeakConfig {
  int num_domains = 100;
  int points_per_domain = 100;  // samples per axis of each subdomain
  int power = 0;                // test function exponent; 0 selects max(order + 1, 4)
  std::uint64_t seed = 0;       // domain placement stream
};

// Derivatives of (t^2 - 1)^p on [-1, 1], orders 0..max_order, evaluated at
// `points` uniform nodes. Row r holds the order-r derivative.
Matrix test_function_table(int power, int max_order, int points);

// Integral form of an ODE library: row k holds the integrals of each term
// against the test function on subdomain k, and the targets hold
// -integral(phi' x) per state variable.
CandidateLibrary weak_ode_library(const Trajectory& traj, const std::vector<Term>& terms, const WeakConfig& cfg);

// Integral form of a PDE library over random (space..., time) boxes.
// Pure derivative terms and u^a u_x style products move every derivative onto
// the test function; other products use spectrally differentiated data.
CandidateLibrary weak_pde_library(const Field& field, const std::vector<Term>& terms, const WeakConfig& cfg);

}  // namespace miosindy

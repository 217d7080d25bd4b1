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

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "miosindy/linalg.hpp"
#include "miosindy/rng.hpp"
#include "miosindy/term.hpp"
#include "miosindy/trajectory.hpp"

namespace miosindy {

// c * prod_j x_j^exponents[j]
struct Monomial {
  std::vector<int> exponents;
  double coefficient = 0.0;
};
using SparsePolynomial = std::vector<Monomial>;

class OdeSystem {
 public:
  using Rhs = std::function<void(std::span<const double> x, std::span<double> dx)>;

  // `rhs` is the hand-written vector field; `truth` holds the same dynamics as
  // one sparse polynomial per equation and defines the ground-truth Xi.
  OdeSystem(std::string name, std::vector<std::string> variables,
            std::vector<std::pair<std::string, double>> parameters, Rhs rhs,
            std::vector<SparsePolynomial> truth);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return variables_.size(); }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<std::pair<std::string, double>>& parameters() const { return parameters_; }
  double parameter(std::string_view key) const;
  const std::vector<SparsePolynomial>& truth() const { return truth_; }

  void rhs(std::span<const double> x, std::span<double> dx) const { rhs_(x, dx); }
  Vector rhs(const Vector& x) const;

  // Highest monomial degree among the true terms.
  int truth_degree() const;

  // Ground truth coefficient matrix (terms x targets) in a polynomial library.
  // `library_vars[j]` is the state index feeding exponent slot j of each term;
  // `target_vars` picks which equations become columns. Empty means "all".
  // Throws InvalidArgument when a true monomial has no matching term.
  Matrix true_coefficients(const std::vector<Term>& terms,
                           const std::vector<std::size_t>& library_vars = {},
                           const std::vector<std::size_t>& target_vars = {}) const;

 private:
  std::string name_;
  std::vector<std::string> variables_;
  std::vector<std::pair<std::string, double>> parameters_;
  Rhs rhs_;
  std::vector<SparsePolynomial> truth_;
};

// Registered ODE benchmarks: lorenz, hopf, mhd, duffing, vanderpol, lotka, rossler.
const OdeSystem& find_system(std::string_view name);
std::vector<std::string> ode_system_names();

// Fixed-step classical RK4 sampled at every step from 0 to t_end inclusive.
// Throws Diverged when any component exceeds 1e6 in magnitude.
Trajectory rk4_integrate(const OdeSystem& system, const Vector& x0, double t_end, double dt);

// Initial condition drawn from the sampling volume registered for each system.
Vector sample_initial_condition(const OdeSystem& system, RngStream& rng);

// Adds N(0, s^2) to every entry with s = (percent / 100) * |X|_F / sqrt(n d).
Trajectory add_noise(const Trajectory& traj, double percent, RngStream& rng);

}  // namespace miosindy

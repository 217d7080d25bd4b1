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

#include <Eigen/Dense>

namespace miosindy {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Reciprocal condition estimates below this are treated as singular.
inline constexpr double kConditionLimit = 1e12;

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

// Ridge objective with the data constant dropped: xi'(G + lambda I)xi - 2<c, xi>.
double ridge_objective(const Matrix& gram, const Vector& linear, double lambda,
                       const Vector& xi);

// Minimizer of ridge_objective, i.e. (G + lambda I)^{-1} c.
//
// Cholesky first; when lambda == 0 and Cholesky fails a pivoted LDL' is tried.
// Throws SingularSystem when lambda == 0 and the estimated condition number
// exceeds kConditionLimit, DimensionMismatch on inconsistent shapes.
Vector ridge_solve(const Matrix& gram, const Vector& linear, double lambda);

// Minimizer of ridge_objective subject to A xi = b (null-space KKT solve).
// An A with zero rows reduces to ridge_solve. Throws InfeasibleConstraints when
// A is row-rank deficient, the reduced system is singular, or the constraints
// cannot be met to 1e-8 (1 + |b|_inf).
Vector constrained_ridge_solve(const Matrix& gram, const Vector& linear, double lambda,
                               const Matrix& a, const Vector& b);

// Tolerant quadratic minimization used inside the branch-and-bound, where
// eliminated variables routinely leave rank-deficient constraint rows and
// lambda == 0 leaves singular Gram blocks. Objective is x'Hx - 2c'x.
namespace qp {

enum class Outcome { kSolved, kInfeasible, kUnbounded };

struct Result {
  Outcome outcome = Outcome::kSolved;
  Vector x;
  double objective = 0.0;
  // True when H (or the reduced Hessian) was factored by Cholesky.
  bool positive_definite = false;
};

Result minimize(const Matrix& h, const Vector& c);
Result minimize_eq(const Matrix& h, const Vector& c, const Matrix& a, const Vector& b);

}  // namespace qp

}  // namespace miosindy

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

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "miosindy/linalg.hpp"

namespace miosindy {

enum class SolveStatus { kOptimal, kTimeLimit, kInfeasible, kHeuristic };

std::string_view to_string(SolveStatus status);

struct SparseSolution {
  Vector xi;
  std::vector<Index> support;  // ascending
  double objective = 0.0;      // xi'(G + lambda I)xi - 2 c'xi
  double lower_bound = 0.0;
  double gap = 0.0;            // (objective - lower_bound) / max(1, |objective|); NaN for heuristics
  SolveStatus status = SolveStatus::kOptimal;
  std::size_t nodes_explored = 0;
  double wall_time = 0.0;      // seconds
};

enum class ConstraintSense { kEqual, kLessEqual };

struct SideConstraints {
  Matrix a;
  Vector b;
  ConstraintSense sense = ConstraintSense::kEqual;
};

struct SparseRegressionProblem {
  Matrix gram;    // Theta'Theta
  Vector linear;  // Theta'y
  double lambda = 0.0;
  Index k = 0;    // at most k nonzero coefficients
  std::optional<SideConstraints> constraints;

  static SparseRegressionProblem from_data(const Matrix& theta, const Vector& y, double lambda, Index k);
};

struct CoefficientBounds {
  Vector lower;  // each <= 0
  Vector upper;  // each >= 0
};

struct BnbConfig {
  double gap_tolerance = 1e-6;
  double time_limit = 30.0;  // seconds
  std::size_t node_limit = std::numeric_limits<std::size_t>::max();
  std::optional<Vector> warm_start;
  // Optional coefficient bounds; they become part of the feasible set and
  // tighten every node relaxation.
  std::optional<CoefficientBounds> big_m;
  // One JSON object per processed node when set.
  std::ostream* trace = nullptr;
};

// Exact best-subset ridge regression by best-first branch-and-bound on the
// support. Throws InvalidProblem on malformed input and InfeasibleConstraints
// when the search proves no support of size <= k admits the side constraints.
SparseSolution solve_sparse(const SparseRegressionProblem& problem, const BnbConfig& cfg = {});

struct JointSolution {
  SparseSolution stacked;                    // over [xi_1; xi_2; ...]
  std::vector<SparseSolution> per_dimension; // blocks of `stacked`, sharing its status and bound
};

// All equations at once: block-diagonal objective, one cardinality budget and
// side constraints over the stacked coefficient vector.
JointSolution solve_joint(const Matrix& theta, const Matrix& targets, double lambda, Index k_global,
                          const std::optional<SideConstraints>& constraints, const BnbConfig& cfg = {});

// Ordinary least squares restricted to `support`, zero elsewhere. Throws
// SingularSupport when the support columns are linearly dependent.
Vector unbias(const std::vector<Index>& support, const Matrix& theta, const Vector& y);

}  // namespace miosindy

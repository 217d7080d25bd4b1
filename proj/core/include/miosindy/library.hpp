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
#include <optional>
#include <string>
#include <vector>

#include "miosindy/differentiation.hpp"
#include "miosindy/field.hpp"
#include "miosindy/linalg.hpp"
#include "miosindy/term.hpp"
#include "miosindy/trajectory.hpp"

namespace miosindy {

struct CandidateLibrary {
  std::vector<Term> terms;
  Matrix theta;    // samples x terms
  Matrix targets;  // samples x equations (may have zero columns)
  Vector scales;   // column factors applied to theta, 1 when unnormalized
  std::vector<std::string> target_names;

  Index size() const { return static_cast<Index>(terms.size()); }
  std::vector<std::string> labels() const;
};

// Monomials of total degree 1..degree (plus the constant when include_bias),
// graded: by degree, then by variable index in combinations-with-replacement
// order, e.g. x^2, x y, x z, y^2, y z, z^2.
std::vector<Term> polynomial_terms(std::size_t num_variables, int degree, bool include_bias,
                                   const std::vector<std::string>& names = {});

// Evaluates derivative-free terms row by row.
Matrix evaluate_terms(const std::vector<Term>& terms, const Matrix& states);

// Targets are filled when a differentiator is given, otherwise left empty.
CandidateLibrary polynomial_library(const Trajectory& traj, int degree, bool include_bias,
                                    const std::optional<Differentiator>& diff = std::nullopt);

// Terms for a PDE library without a constant:
//   polynomials of degree 1..degree,
//   every spatial derivative of every variable with total order 1..max_deriv
//   (mixed partials included),
//   and each derivative times each polynomial.
std::vector<Term> pde_terms(const std::vector<std::string>& variables,
                            const std::vector<std::string>& axes, int degree, int max_deriv);

// Derivative of each variable for every distinct DerivativeSpec in `terms`.
std::vector<std::pair<DerivativeSpec, Matrix>> derivative_data(const Field& field,
                                                               const std::vector<Term>& terms);

// Strong-form PDE library over all (time, point) samples; targets are the
// finite-difference time derivatives of each variable.
CandidateLibrary pde_library(const Field& field, int degree, int max_deriv);

// Label for a term, e.g. "u^2 v_xy".
std::string term_label(const std::vector<int>& exponents, const std::optional<DerivativeSpec>& derivative,
                       const std::vector<std::string>& variables, const std::vector<std::string>& axes);

// Scales every theta column to unit 2-norm. Throws ZeroColumn.
CandidateLibrary normalize_columns(const CandidateLibrary& lib);

// Maps coefficients fitted on a normalized library back to original units.
Matrix denormalize(const CandidateLibrary& lib, const Matrix& coefficients);

void write_library_csv(const CandidateLibrary& lib, std::ostream& out);
void write_library_csv(const CandidateLibrary& lib, const std::string& path);

}  // namespace miosindy

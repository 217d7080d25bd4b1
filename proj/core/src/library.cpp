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

#include "miosindy/library.hpp"

#include <fstream>
#include <iomanip>
#include <map>

#include "miosindy/error.hpp"

namespace miosindy {

namespace {

// Exponent vectors of total degree `degree` over `slots`, in
// combinations-with-replacement order of slot indices.
void graded_exponents(std::size_t slots, int degree, std::vector<std::vector<int>>& out) {
  std::vector<std::size_t> combo(static_cast<std::size_t>(degree), 0);
  if (degree == 0) {
    out.emplace_back(slots, 0);
    return;
  }
  while (true) {
    std::vector<int> e(slots, 0);
    for (std::size_t c : combo) ++e[c];
    out.push_back(std::move(e));
    int pos = degree - 1;
    while (pos >= 0 && combo[static_cast<std::size_t>(pos)] == slots - 1) --pos;
    if (pos < 0) break;
    const std::size_t next = combo[static_cast<std::size_t>(pos)] + 1;
    for (auto i = static_cast<std::size_t>(pos); i < combo.size(); ++i) combo[i] = next;
  }
}

// Powers table: pow[j][e] holds column j of states raised to e.
std::vector<std::vector<Vector>> power_table(const Matrix& states, int max_exponent) {
  std::vector<std::vector<Vector>> pow(static_cast<std::size_t>(states.cols()));
  for (Index j = 0; j < states.cols(); ++j) {
    auto& p = pow[static_cast<std::size_t>(j)];
    p.push_back(Vector::Ones(states.rows()));
    for (int e = 1; e <= max_exponent; ++e) p.push_back(p.back().cwiseProduct(states.col(j)));
  }
  return pow;
}

Vector evaluate_monomial(const std::vector<int>& exponents, const std::vector<std::vector<Vector>>& pow, Index rows) {
  Vector col = Vector::Ones(rows);
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    if (exponents[j] > 0) col = col.cwiseProduct(pow[j][static_cast<std::size_t>(exponents[j])]);
  }
  return col;
}

}  // namespace

std::vector<std::string> CandidateLibrary::labels() const {
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.label);
  return out;
}

std::vector<Term> polynomial_terms(std::size_t num_variables, int degree, bool include_bias,
                                   const std::vector<std::string>& names) {
  require(degree >= 1, ErrorCode::kInvalidArgument, "polynomial_terms: degree must be at least 1");
  require(num_variables >= 1, ErrorCode::kInvalidArgument, "polynomial_terms: need at least one variable");
  const auto labels = names.empty() ? default_variable_names(num_variables) : names;
  require(labels.size() == num_variables, ErrorCode::kDimensionMismatch, "polynomial_terms: name count mismatch");
  std::vector<std::vector<int>> exps;
  for (int d = include_bias ? 0 : 1; d <= degree; ++d) graded_exponents(num_variables, d, exps);
  std::vector<Term> terms;
  terms.reserve(exps.size());
  for (auto& e : exps) {
    std::string label = monomial_label(e, labels);
    terms.push_back(Term{std::move(e), std::nullopt, std::move(label)});
  }
  return terms;
}

Matrix evaluate_terms(const std::vector<Term>& terms, const Matrix& states) {
  int max_exp = 0;
  for (const auto& t : terms) {
    require(!t.derivative, ErrorCode::kInvalidArgument, "evaluate_terms: derivative terms need field data");
    require(static_cast<Index>(t.exponents.size()) == states.cols(), ErrorCode::kDimensionMismatch,
            "evaluate_terms: term '" + t.label + "' does not match the state dimension");
    for (int e : t.exponents) max_exp = std::max(max_exp, e);
  }
  const auto pow = power_table(states, max_exp);
  Matrix theta(states.rows(), static_cast<Index>(terms.size()));
  for (std::size_t i = 0; i < terms.size(); ++i) {
    theta.col(static_cast<Index>(i)) = evaluate_monomial(terms[i].exponents, pow, states.rows());
  }
  return theta;
}

CandidateLibrary polynomial_library(const Trajectory& traj, int degree, bool include_bias,
                                    const std::optional<Differentiator>& diff) {
  CandidateLibrary lib;
  lib.terms = polynomial_terms(static_cast<std::size_t>(traj.dim()), degree, include_bias);
  lib.theta = evaluate_terms(lib.terms, traj.states);
  lib.scales = Vector::Ones(lib.size());
  if (diff) {
    lib.targets = differentiate(traj, *diff);
  } else {
    lib.targets = Matrix(traj.samples(), 0);
  }
  for (const auto& name : default_variable_names(static_cast<std::size_t>(traj.dim()))) {
    lib.target_names.push_back(name + "_t");
  }
  return lib;
}

std::string term_label(const std::vector<int>& exponents, const std::optional<DerivativeSpec>& derivative,
                       const std::vector<std::string>& variables, const std::vector<std::string>& axes) {
  std::string label;
  bool any = false;
  for (int e : exponents) any = any || e > 0;
  if (any) label = monomial_label(exponents, variables);
  if (derivative) {
    std::string d = variables.at(derivative->variable) + "_";
    for (std::size_t a = 0; a < derivative->orders.size(); ++a) {
      for (int r = 0; r < derivative->orders[a]; ++r) d += axes.at(a);
    }
    label = label.empty() ? d : label + " " + d;
  }
  return label.empty() ? "1" : label;
}

std::vector<Term> pde_terms(const std::vector<std::string>& variables,
                            const std::vector<std::string>& axes, int degree, int max_deriv) {
  require(degree >= 1 && max_deriv >= 1, ErrorCode::kInvalidArgument,
          "pde_terms: degree and max_deriv must be at least 1");
  require(!variables.empty() && !axes.empty(), ErrorCode::kInvalidArgument, "pde_terms: need variables and axes");
  const std::size_t nv = variables.size();
  std::vector<std::vector<int>> polys;
  for (int d = 1; d <= degree; ++d) graded_exponents(nv, d, polys);
  std::vector<DerivativeSpec> derivs;
  for (std::size_t v = 0; v < nv; ++v) {
    std::vector<std::vector<int>> orders;
    for (int d = 1; d <= max_deriv; ++d) graded_exponents(axes.size(), d, orders);
    for (auto& o : orders) derivs.push_back(DerivativeSpec{v, std::move(o)});
  }

  std::vector<Term> terms;
  for (const auto& p : polys) terms.push_back(Term{p, std::nullopt, term_label(p, std::nullopt, variables, axes)});
  const std::vector<int> none(nv, 0);
  for (const auto& d : derivs) terms.push_back(Term{none, d, term_label(none, d, variables, axes)});
  for (const auto& d : derivs) {
    for (const auto& p : polys) terms.push_back(Term{p, d, term_label(p, d, variables, axes)});
  }
  return terms;
}

std::vector<std::pair<DerivativeSpec, Matrix>> derivative_data(const Field& field,
                                                               const std::vector<Term>& terms) {
  std::vector<std::pair<DerivativeSpec, Matrix>> out;
  // Shared partial results keyed by orders; every variable is differentiated at once.
  std::map<std::vector<int>, Field> cache;
  for (const auto& t : terms) {
    if (!t.derivative) continue;
    const auto& spec = *t.derivative;
    bool seen = false;
    for (const auto& [s, m] : out) seen = seen || s == spec;
    if (seen) continue;
    require(spec.orders.size() == field.space.size(), ErrorCode::kDimensionMismatch,
            "derivative_data: derivative axes do not match the field");
    auto it = cache.find(spec.orders);
    if (it == cache.end()) {
      Field d = field;
      for (std::size_t a = 0; a < spec.orders.size(); ++a) {
        if (spec.orders[a] > 0) d = spatial_derivative(d, static_cast<Index>(a), spec.orders[a]);
      }
      it = cache.emplace(spec.orders, std::move(d)).first;
    }
    out.emplace_back(spec, it->second.variable(static_cast<Index>(spec.variable)));
  }
  return out;
}

CandidateLibrary pde_library(const Field& field, int degree, int max_deriv) {
  std::vector<std::string> axes;
  for (const auto& a : field.space) axes.push_back(a.name);
  CandidateLibrary lib;
  lib.terms = pde_terms(field.variables, axes, degree, max_deriv);
  lib.scales = Vector::Ones(lib.size());

  const Index rows = field.num_times() * field.num_points();
  Matrix states(rows, field.num_variables());
  for (Index v = 0; v < field.num_variables(); ++v) {
    states.col(v) = field.variable(v).transpose().reshaped();
  }
  const auto derivs = derivative_data(field, lib.terms);
  const auto pow = power_table(states, degree);
  lib.theta.resize(rows, lib.size());
  for (Index i = 0; i < lib.size(); ++i) {
    const Term& t = lib.terms[static_cast<std::size_t>(i)];
    Vector col = evaluate_monomial(t.exponents, pow, rows);
    if (t.derivative) {
      for (const auto& [spec, data] : derivs) {
        if (spec == *t.derivative) {
          col = col.cwiseProduct(data.transpose().reshaped());
          break;
        }
      }
    }
    lib.theta.col(i) = col;
  }

  const Field dt = time_derivative(field);
  lib.targets.resize(rows, field.num_variables());
  for (Index v = 0; v < field.num_variables(); ++v) {
    lib.targets.col(v) = dt.variable(v).transpose().reshaped();
    lib.target_names.push_back(field.variables[static_cast<std::size_t>(v)] + "_t");
  }
  return lib;
}

CandidateLibrary normalize_columns(const CandidateLibrary& lib) {
  require(lib.scales.size() == 0 || lib.scales.size() == lib.theta.cols(), ErrorCode::kDimensionMismatch,
          "normalize_columns: scales length must match theta columns");
  CandidateLibrary out = lib;
  // A library without scales is in original units.
  if (out.scales.size() == 0) out.scales = Vector::Ones(lib.theta.cols());
  for (Index i = 0; i < lib.theta.cols(); ++i) {
    const double norm = lib.theta.col(i).norm();
    if (!(norm > 0.0)) {
      fail(ErrorCode::kZeroColumn, "normalize_columns: column '" + lib.terms[static_cast<std::size_t>(i)].label + "' is zero");
    }
    out.theta.col(i) /= norm;
    out.scales[i] *= norm;
  }
  return out;
}

Matrix denormalize(const CandidateLibrary& lib, const Matrix& coefficients) {
  require(coefficients.rows() == lib.size(), ErrorCode::kDimensionMismatch, "denormalize: row count mismatch");
  return lib.scales.cwiseInverse().asDiagonal() * coefficients;
}

void write_library_csv(const CandidateLibrary& lib, std::ostream& out) {
  bool first = true;
  for (const auto& t : lib.terms) {
    out << (first ? "" : ",") << t.label;
    first = false;
  }
  for (Index j = 0; j < lib.targets.cols(); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    out << (first ? "" : ",") << (jj < lib.target_names.size() ? lib.target_names[jj] : "target" + std::to_string(j));
    first = false;
  }
  out << '\n' << std::setprecision(17);
  for (Index r = 0; r < lib.theta.rows(); ++r) {
    for (Index c = 0; c < lib.theta.cols(); ++c) out << (c ? "," : "") << lib.theta(r, c);
    for (Index j = 0; j < lib.targets.cols(); ++j) out << (lib.theta.cols() || j ? "," : "") << lib.targets(r, j);
    out << '\n';
  }
}

void write_library_csv(const CandidateLibrary& lib, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::kIoError, "cannot open " + path + " for writing");
  write_library_csv(lib, out);
}

}  // namespace miosindy

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

#include "miosindy/weak_form.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "miosindy/error.hpp"
#include "miosindy/rng.hpp"

namespace miosindy {

namespace {

int resolve_power(const WeakConfig& cfg, int max_order) {
  const int auto_power = std::max(max_order + 1, 4);
  if (cfg.power == 0) return auto_power;
  require(cfg.power >= max_order + 1, ErrorCode::kInvalidArgument,
          "weak form: test function power " + std::to_string(cfg.power) + " is below max derivative order + 1");
  return cfg.power;
}

void check_config(const WeakConfig& cfg) {
  require(cfg.num_domains >= 1, ErrorCode::kInvalidArgument, "weak form: num_domains must be at least 1");
  require(cfg.points_per_domain >= 5, ErrorCode::kInvalidArgument, "weak form: points_per_domain must be at least 5");
}

// Trapezoid weights times the scaled test-function derivative: entry (r, j) is
// w_j * d^r phi / ds^r at node j for a domain of `points` samples spaced `step`.
Matrix weighted_kernel(int power, int max_order, int points, double step) {
  Matrix table = test_function_table(power, max_order, points);
  const double half = 0.5 * static_cast<double>(points - 1) * step;
  for (int r = 0; r <= max_order; ++r) table.row(r) *= std::pow(half, -r) * step;
  table.col(0) *= 0.5;
  table.col(points - 1) *= 0.5;
  return table;
}

}  // namespace

Matrix test_function_table(int power, int max_order, int points) {
  require(power >= 1 && max_order >= 0 && points >= 2, ErrorCode::kInvalidArgument, "test_function_table: bad arguments");
  // Coefficients of (t^2 - 1)^p in ascending powers of t.
  std::vector<double> coeffs(static_cast<std::size_t>(2 * power + 1), 0.0);
  double binom = 1.0;
  for (int j = 0; j <= power; ++j) {
    coeffs[static_cast<std::size_t>(2 * j)] = binom * (((power - j) % 2 == 0) ? 1.0 : -1.0);
    binom = binom * (power - j) / (j + 1);
  }
  Matrix table(max_order + 1, points);
  for (int r = 0; r <= max_order; ++r) {
    for (int i = 0; i < points; ++i) {
      const double t = -1.0 + 2.0 * i / (points - 1);
      double value = 0.0;
      for (int d = static_cast<int>(coeffs.size()) - 1; d >= 0; --d) value = value * t + coeffs[static_cast<std::size_t>(d)];
      table(r, i) = value;
    }
    for (std::size_t d = 1; d < coeffs.size(); ++d) coeffs[d - 1] = coeffs[d] * static_cast<double>(d);
    coeffs.back() = 0.0;
  }
  return table;
}

CandidateLibrary weak_ode_library(const Trajectory& traj, const std::vector<Term>& terms, const WeakConfig& cfg) {
  check_config(cfg);
  const Index n = traj.samples();
  const int points = cfg.points_per_domain;
  if (points > n) {
    fail(ErrorCode::kDomainTooSmall, "weak form: " + std::to_string(points) + " points per domain exceed " +
                                         std::to_string(n) + " samples");
  }
  const int power = resolve_power(cfg, 1);
  const Matrix kernel = weighted_kernel(power, 1, points, traj.dt);
  const Matrix theta = evaluate_terms(terms, traj.states);

  CandidateLibrary lib;
  lib.terms = terms;
  lib.scales = Vector::Ones(static_cast<Index>(terms.size()));
  lib.theta.resize(cfg.num_domains, theta.cols());
  lib.targets.resize(cfg.num_domains, traj.dim());
  RngStream rng(cfg.seed);
  for (int k = 0; k < cfg.num_domains; ++k) {
    const auto start = static_cast<Index>(rng.below(static_cast<std::size_t>(n - points + 1)));
    lib.theta.row(k) = kernel.row(0) * theta.middleRows(start, points);
    lib.targets.row(k) = -kernel.row(1) * traj.states.middleRows(start, points);
  }
  for (const auto& name : default_variable_names(static_cast<std::size_t>(traj.dim()))) {
    lib.target_names.push_back(name + "_t");
  }
  return lib;
}

CandidateLibrary weak_pde_library(const Field& field, const std::vector<Term>& terms, const WeakConfig& cfg) {
  check_config(cfg);
  const int points = cfg.points_per_domain;
  const std::size_t axes = field.space.size();
  const Index nv = field.num_variables();
  require(axes >= 1, ErrorCode::kInvalidArgument, "weak_pde_library: field has no spatial axes");
  if (field.num_times() < points) {
    fail(ErrorCode::kDomainTooSmall, "weak form: time axis shorter than points_per_domain");
  }
  for (const auto& a : field.space) {
    if (a.count < points) fail(ErrorCode::kDomainTooSmall, "weak form: axis " + a.name + " shorter than points_per_domain");
  }

  // Integration by parts: kind of each column.
  enum class Kind { kPlain, kPureDerivative, kPowerFlux, kNumeric };
  struct Column {
    Kind kind;
    std::vector<int> orders;  // derivative orders carried by the test function, per spatial axis
    double factor = 1.0;
    std::vector<int> exponents;  // integrand monomial
    int data = -1;               // index into numeric derivative data
  };
  int max_order = 1;
  int max_exponent = 1;
  std::vector<Term> numeric_terms;
  std::vector<Column> columns;
  for (const auto& t : terms) {
    require(static_cast<Index>(t.exponents.size()) == nv, ErrorCode::kDimensionMismatch,
            "weak_pde_library: term '" + t.label + "' does not match the field variables");
    Column c;
    c.exponents = t.exponents;
    c.orders.assign(axes, 0);
    if (!t.derivative) {
      c.kind = Kind::kPlain;
    } else {
      const auto& d = *t.derivative;
      require(d.orders.size() == axes, ErrorCode::kDimensionMismatch, "weak_pde_library: derivative axes mismatch");
      for (int o : d.orders) max_order = std::max(max_order, o);
      const int total = d.total_order();
      const int degree = t.degree();
      const int own = t.exponents[d.variable];
      if (degree == 0) {
        c.kind = Kind::kPureDerivative;
        c.orders = d.orders;
        c.factor = (total % 2 == 0) ? 1.0 : -1.0;
        c.exponents[d.variable] = 1;
      } else if (total == 1 && own == degree) {
        // w^a w_x = (w^(a+1))_x / (a+1)
        c.kind = Kind::kPowerFlux;
        c.orders = d.orders;
        c.factor = -1.0 / (own + 1);
        c.exponents[d.variable] = own + 1;
      } else {
        c.kind = Kind::kNumeric;
        auto it = std::find_if(numeric_terms.begin(), numeric_terms.end(),
                               [&](const Term& n) { return *n.derivative == d; });
        c.data = static_cast<int>(it - numeric_terms.begin());
        if (it == numeric_terms.end()) numeric_terms.push_back(Term{std::vector<int>(static_cast<std::size_t>(nv), 0), d, ""});
      }
    }
    for (int e : c.exponents) max_exponent = std::max(max_exponent, e);
    columns.push_back(std::move(c));
  }
  const int power = resolve_power(cfg, max_order);
  const auto derivs = derivative_data(field, numeric_terms);

  // Per-axis kernels, spatial axes first then time.
  std::vector<Matrix> kernels;
  for (const auto& a : field.space) kernels.push_back(weighted_kernel(power, max_order, points, a.step));
  const Matrix time_kernel = weighted_kernel(power, 1, points, field.time.step);

  // Box enumeration: time outermost, then spatial axes row-major.
  Index box_space = 1;
  for (std::size_t a = 0; a < axes; ++a) box_space *= points;
  const Index box = box_space * points;

  // Tensor kernels for each distinct (spatial orders, time order) pair, shared by all domains.
  std::vector<std::pair<std::vector<int>, Vector>> tensor;
  auto kernel_for = [&](const std::vector<int>& orders, int time_order) -> const Vector& {
    std::vector<int> key = orders;
    key.push_back(time_order);
    for (const auto& [k, v] : tensor) {
      if (k == key) return v;
    }
    Vector w(box);
    std::vector<int> idx(axes, 0);
    for (Index s = 0; s < box_space; ++s) {
      double prod = 1.0;
      for (std::size_t a = 0; a < axes; ++a) prod *= kernels[a](orders[a], idx[a]);
      for (int t = 0; t < points; ++t) w[t * box_space + s] = prod * time_kernel(time_order, t);
      for (auto a = static_cast<std::ptrdiff_t>(axes) - 1; a >= 0; --a) {
        if (++idx[static_cast<std::size_t>(a)] < points) break;
        idx[static_cast<std::size_t>(a)] = 0;
      }
    }
    tensor.emplace_back(std::move(key), std::move(w));
    return tensor.back().second;
  };
  tensor.reserve(columns.size() + 1);
  std::vector<const Vector*> column_kernel(columns.size(), nullptr);
  for (std::size_t i = 0; i < columns.size(); ++i) kernel_for(columns[i].orders, 0);
  kernel_for(std::vector<int>(axes, 0), 1);
  for (std::size_t i = 0; i < columns.size(); ++i) column_kernel[i] = &kernel_for(columns[i].orders, 0);
  const Vector& target_kernel = kernel_for(std::vector<int>(axes, 0), 1);

  // Flat spatial index for each spatial box offset.
  std::vector<Index> axis_stride(axes, 1);
  for (auto a = static_cast<std::ptrdiff_t>(axes) - 2; a >= 0; --a) {
    const auto ua = static_cast<std::size_t>(a);
    axis_stride[ua] = axis_stride[ua + 1] * field.space[ua + 1].count;
  }
  std::vector<Index> offsets(static_cast<std::size_t>(box_space));
  {
    std::vector<int> idx(axes, 0);
    for (Index s = 0; s < box_space; ++s) {
      Index flat = 0;
      for (std::size_t a = 0; a < axes; ++a) flat += idx[a] * axis_stride[a];
      offsets[static_cast<std::size_t>(s)] = flat;
      for (auto a = static_cast<std::ptrdiff_t>(axes) - 1; a >= 0; --a) {
        if (++idx[static_cast<std::size_t>(a)] < points) break;
        idx[static_cast<std::size_t>(a)] = 0;
      }
    }
  }

  CandidateLibrary lib;
  lib.terms = terms;
  lib.scales = Vector::Ones(static_cast<Index>(terms.size()));
  lib.theta.resize(cfg.num_domains, static_cast<Index>(terms.size()));
  lib.targets.resize(cfg.num_domains, nv);
  for (const auto& v : field.variables) lib.target_names.push_back(v + "_t");

  RngStream rng(cfg.seed);
  std::vector<std::vector<Vector>> pow(static_cast<std::size_t>(nv));
  std::vector<Vector> local_derivs(derivs.size(), Vector(box));
  Vector integrand(box);
  for (int k = 0; k < cfg.num_domains; ++k) {
    Index corner = 0;
    for (std::size_t a = 0; a < axes; ++a) {
      corner += static_cast<Index>(rng.below(static_cast<std::size_t>(field.space[a].count - points + 1))) * axis_stride[a];
    }
    const auto t0 = static_cast<Index>(rng.below(static_cast<std::size_t>(field.num_times() - points + 1)));

    for (Index v = 0; v < nv; ++v) {
      auto& p = pow[static_cast<std::size_t>(v)];
      p.assign(static_cast<std::size_t>(max_exponent + 1), Vector::Ones(box));
      for (int t = 0; t < points; ++t) {
        for (Index s = 0; s < box_space; ++s) {
          p[1][t * box_space + s] = field.at(t0 + t, corner + offsets[static_cast<std::size_t>(s)], v);
        }
      }
      for (int e = 2; e <= max_exponent; ++e) p[static_cast<std::size_t>(e)] = p[static_cast<std::size_t>(e - 1)].cwiseProduct(p[1]);
    }
    for (std::size_t d = 0; d < derivs.size(); ++d) {
      const Matrix& data = derivs[d].second;
      for (int t = 0; t < points; ++t) {
        for (Index s = 0; s < box_space; ++s) {
          local_derivs[d][t * box_space + s] = data(t0 + t, corner + offsets[static_cast<std::size_t>(s)]);
        }
      }
    }

    for (std::size_t i = 0; i < columns.size(); ++i) {
      const Column& c = columns[i];
      integrand.setOnes();
      for (Index v = 0; v < nv; ++v) {
        const int e = c.exponents[static_cast<std::size_t>(v)];
        if (e > 0) integrand.array() *= pow[static_cast<std::size_t>(v)][static_cast<std::size_t>(e)].array();
      }
      if (c.kind == Kind::kNumeric) integrand.array() *= local_derivs[static_cast<std::size_t>(c.data)].array();
      lib.theta(k, static_cast<Index>(i)) = c.factor * column_kernel[i]->dot(integrand);
    }
    for (Index v = 0; v < nv; ++v) {
      lib.targets(k, v) = -target_kernel.dot(pow[static_cast<std::size_t>(v)][1]);
    }
  }
  return lib;
}

}  // namespace miosindy

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

#include "miosindy/systems.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include "miosindy/error.hpp"

namespace miosindy {

OdeSystem::OdeSystem(std::string name, std::vector<std::string> variables,
                     std::vector<std::pair<std::string, double>> parameters, Rhs rhs,
                     std::vector<SparsePolynomial> truth)
    : name_(std::move(name)),
      variables_(std::move(variables)),
      parameters_(std::move(parameters)),
      rhs_(std::move(rhs)),
      truth_(std::move(truth)) {
  require(truth_.size() == variables_.size(), ErrorCode::kInvalidArgument,
          "OdeSystem " + name_ + ": one true polynomial per state variable required");
  for (const auto& poly : truth_) {
    for (const auto& m : poly) {
      require(m.exponents.size() == variables_.size(), ErrorCode::kInvalidArgument,
              "OdeSystem " + name_ + ": monomial exponent length mismatch");
    }
  }
}

double OdeSystem::parameter(std::string_view key) const {
  for (const auto& [k, v] : parameters_) {
    if (k == key) return v;
  }
  fail(ErrorCode::kInvalidArgument, "OdeSystem " + name_ + " has no parameter " + std::string(key));
}

Vector OdeSystem::rhs(const Vector& x) const {
  Vector dx(x.size());
  rhs_(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
       std::span<double>(dx.data(), static_cast<std::size_t>(dx.size())));
  return dx;
}

int OdeSystem::truth_degree() const {
  int deg = 0;
  for (const auto& poly : truth_) {
    for (const auto& m : poly) {
      int d = 0;
      for (int e : m.exponents) d += e;
      deg = std::max(deg, d);
    }
  }
  return deg;
}

Matrix OdeSystem::true_coefficients(const std::vector<Term>& terms,
                                    const std::vector<std::size_t>& library_vars,
                                    const std::vector<std::size_t>& target_vars) const {
  std::vector<std::size_t> lib = library_vars;
  if (lib.empty()) {
    for (std::size_t j = 0; j < dim(); ++j) lib.push_back(j);
  }
  std::vector<std::size_t> targets = target_vars;
  if (targets.empty()) {
    for (std::size_t j = 0; j < dim(); ++j) targets.push_back(j);
  }
  Matrix xi = Matrix::Zero(static_cast<Index>(terms.size()), static_cast<Index>(targets.size()));
  for (std::size_t col = 0; col < targets.size(); ++col) {
    require(targets[col] < dim(), ErrorCode::kInvalidArgument, "target variable out of range");
    for (const auto& m : truth_[targets[col]]) {
      std::vector<int> projected(lib.size(), 0);
      int covered = 0;
      for (std::size_t j = 0; j < lib.size(); ++j) {
        projected[j] = m.exponents[lib[j]];
        covered += projected[j];
      }
      int total = 0;
      for (int e : m.exponents) total += e;
      require(covered == total, ErrorCode::kInvalidArgument,
              name_ + ": true term depends on a variable outside the library");
      bool found = false;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        if (!terms[t].derivative && terms[t].exponents == projected) {
          xi(static_cast<Index>(t), static_cast<Index>(col)) += m.coefficient;
          found = true;
          break;
        }
      }
      require(found, ErrorCode::kInvalidArgument,
              name_ + ": library lacks true term " + monomial_label(m.exponents, variables_));
    }
  }
  return xi;
}

namespace {

Monomial mono(double c, std::vector<int> e) { return Monomial{std::move(e), c}; }

std::map<std::string, std::unique_ptr<OdeSystem>, std::less<>> build_registry() {
  std::map<std::string, std::unique_ptr<OdeSystem>, std::less<>> reg;

  {
    const double sigma = 10.0, beta = 8.0 / 3.0, rho = 28.0;
    reg["lorenz"] = std::make_unique<OdeSystem>(
        "lorenz", std::vector<std::string>{"x", "y", "z"},
        std::vector<std::pair<std::string, double>>{{"sigma", sigma}, {"beta", beta}, {"rho", rho}},
        [=](std::span<const double> s, std::span<double> d) {
          d[0] = sigma * (s[1] - s[0]);
          d[1] = s[0] * (rho - s[2]) - s[1];
          d[2] = s[0] * s[1] - beta * s[2];
        },
        std::vector<SparsePolynomial>{
            {mono(-sigma, {1, 0, 0}), mono(sigma, {0, 1, 0})},
            {mono(rho, {1, 0, 0}), mono(-1.0, {0, 1, 0}), mono(-1.0, {1, 0, 1})},
            {mono(1.0, {1, 1, 0}), mono(-beta, {0, 0, 1})}});
  }
  {
    const double mu = -0.05, omega = 1.0, amp = 1.0;
    reg["hopf"] = std::make_unique<OdeSystem>(
        "hopf", std::vector<std::string>{"x", "y"},
        std::vector<std::pair<std::string, double>>{{"mu", mu}, {"omega", omega}, {"A", amp}},
        [=](std::span<const double> s, std::span<double> d) {
          const double r2 = s[0] * s[0] + s[1] * s[1];
          d[0] = mu * s[0] + omega * s[1] - amp * s[0] * r2;
          d[1] = -omega * s[0] + mu * s[1] - amp * s[1] * r2;
        },
        std::vector<SparsePolynomial>{
            {mono(mu, {1, 0}), mono(omega, {0, 1}), mono(-amp, {3, 0}), mono(-amp, {1, 2})},
            {mono(-omega, {1, 0}), mono(mu, {0, 1}), mono(-amp, {2, 1}), mono(-amp, {0, 3})}});
  }
  {
    // State order (V1, V2, V3, B1, B2, B3), ideal (inviscid, non-resistive) triad.
    reg["mhd"] = std::make_unique<OdeSystem>(
        "mhd", std::vector<std::string>{"V1", "V2", "V3", "B1", "B2", "B3"},
        std::vector<std::pair<std::string, double>>{{"nu", 0.0}, {"mu", 0.0}},
        [](std::span<const double> s, std::span<double> d) {
          const double v1 = s[0], v2 = s[1], v3 = s[2], b1 = s[3], b2 = s[4], b3 = s[5];
          d[0] = 4.0 * (v2 * v3 - b2 * b3);
          d[1] = -7.0 * (v1 * v3 - b1 * b3);
          d[2] = 3.0 * (v1 * v2 - b1 * b2);
          d[3] = 2.0 * (b3 * v2 - v3 * b2);
          d[4] = 5.0 * (v3 * b1 - b3 * v1);
          d[5] = 9.0 * (v1 * b2 - b1 * v2);
        },
        std::vector<SparsePolynomial>{
            {mono(4, {0, 1, 1, 0, 0, 0}), mono(-4, {0, 0, 0, 0, 1, 1})},
            {mono(-7, {1, 0, 1, 0, 0, 0}), mono(7, {0, 0, 0, 1, 0, 1})},
            {mono(3, {1, 1, 0, 0, 0, 0}), mono(-3, {0, 0, 0, 1, 1, 0})},
            {mono(2, {0, 1, 0, 0, 0, 1}), mono(-2, {0, 0, 1, 0, 1, 0})},
            {mono(5, {0, 0, 1, 1, 0, 0}), mono(-5, {1, 0, 0, 0, 0, 1})},
            {mono(9, {1, 0, 0, 0, 1, 0}), mono(-9, {0, 1, 0, 1, 0, 0})}});
  }
  {
    // Hamiltonian Duffing: positions (x, y), momenta (X, Y), potential
    // V = -(omega/2)(x^2 + y^2) + (alpha/4)(x^2 + y^2)^2.
    const double omega = -2.0, alpha = 0.1;
    reg["duffing"] = std::make_unique<OdeSystem>(
        "duffing", std::vector<std::string>{"x", "y", "X", "Y"},
        std::vector<std::pair<std::string, double>>{{"omega", omega}, {"alpha", alpha}},
        [=](std::span<const double> s, std::span<double> d) {
          const double r2 = s[0] * s[0] + s[1] * s[1];
          d[0] = s[2];
          d[1] = s[3];
          d[2] = omega * s[0] - alpha * s[0] * r2;
          d[3] = omega * s[1] - alpha * s[1] * r2;
        },
        std::vector<SparsePolynomial>{
            {mono(1.0, {0, 0, 1, 0})},
            {mono(1.0, {0, 0, 0, 1})},
            {mono(omega, {1, 0, 0, 0}), mono(-alpha, {3, 0, 0, 0}), mono(-alpha, {1, 2, 0, 0})},
            {mono(omega, {0, 1, 0, 0}), mono(-alpha, {0, 3, 0, 0}), mono(-alpha, {2, 1, 0, 0})}});
  }
  {
    const double mu = 3.0;
    reg["vanderpol"] = std::make_unique<OdeSystem>(
        "vanderpol", std::vector<std::string>{"x", "y"},
        std::vector<std::pair<std::string, double>>{{"mu", mu}},
        [=](std::span<const double> s, std::span<double> d) {
          d[0] = s[1];
          d[1] = mu * (1.0 - s[0] * s[0]) * s[1] - s[0];
        },
        std::vector<SparsePolynomial>{
            {mono(1.0, {0, 1})},
            {mono(-1.0, {1, 0}), mono(mu, {0, 1}), mono(-mu, {2, 1})}});
  }
  {
    const double p1 = 1.0, p2 = 10.0;
    reg["lotka"] = std::make_unique<OdeSystem>(
        "lotka", std::vector<std::string>{"x", "y"},
        std::vector<std::pair<std::string, double>>{{"p1", p1}, {"p2", p2}},
        [=](std::span<const double> s, std::span<double> d) {
          d[0] = p1 * s[0] - p2 * s[0] * s[1];
          d[1] = p2 * s[0] * s[1] - 2.0 * p1 * s[1];
        },
        std::vector<SparsePolynomial>{
            {mono(p1, {1, 0}), mono(-p2, {1, 1})},
            {mono(p2, {1, 1}), mono(-2.0 * p1, {0, 1})}});
  }
  {
    const double a = 0.2, b = 0.2, c = 5.7;
    reg["rossler"] = std::make_unique<OdeSystem>(
        "rossler", std::vector<std::string>{"x", "y", "z"},
        std::vector<std::pair<std::string, double>>{{"a", a}, {"b", b}, {"c", c}},
        [=](std::span<const double> s, std::span<double> d) {
          d[0] = -s[1] - s[2];
          d[1] = s[0] + a * s[1];
          d[2] = b - c * s[2] + s[0] * s[2];
        },
        std::vector<SparsePolynomial>{
            {mono(-1.0, {0, 1, 0}), mono(-1.0, {0, 0, 1})},
            {mono(1.0, {1, 0, 0}), mono(a, {0, 1, 0})},
            {mono(b, {0, 0, 0}), mono(-c, {0, 0, 1}), mono(1.0, {1, 0, 1})}});
  }
  return reg;
}

const auto& registry() {
  static const auto reg = build_registry();
  return reg;
}

// Post-transient Rossler attractor samples used for initial conditions.
const Trajectory& rossler_reference() {
  static const Trajectory ref = [] {
    const Trajectory full = rk4_integrate(find_system("rossler"), Vector{{5.0, 3.0, 0.0}}, 100.0, 0.002);
    const Index skip = static_cast<Index>(std::llround(10.0 / 0.002));
    return full.slice(skip, full.samples());
  }();
  return ref;
}

}  // namespace

const OdeSystem& find_system(std::string_view name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) fail(ErrorCode::kUnknownSystem, "unknown system '" + std::string(name) + "'");
  return *it->second;
}

std::vector<std::string> ode_system_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

Trajectory rk4_integrate(const OdeSystem& system, const Vector& x0, double t_end, double dt) {
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::kInvalidArgument, "rk4_integrate: dt must be positive");
  require(t_end >= dt, ErrorCode::kInvalidArgument, "rk4_integrate: t_end must be at least dt");
  require(static_cast<std::size_t>(x0.size()) == system.dim(), ErrorCode::kDimensionMismatch,
          "rk4_integrate: initial condition dimension mismatch");

  const Index steps = static_cast<Index>(std::llround(t_end / dt));
  const Index d = x0.size();
  Matrix states(steps + 1, d);
  Vector x = x0, k1(d), k2(d), k3(d), k4(d), tmp(d);
  auto eval = [&](const Vector& in, Vector& out) {
    system.rhs(std::span<const double>(in.data(), static_cast<std::size_t>(d)),
               std::span<double>(out.data(), static_cast<std::size_t>(d)));
  };
  states.row(0) = x.transpose();
  for (Index i = 1; i <= steps; ++i) {
    eval(x, k1);
    tmp = x + 0.5 * dt * k1;
    eval(tmp, k2);
    tmp = x + 0.5 * dt * k2;
    eval(tmp, k3);
    tmp = x + dt * k3;
    eval(tmp, k4);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e6) {
      fail(ErrorCode::kDiverged, system.name() + " diverged at t = " + std::to_string(i * dt));
    }
    states.row(i) = x.transpose();
  }
  return make_trajectory(std::move(states), dt);
}

Vector sample_initial_condition(const OdeSystem& system, RngStream& rng) {
  const std::string& name = system.name();
  if (name == "lorenz") {
    return Vector{{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(10.0, 40.0)}};
  }
  if (name == "hopf") {
    const double radius = rng.uniform(0.75, 1.25);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return Vector{{radius * std::cos(angle), radius * std::sin(angle)}};
  }
  if (name == "mhd") {
    Vector x(6);
    for (Index j = 0; j < 6; ++j) x[j] = rng.uniform(-1.5, 1.5);
    return x;
  }
  if (name == "duffing") {
    Vector x(4);
    for (Index j = 0; j < 4; ++j) x[j] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    return x;
  }
  if (name == "vanderpol") {
    const double mu = system.parameter("mu");
    return Vector{{rng.uniform(-1.0, 1.0), rng.uniform(-mu, mu)}};
  }
  if (name == "lotka") {
    return Vector{{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)}};
  }
  if (name == "rossler") {
    const Trajectory& ref = rossler_reference();
    const double scale = 0.1 * ref.states.norm() / std::sqrt(static_cast<double>(ref.states.size()));
    Vector x = ref.states.row(static_cast<Index>(rng.below(static_cast<std::size_t>(ref.samples())))).transpose();
    for (Index j = 0; j < x.size(); ++j) x[j] += rng.normal(0.0, scale);
    x[2] = std::abs(x[2]);
    return x;
  }
  fail(ErrorCode::kUnknownSystem, "no initial-condition sampler for '" + name + "'");
}

Trajectory add_noise(const Trajectory& traj, double percent, RngStream& rng) {
  require(percent >= 0.0 && std::isfinite(percent), ErrorCode::kInvalidArgument,
          "add_noise: percent must be nonnegative");
  Trajectory out = traj;
  if (percent == 0.0 || traj.states.size() == 0) return out;
  const double scale = (percent / 100.0) * traj.states.norm() /
                       std::sqrt(static_cast<double>(traj.states.size()));
  for (Index i = 0; i < out.states.rows(); ++i) {
    for (Index j = 0; j < out.states.cols(); ++j) out.states(i, j) += rng.normal(0.0, scale);
  }
  return out;
}

}  // namespace miosindy

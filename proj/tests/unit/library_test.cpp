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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "miosindy/differentiation.hpp"
#include "miosindy/error.hpp"
#include "miosindy/field.hpp"
#include "miosindy/library.hpp"
#include "miosindy/rng.hpp"
#include "miosindy/systems.hpp"
#include "miosindy/weak_form.hpp"

namespace miosindy {
namespace {

std::vector<std::string> labels_of(const std::vector<Term>& terms) {
  std::vector<std::string> out;
  for (const Term& t : terms) out.push_back(t.label);
  return out;
}

Trajectory sine_trajectory(Index n, double dt) {
  Matrix states(n, 1);
  for (Index i = 0; i < n; ++i) states(i, 0) = std::sin(static_cast<double>(i) * dt);
  return make_trajectory(std::move(states), dt);
}

TEST(PolynomialTerms, BenchmarkSizes) {
  EXPECT_EQ(polynomial_terms(3, 5, true).size(), 56u);
  EXPECT_EQ(polynomial_terms(2, 5, true).size(), 21u);
  EXPECT_EQ(polynomial_terms(6, 3, true).size(), 84u);
  EXPECT_EQ(polynomial_terms(3, 5, false).size(), 55u);
}

TEST(PolynomialTerms, GradedOrder) {
  EXPECT_EQ(labels_of(polynomial_terms(3, 2, true, {"x", "y", "z"})),
            (std::vector<std::string>{"1", "x", "y", "z", "x^2", "x y", "x z", "y^2", "y z", "z^2"}));
  for (const Term& t : polynomial_terms(4, 3, true)) EXPECT_LE(t.degree(), 3);
}

TEST(PolynomialTerms, Deterministic) {
  EXPECT_EQ(polynomial_terms(3, 4, true), polynomial_terms(3, 4, true));
}

TEST(PolynomialLibrary, SingleVariableRow) {
  const Trajectory traj = make_trajectory(Matrix::Constant(1, 1, 2.0), 0.1);
  const CandidateLibrary lib = polynomial_library(traj, 2, true);
  ASSERT_EQ(lib.size(), 3);
  EXPECT_EQ(lib.theta(0, 0), 1.0);
  EXPECT_EQ(lib.theta(0, 1), 2.0);
  EXPECT_EQ(lib.theta(0, 2), 4.0);
  EXPECT_EQ(lib.targets.cols(), 0);
}

TEST(PolynomialLibrary, TruthMatchesRhsOnTrajectories) {
  for (const std::string& name : ode_system_names()) {
    const OdeSystem& sys = find_system(name);
    RngStream rng(41);
    const Trajectory traj = rk4_integrate(sys, sample_initial_condition(sys, rng), 1.0, 0.01);
    const CandidateLibrary lib = polynomial_library(traj, std::max(2, sys.truth_degree()), true);
    const Matrix predicted = lib.theta * sys.true_coefficients(lib.terms);
    for (Index i = 0; i < traj.samples(); ++i) {
      const Vector dx = sys.rhs(Vector(traj.states.row(i).transpose()));
      EXPECT_LE((predicted.row(i).transpose() - dx).cwiseAbs().maxCoeff(), 1e-8) << name;
    }
  }
}

TEST(PdeTerms, BenchmarkSizes) {
  EXPECT_EQ(pde_terms({"u"}, {"x"}, 3, 4).size(), 19u);
  EXPECT_EQ(pde_terms({"u", "v"}, {"x", "y"}, 3, 2).size(), 109u);
}

TEST(PdeTerms, RespectsDegreeAndOrder) {
  for (const Term& t : pde_terms({"u", "v"}, {"x", "y"}, 3, 2)) {
    int poly = 0;
    for (int e : t.exponents) poly += e;
    EXPECT_LE(poly, 3);
    if (t.derivative) EXPECT_LE(t.derivative->total_order(), 2);
    EXPECT_FALSE(t.is_constant());
  }
}

TEST(PdeLibrary, ConstantFieldHasZeroDerivativeColumns) {
  Field field = make_field(Axis{"t", 0.0, 0.1, 6}, {Axis{"x", 0.0, 0.5, 16, true}}, {"u"});
  for (double& v : field.values) v = 0.7;
  const CandidateLibrary lib = pde_library(field, 3, 4);
  ASSERT_EQ(lib.size(), 19);
  for (Index j = 0; j < lib.size(); ++j) {
    const double norm = lib.theta.col(j).cwiseAbs().maxCoeff();
    if (lib.terms[static_cast<std::size_t>(j)].derivative) {
      EXPECT_LE(norm, 1e-12) << lib.terms[static_cast<std::size_t>(j)].label;
    } else {
      EXPECT_GT(norm, 0.1);
    }
  }
  EXPECT_LE(lib.targets.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Normalize, ThreeFourFive) {
  CandidateLibrary lib;
  lib.terms = polynomial_terms(1, 1, false);
  lib.theta = Matrix(2, 1);
  lib.theta << 3.0, 4.0;
  lib.targets = Matrix::Zero(2, 1);
  const CandidateLibrary norm = normalize_columns(lib);
  EXPECT_DOUBLE_EQ(norm.theta(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(norm.theta(1, 0), 0.8);
  EXPECT_DOUBLE_EQ(norm.scales[0], 5.0);
}

TEST(Normalize, UnitColumnsKeepUnitScales) {
  CandidateLibrary lib;
  lib.terms = polynomial_terms(2, 1, false);
  lib.theta = Matrix::Identity(3, 2);
  lib.targets = Matrix::Zero(3, 1);
  const CandidateLibrary norm = normalize_columns(lib);
  EXPECT_DOUBLE_EQ(norm.scales[0], 1.0);
  EXPECT_DOUBLE_EQ(norm.scales[1], 1.0);
}

TEST(Normalize, DenormalizedResidualMatches) {
  RngStream rng(42);
  const Trajectory traj = rk4_integrate(find_system("lorenz"), Vector{{1.0, 2.0, 20.0}}, 2.0, 0.01);
  const CandidateLibrary lib =
      polynomial_library(traj, 3, true, Differentiator{DiffMethod::kCentered, 3});
  const CandidateLibrary norm = normalize_columns(lib);
  for (Index j = 0; j < norm.size(); ++j) EXPECT_NEAR(norm.theta.col(j).norm(), 1.0, 1e-10);
  Matrix xi(norm.size(), 3);
  for (Index i = 0; i < xi.rows(); ++i)
    for (Index j = 0; j < 3; ++j) xi(i, j) = rng.normal();
  const Matrix residual_norm = norm.targets - norm.theta * xi;
  const Matrix residual_orig = lib.targets - lib.theta * denormalize(norm, xi);
  EXPECT_LE((residual_norm - residual_orig).cwiseAbs().maxCoeff(),
            1e-10 * (1.0 + residual_orig.cwiseAbs().maxCoeff()));
}

TEST(Normalize, ZeroColumnThrows) {
  CandidateLibrary lib;
  lib.terms = polynomial_terms(2, 1, false);
  lib.theta = Matrix::Zero(3, 2);
  lib.theta(0, 0) = 1.0;
  lib.targets = Matrix::Zero(3, 1);
  try {
    normalize_columns(lib);
    FAIL() << "expected ZeroColumn";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroColumn);
  }
}

TEST(LibraryCsv, HeaderHasLabels) {
  const Trajectory traj = make_trajectory(Matrix::Ones(3, 2), 0.1);
  std::ostringstream out;
  write_library_csv(polynomial_library(traj, 1, true), out);
  EXPECT_NE(out.str().find("x0"), std::string::npos);
  EXPECT_NE(out.str().find("x1"), std::string::npos);
}

TEST(TestFunctions, VanishAtEnds) {
  const Matrix table = test_function_table(4, 3, 51);
  for (Index r = 0; r <= 3; ++r) {
    EXPECT_NEAR(table(r, 0), 0.0, 1e-12);
    EXPECT_NEAR(table(r, 50), 0.0, 1e-12);
  }
  EXPECT_NEAR(table(0, 25), 1.0, 1e-12);
}

TEST(WeakOde, ConstantTrajectoryHasZeroTarget) {
  const Trajectory traj = make_trajectory(Matrix::Constant(500, 1, 3.0), 0.01);
  const auto terms = polynomial_terms(1, 1, true);
  const CandidateLibrary lib = weak_ode_library(traj, terms, WeakConfig{20, 50, 0, 1});
  EXPECT_LE(lib.targets.cwiseAbs().maxCoeff(), 1e-12);
}

double bias_identity_gap(int points) {
  Matrix states(2000, 1);
  for (Index i = 0; i < 2000; ++i) states(i, 0) = 0.01 * static_cast<double>(i);
  const Trajectory traj = make_trajectory(std::move(states), 0.01);
  const std::vector<Term> bias{polynomial_terms(1, 1, true).front()};
  const CandidateLibrary lib = weak_ode_library(traj, bias, WeakConfig{30, points, 0, 2});
  return ((lib.targets.col(0) - lib.theta.col(0)).array() / lib.theta.col(0).array()).abs().maxCoeff();
}

// -integral(phi' t) = integral(phi), so coefficient 1 on the bias solves x = t up to quadrature error.
TEST(WeakOde, LinearTrajectorySolvedByBias) {
  const double coarse = bias_identity_gap(101);
  const double fine = bias_identity_gap(401);
  EXPECT_LE(coarse, 1e-6);
  EXPECT_LE(fine, coarse / 8.0);
}

TEST(WeakOde, SameSeedSameLibrary) {
  const Trajectory traj = rk4_integrate(find_system("vanderpol"), Vector{{0.5, 1.0}}, 10.0, 0.01);
  const auto terms = polynomial_terms(2, 3, true);
  const CandidateLibrary a = weak_ode_library(traj, terms, WeakConfig{40, 60, 0, 77});
  const CandidateLibrary b = weak_ode_library(traj, terms, WeakConfig{40, 60, 0, 77});
  const CandidateLibrary c = weak_ode_library(traj, terms, WeakConfig{40, 60, 0, 78});
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.targets, b.targets);
  EXPECT_NE(a.theta, c.theta);
}

TEST(WeakOde, TruthSolvesCleanData) {
  const OdeSystem& sys = find_system("vanderpol");
  const Trajectory traj = rk4_integrate(sys, Vector{{0.5, 1.0}}, 20.0, 0.002);
  const auto terms = polynomial_terms(2, 3, true);
  const CandidateLibrary lib = weak_ode_library(traj, terms, WeakConfig{100, 200, 0, 5});
  const Matrix residual = lib.targets - lib.theta * sys.true_coefficients(terms);
  EXPECT_LE(residual.norm() / lib.targets.norm(), 1e-6);
}

TEST(WeakOde, DomainTooSmall) {
  const Trajectory traj = make_trajectory(Matrix::Ones(30, 1), 0.1);
  try {
    weak_ode_library(traj, polynomial_terms(1, 1, true), WeakConfig{5, 50, 0, 0});
    FAIL() << "expected DomainTooSmall";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomainTooSmall);
  }
}

TEST(WeakOde, MoreRobustToNoiseThanSmoothedDerivative) {
  const double dt = 0.01;
  const Trajectory clean = sine_trajectory(2000, dt);
  const auto terms = polynomial_terms(1, 1, true);
  const WeakConfig cfg{100, 101, 0, 9};
  const Matrix clean_target = weak_ode_library(clean, terms, cfg).targets;
  Matrix cosine(clean.samples(), 1);
  for (Index i = 0; i < cosine.rows(); ++i) cosine(i, 0) = std::cos(static_cast<double>(i) * dt);
  double weak_error = 0.0;
  double strong_error = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed);
    const Trajectory noisy = add_noise(clean, 10.0, rng);
    weak_error += (weak_ode_library(noisy, terms, cfg).targets - clean_target).norm() / clean_target.norm();
    strong_error += (differentiate(noisy, Differentiator{DiffMethod::kSmoothed, 9}) - cosine).norm() / cosine.norm();
  }
  EXPECT_LT(weak_error, strong_error);
}

TEST(WeakPde, KsTruthSolvesCleanData) {
  Field field = make_field(Axis{"t", 0.0, 0.01, 200},
                           {Axis{"x", 0.0, 2.0 * 3.14159265358979323846 / 64.0, 64, true}}, {"u"});
  // u = exp(-t) sin(x) solves u_t = u_xx.
  for (Index t = 0; t < 200; ++t) {
    for (Index i = 0; i < 64; ++i) {
      field.at(t, i, 0) = std::exp(-field.time.coordinate(t)) * std::sin(field.space[0].coordinate(i));
    }
  }
  const auto terms = pde_terms({"u"}, {"x"}, 3, 4);
  const CandidateLibrary lib = weak_pde_library(field, terms, WeakConfig{30, 40, 0, 3});
  Vector xi = Vector::Zero(lib.size());
  for (Index j = 0; j < lib.size(); ++j) {
    if (lib.terms[static_cast<std::size_t>(j)].label == "u_xx") xi[j] = 1.0;
  }
  ASSERT_EQ(xi.sum(), 1.0);
  EXPECT_LE((lib.targets.col(0) - lib.theta * xi).norm() / lib.targets.norm(), 1e-4);
}

}  // namespace
}  // namespace miosindy

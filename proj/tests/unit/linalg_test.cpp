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

#include <vector>

#include "miosindy/error.hpp"
#include "miosindy/box_qp.hpp"
#include "miosindy/linalg.hpp"
#include "miosindy/rng.hpp"
#include "oracles.hpp"

namespace miosindy {
namespace {

Matrix random_spd(Index n, RngStream& rng) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = rng.normal();
  return m.transpose() * m + 0.1 * Matrix::Identity(n, n);
}

Vector random_vector(Index n, RngStream& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

TEST(RidgeSolve, IdentityHalvesTarget) {
  const Vector x = ridge_solve(Matrix::Identity(2, 2), Vector{{4.0, 6.0}}, 1.0);
  EXPECT_NEAR(x[0], 2.0, 1e-14);
  EXPECT_NEAR(x[1], 3.0, 1e-14);
}

TEST(RidgeSolve, IdentityWithoutRegularization) {
  const Vector x = ridge_solve(Matrix::Identity(3, 3), Vector{{1.0, 2.0, 3.0}}, 0.0);
  EXPECT_NEAR((x - Vector{{1.0, 2.0, 3.0}}).norm(), 0.0, 1e-14);
}

TEST(RidgeSolve, MatchesGaussianElimination) {
  RngStream rng(101);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix g = random_spd(6, rng);
    const Vector c = random_vector(6, rng);
    const Vector x = ridge_solve(g, c, 0.01);
    const auto ref = oracle::gaussian_solve(g + 0.01 * Matrix::Identity(6, 6), c);
    ASSERT_TRUE(ref.has_value());
    EXPECT_LE((x - *ref).norm(), 1e-8);
  }
}

TEST(RidgeSolve, ReturnsStationaryPoint) {
  RngStream rng(102);
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 1 + static_cast<Index>(rng.below(8));
    const Matrix g = random_spd(n, rng);
    const Vector c = random_vector(n, rng);
    const double lambda = rng.uniform(0.0, 1.0);
    const Vector x = ridge_solve(g, c, lambda);
    const Vector grad = 2.0 * (g + lambda * Matrix::Identity(n, n)) * x - 2.0 * c;
    EXPECT_LE(grad.norm(), 1e-7 * (1.0 + c.norm()));
  }
}

TEST(RidgeSolve, SingularWithoutRegularizationThrows) {
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 1.0;
  try {
    ridge_solve(g, Vector::Ones(2), 0.0);
    FAIL() << "expected SingularSystem";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularSystem);
  }
}

TEST(RidgeSolve, DimensionMismatchThrows) {
  try {
    ridge_solve(Matrix::Identity(3, 3), Vector::Ones(2), 0.0);
    FAIL() << "expected DimensionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(ConstrainedRidge, SymmetricProjection) {
  const Vector x = constrained_ridge_solve(Matrix::Identity(2, 2), Vector::Zero(2), 0.0,
                                           Matrix::Ones(1, 2), Vector::Constant(1, 2.0));
  EXPECT_NEAR(x[0], 1.0, 1e-12);
  EXPECT_NEAR(x[1], 1.0, 1e-12);
}

TEST(ConstrainedRidge, NoRowsReducesToRidge) {
  RngStream rng(103);
  const Matrix g = random_spd(5, rng);
  const Vector c = random_vector(5, rng);
  const Vector x = constrained_ridge_solve(g, c, 0.1, Matrix(0, 5), Vector(0));
  EXPECT_LE((x - ridge_solve(g, c, 0.1)).norm(), 1e-12);
}

TEST(ConstrainedRidge, MatchesMultiplierSearch) {
  RngStream rng(104);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix g = random_spd(5, rng);
    const Vector c = random_vector(5, rng);
    const Vector a = random_vector(5, rng);
    const double b = rng.normal();
    const Vector x = constrained_ridge_solve(g, c, 0.05, a.transpose(), Vector::Constant(1, b));
    const Vector ref = oracle::multiplier_search(g, c, 0.05, a, b);
    EXPECT_LE((x - ref).norm(), 1e-7 * (1.0 + ref.norm()));
    EXPECT_LE(std::abs(a.dot(x) - b), 1e-8 * (1.0 + std::abs(b)));
  }
}

TEST(ConstrainedRidge, BeatsEveryFeasiblePoint) {
  RngStream rng(105);
  const Index n = 6;
  const Matrix g = random_spd(n, rng);
  const Vector c = random_vector(n, rng);
  Matrix a(2, n);
  for (Index i = 0; i < 2; ++i) a.row(i) = random_vector(n, rng).transpose();
  const Vector b = random_vector(2, rng);
  const double lambda = 0.1;
  const Vector x = constrained_ridge_solve(g, c, lambda, a, b);
  const double best = ridge_objective(g, c, lambda, x);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  const Vector particular = cod.solve(b);
  const Matrix null = Eigen::FullPivLU<Matrix>(a).kernel();
  for (int rep = 0; rep < 100; ++rep) {
    const Vector feasible = particular + null * random_vector(null.cols(), rng);
    ASSERT_LE((a * feasible - b).norm(), 1e-9);
    EXPECT_LE(best, ridge_objective(g, c, lambda, feasible) + 1e-8);
  }
}

TEST(ConstrainedRidge, InconsistentRowsThrow) {
  Matrix a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  try {
    constrained_ridge_solve(Matrix::Identity(2, 2), Vector::Zero(2), 0.0, a, Vector{{1.0, 2.0}});
    FAIL() << "expected InfeasibleConstraints";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleConstraints);
  }
}

TEST(Qp, BoxSolutionRespectsBounds) {
  RngStream rng(106);
  for (int rep = 0; rep < 30; ++rep) {
    const Index n = 4;
    const Matrix h = random_spd(n, rng);
    const Vector c = 3.0 * random_vector(n, rng);
    const Vector lower = -Vector::Constant(n, 0.5);
    const Vector upper = Vector::Constant(n, 0.5);
    const qp::Result r = qp::minimize_box(h, c, lower, upper);
    ASSERT_EQ(r.outcome, qp::Outcome::kSolved);
    EXPECT_TRUE((r.x.array() >= lower.array() - 1e-12).all());
    EXPECT_TRUE((r.x.array() <= upper.array() + 1e-12).all());
    for (int probe = 0; probe < 20; ++probe) {
      Vector y(n);
      for (Index i = 0; i < n; ++i) y[i] = rng.uniform(-0.5, 0.5);
      EXPECT_LE(r.objective, y.dot(h * y) - 2.0 * c.dot(y) + 1e-9);
    }
  }
}

TEST(Rng, FixedSeedRepeats) {
  RngStream a(42);
  RngStream b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  RngStream c(42);
  RngStream d(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(Rng, SubstreamsAreStableAndDistinct) {
  const RngStream base(7);
  RngStream s1 = base.substream(3);
  RngStream s2 = base.substream(3);
  RngStream s3 = base.substream(4);
  const auto v1 = s1.next_u64();
  EXPECT_EQ(v1, s2.next_u64());
  EXPECT_NE(v1, s3.next_u64());
}

TEST(Rng, UniformAndNormalMoments) {
  RngStream rng(9);
  const int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 5e-3);
  EXPECT_NEAR(sn / n, 0.0, 1e-2);
  EXPECT_NEAR(sn2 / n, 1.0, 1e-2);
}

TEST(Rng, BelowStaysInRange) {
  RngStream rng(10);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) {
    const std::size_t v = rng.below(5);
    ASSERT_LT(v, 5u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

}  // namespace
}  // namespace miosindy

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

#include "miosindy/differentiation.hpp"
#include "miosindy/error.hpp"
#include "miosindy/rng.hpp"
#include "miosindy/trajectory.hpp"

namespace miosindy {
namespace {

Trajectory sampled(Index n, double dt, const std::function<double(double)>& f) {
  Matrix states(n, 1);
  for (Index i = 0; i < n; ++i) states(i, 0) = f(static_cast<double>(i) * dt);
  return make_trajectory(std::move(states), dt);
}

Matrix white_noise(Index n, Index d, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix m(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = rng.normal();
  return m;
}

const DiffMethod kAllMethods[] = {DiffMethod::kCentered, DiffMethod::kSmoothed,
                                  DiffMethod::kSavitzkyGolay};

TEST(Differentiate, LinearHasUnitSlope) {
  const Trajectory traj = sampled(200, 0.01, [](double t) { return t; });
  for (DiffMethod method : kAllMethods) {
    for (int window : {5, 9, 21}) {
      const Matrix d = differentiate(traj, Differentiator{method, window});
      for (Index i = 1; i + 1 < d.rows(); ++i) EXPECT_NEAR(d(i, 0), 1.0, 1e-10);
    }
  }
}

TEST(Differentiate, ConstantHasZeroSlope) {
  const Trajectory traj = sampled(50, 0.1, [](double) { return 4.2; });
  for (DiffMethod method : kAllMethods) {
    const Matrix d = differentiate(traj, Differentiator{method, 9});
    EXPECT_LE(d.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Differentiate, SineWithSmoothing) {
  const double dt = 0.002;
  const Trajectory traj = sampled(5000, dt, [](double t) { return std::sin(t); });
  const Matrix d = differentiate(traj, Differentiator{DiffMethod::kSmoothed, 9});
  // Rows whose smoothing window (and its centered-difference neighbours) is untruncated.
  double worst = 0.0;
  for (Index i = 5; i + 5 < d.rows(); ++i) {
    worst = std::max(worst, std::abs(d(i, 0) - std::cos(static_cast<double>(i) * dt)));
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(Differentiate, Linear) {
  const Matrix x = white_noise(300, 2, 31);
  const Matrix y = white_noise(300, 2, 32);
  for (DiffMethod method : kAllMethods) {
    const Differentiator diff{method, 7};
    const Matrix lhs = differentiate(Matrix(1.5 * x - 0.25 * y), 0.01, diff);
    const Matrix rhs = 1.5 * differentiate(x, 0.01, diff) - 0.25 * differentiate(y, 0.01, diff);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff()));
  }
}

TEST(Differentiate, SmoothingAttenuatesNoise) {
  const Matrix noise = white_noise(100000, 1, 33);
  const double plain = differentiate(noise, 1.0, Differentiator{DiffMethod::kCentered, 3}).squaredNorm();
  for (int window : {5, 9, 21}) {
    EXPECT_LT(differentiate(noise, 1.0, Differentiator{DiffMethod::kSmoothed, window}).squaredNorm(), plain);
    EXPECT_LT(differentiate(noise, 1.0, Differentiator{DiffMethod::kSavitzkyGolay, window}).squaredNorm(), plain);
  }
}

TEST(Differentiate, EndpointsAreSecondOrder) {
  const Trajectory traj = sampled(20, 0.1, [](double t) { return t * t; });
  const Matrix d = differentiate(traj, Differentiator{DiffMethod::kCentered, 3});
  EXPECT_NEAR(d(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(d(19, 0), 3.8, 1e-12);
}

TEST(Differentiate, TooFewSamplesThrows) {
  const Trajectory traj = sampled(10, 0.1, [](double t) { return t; });
  try {
    differentiate(traj, Differentiator{DiffMethod::kSmoothed, 9});
    FAIL() << "expected TooFewSamples";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewSamples);
  }
}

TEST(Differentiate, EvenWindowRejected) {
  const Trajectory traj = sampled(100, 0.1, [](double t) { return t; });
  EXPECT_THROW(differentiate(traj, Differentiator{DiffMethod::kSmoothed, 4}), Error);
}

TEST(SavitzkyGolay, PreservesCubics) {
  Matrix states(60, 1);
  for (Index i = 0; i < 60; ++i) {
    const double t = 0.1 * static_cast<double>(i);
    states(i, 0) = 1.0 - 2.0 * t + 0.5 * t * t - 0.3 * t * t * t;
  }
  const Matrix smooth = savitzky_golay(states, 11);
  EXPECT_LE((smooth - states).cwiseAbs().maxCoeff(), 1e-9 * states.cwiseAbs().maxCoeff());
}

TEST(MovingAverage, TruncatesSymmetricallyAtEdges) {
  Matrix states(5, 1);
  states << 1.0, 2.0, 4.0, 8.0, 16.0;
  const Matrix avg = moving_average(states, 5);
  EXPECT_DOUBLE_EQ(avg(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(avg(1, 0), 7.0 / 3.0);
  EXPECT_DOUBLE_EQ(avg(2, 0), 31.0 / 5.0);
  EXPECT_DOUBLE_EQ(avg(4, 0), 16.0);
}

TEST(DiffMethodNames, RoundTrip) {
  for (DiffMethod method : kAllMethods) EXPECT_EQ(diff_method_from_string(to_string(method)), method);
  EXPECT_THROW(diff_method_from_string("spline"), Error);
}

}  // namespace
}  // namespace miosindy

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
#include <filesystem>
#include <numbers>

#include "miosindy/error.hpp"
#include "miosindy/field.hpp"
#include "miosindy/pde_systems.hpp"
#include "miosindy/rng.hpp"

namespace miosindy {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Field periodic_line(Index n, const std::function<double(double)>& f) {
  Field field = make_field(Axis{"t", 0.0, 1.0, 1}, {Axis{"x", 0.0, kTwoPi / static_cast<double>(n), n, true}},
                           {"u"});
  for (Index i = 0; i < n; ++i) field.at(0, i, 0) = f(field.space[0].coordinate(i));
  return field;
}

double max_abs_row(const Matrix& m, Index row) { return m.row(row).cwiseAbs().maxCoeff(); }

TEST(SpatialDerivative, SineFirstOrder) {
  const Field f = periodic_line(64, [](double x) { return std::sin(x); });
  const Field d = spatial_derivative(f, "x", 1);
  for (Index i = 0; i < 64; ++i) EXPECT_NEAR(d.at(0, i, 0), std::cos(f.space[0].coordinate(i)), 1e-8);
}

TEST(SpatialDerivative, SineFourthOrder) {
  const Field f = periodic_line(64, [](double x) { return std::sin(x); });
  const Field d = spatial_derivative(f, "x", 4);
  for (Index i = 0; i < 64; ++i) EXPECT_NEAR(d.at(0, i, 0), f.at(0, i, 0), 1e-6);
}

TEST(SpatialDerivative, ConstantGivesZero) {
  const Field f = periodic_line(32, [](double) { return 3.5; });
  for (int order = 1; order <= 4; ++order) {
    const Field d = spatial_derivative(f, 0, order);
    for (double v : d.values) EXPECT_NEAR(v, 0.0, 1e-12);
  }
}

TEST(SpatialDerivative, Linear) {
  RngStream rng(21);
  Field f = periodic_line(32, [](double) { return 0.0; });
  Field g = f;
  for (auto& v : f.values) v = rng.normal();
  for (auto& v : g.values) v = rng.normal();
  Field combo = f;
  for (std::size_t i = 0; i < combo.values.size(); ++i) combo.values[i] = 2.0 * f.values[i] - 3.0 * g.values[i];
  for (int order = 1; order <= 4; ++order) {
    const Field df = spatial_derivative(f, 0, order);
    const Field dg = spatial_derivative(g, 0, order);
    const Field dc = spatial_derivative(combo, 0, order);
    for (std::size_t i = 0; i < dc.values.size(); ++i) {
      const double expected = 2.0 * df.values[i] - 3.0 * dg.values[i];
      EXPECT_NEAR(dc.values[i], expected, 1e-10 * (1.0 + std::abs(expected)));
    }
  }
}

TEST(SpatialDerivative, NonPeriodicFiniteDifferences) {
  Field f = make_field(Axis{"t", 0.0, 1.0, 1}, {Axis{"x", 0.0, 0.01, 101, false}}, {"u"});
  for (Index i = 0; i < 101; ++i) {
    const double x = f.space[0].coordinate(i);
    f.at(0, i, 0) = x * x;
  }
  const Field d = spatial_derivative(f, "x", 1);
  for (Index i = 0; i < 101; ++i) EXPECT_NEAR(d.at(0, i, 0), 2.0 * f.space[0].coordinate(i), 1e-10);
}

TEST(SpatialDerivative, OrderFiveUnsupported) {
  const Field f = periodic_line(16, [](double x) { return std::sin(x); });
  try {
    spatial_derivative(f, "x", 5);
    FAIL() << "expected OrderUnsupported";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOrderUnsupported);
  }
}

TEST(Wavenumbers, FftOrder) {
  const Vector k = wavenumbers(8, kTwoPi);
  const double expected[] = {0, 1, 2, 3, 4, -3, -2, -1};
  for (Index i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(k[i], expected[i]);
}

TEST(Ks, ZeroStaysZero) {
  const Field f = simulate_ks(Vector::Zero(64), 2.0, 0.1);
  EXPECT_EQ(f.num_times(), 21);
  for (double v : f.values) EXPECT_EQ(v, 0.0);
}

TEST(Ks, ShortDomainDecays) {
  Vector u0(32);
  for (Index i = 0; i < 32; ++i) u0[i] = 0.1 * std::cos(kTwoPi * static_cast<double>(i) / 32.0);
  const Field f = simulate_ks(u0, 10.0, 0.1, KsOptions{kTwoPi, 0.01});
  const Matrix u = f.variable(0);
  EXPECT_LT(max_abs_row(u, u.rows() - 1), max_abs_row(u, 0));
}

TEST(Ks, MeanConserved) {
  RngStream rng(22);
  Vector u0 = ks_initial_condition(256, rng);
  u0.array() += 0.3;
  const Field f = simulate_ks(u0, 10.0, 0.5);
  const Matrix u = f.variable(0);
  const double m0 = u.row(0).sum();
  for (Index t = 1; t < u.rows(); ++t) EXPECT_NEAR(u.row(t).sum(), m0, 1e-6 * std::abs(m0));
}

TEST(Ks, StepRefinementConverges) {
  RngStream rng(23);
  const Vector u0 = ks_initial_condition(128, rng);
  const Matrix coarse = simulate_ks(u0, 1.0, 1.0, KsOptions{32.0 * std::numbers::pi, 0.025}).variable(0);
  const Matrix fine = simulate_ks(u0, 1.0, 1.0, KsOptions{32.0 * std::numbers::pi, 0.0125}).variable(0);
  const double rel = (coarse.row(1) - fine.row(1)).norm() / fine.row(1).norm();
  EXPECT_LE(rel, 1e-5);
}

TEST(Ks, InitialConditionNormalized) {
  RngStream rng(24);
  const Vector u0 = ks_initial_condition(256, rng);
  EXPECT_NEAR(u0.cwiseAbs().maxCoeff(), 1.0, 1e-12);
}

TEST(ReactionDiffusion, ZeroStaysZero) {
  const Field f = simulate_reaction_diffusion(Matrix::Zero(16, 16), Matrix::Zero(16, 16), 0.5, 0.1);
  for (double v : f.values) EXPECT_EQ(v, 0.0);
}

class SpiralRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto [u0, v0] = spiral_initial_condition(64, 10.0, 1.0, 0.0);
    field_ = new Field(simulate_reaction_diffusion(u0, v0, 5.0, 0.05));
  }
  static void TearDownTestSuite() {
    delete field_;
    field_ = nullptr;
  }
  static Field* field_;
};

Field* SpiralRun::field_ = nullptr;

TEST_F(SpiralRun, AmplitudeBounded) {
  for (double v : field_->values) {
    EXPECT_GE(v, -1.1);
    EXPECT_LE(v, 1.1);
  }
}

TEST_F(SpiralRun, RadialEnergySmooth) {
  const Matrix u = field_->variable(0);
  const Matrix v = field_->variable(1);
  const Vector energy = (u.array().square() + v.array().square()).rowwise().mean();
  for (Index t = 1; t < energy.size(); ++t) {
    if (field_->time.coordinate(t) <= 1.0) continue;
    EXPECT_LE(std::abs(energy[t] - energy[t - 1]), 0.1 * energy[t - 1]);
  }
}

TEST_F(SpiralRun, FieldFileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "miosindy_spiral_test.bin";
  write_field(*field_, path.string());
  const Field back = read_field(path.string());
  EXPECT_EQ(back.values, field_->values);
  EXPECT_EQ(back.shape(), field_->shape());
  EXPECT_EQ(back.variables, field_->variables);
  EXPECT_DOUBLE_EQ(back.space[1].step, field_->space[1].step);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".json");
}

TEST(ReactionDiffusion, SampledSpiralDeterministic) {
  RngStream a(25);
  RngStream b(25);
  const auto [ua, va] = sample_spiral_initial_condition(32, 10.0, a);
  const auto [ub, vb] = sample_spiral_initial_condition(32, 10.0, b);
  EXPECT_EQ(ua, ub);
  EXPECT_EQ(va, vb);
}

}  // namespace
}  // namespace miosindy

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

#include "miosindy/pde_systems.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "miosindy/error.hpp"

namespace miosindy {

namespace {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

// Exponential time differencing RK4 for v' = L v + N(v) with diagonal real L.
// phi-function coefficients by contour averaging over 32 points on the upper
// unit semicircle centred at h L.
class Etdrk4 {
 public:
  using Nonlinear = std::function<void(const Spectrum& v, Spectrum& nv)>;

  Etdrk4(const std::vector<double>& linear, double h, Nonlinear nonlinear)
      : nonlinear_(std::move(nonlinear)) {
    constexpr int kContour = 32;
    const std::size_t n = linear.size();
    e_.resize(n);
    e2_.resize(n);
    q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double hl = h * linear[i];
      e_[i] = std::exp(hl);
      e2_[i] = std::exp(hl / 2.0);
      Complex q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
      for (int j = 1; j <= kContour; ++j) {
        const Complex z = hl + std::exp(Complex(0.0, std::numbers::pi * (j - 0.5) / kContour));
        const Complex ez = std::exp(z);
        const Complex z3 = z * z * z;
        q += (std::exp(z / 2.0) - 1.0) / z;
        f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
        f2 += (2.0 + z + ez * (z - 2.0)) / z3;
        f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
      }
      q_[i] = h * q.real() / kContour;
      f1_[i] = h * f1.real() / kContour;
      f2_[i] = h * f2.real() / kContour;
      f3_[i] = h * f3.real() / kContour;
    }
    nv_.resize(n);
    na_.resize(n);
    nb_.resize(n);
    nc_.resize(n);
    a_.resize(n);
    b_.resize(n);
    c_.resize(n);
  }

  void step(Spectrum& v) {
    const std::size_t n = v.size();
    nonlinear_(v, nv_);
    for (std::size_t i = 0; i < n; ++i) a_[i] = e2_[i] * v[i] + q_[i] * nv_[i];
    nonlinear_(a_, na_);
    for (std::size_t i = 0; i < n; ++i) b_[i] = e2_[i] * v[i] + q_[i] * na_[i];
    nonlinear_(b_, nb_);
    for (std::size_t i = 0; i < n; ++i) c_[i] = e2_[i] * a_[i] + q_[i] * (2.0 * nb_[i] - nv_[i]);
    nonlinear_(c_, nc_);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = e_[i] * v[i] + nv_[i] * f1_[i] + 2.0 * (na_[i] + nb_[i]) * f2_[i] + nc_[i] * f3_[i];
    }
  }

 private:
  Nonlinear nonlinear_;
  std::vector<double> e_, e2_, q_, f1_, f2_, f3_;
  Spectrum nv_, na_, nb_, nc_, a_, b_, c_;
};

Index output_count(double t_end, double dt_out) {
  require(dt_out > 0.0 && std::isfinite(dt_out), ErrorCode::kInvalidArgument, "dt_out must be positive");
  require(t_end >= 0.0 && std::isfinite(t_end), ErrorCode::kInvalidArgument, "t_end must be nonnegative");
  return static_cast<Index>(std::llround(t_end / dt_out)) + 1;
}

int substeps(double dt_out, double max_step) {
  require(max_step > 0.0, ErrorCode::kInvalidArgument, "max_step must be positive");
  return std::max(1, static_cast<int>(std::ceil(dt_out / max_step - 1e-9)));
}

void check_bounded(const std::vector<double>& values, double t, const char* what) {
  for (double x : values) {
    if (!std::isfinite(x) || std::abs(x) > 1e6) {
      fail(ErrorCode::kDiverged, std::string(what) + " diverged at t = " + std::to_string(t));
    }
  }
}

// 2/3-rule mask for a signed mode index on an n-point axis.
bool kept(Index m, Index n) {
  const Index signed_m = m <= n / 2 ? m : m - n;
  return 3 * std::abs(signed_m) < n;
}

}  // namespace

Field simulate_ks(const Vector& u0, double t_end, double dt_out, const KsOptions& options) {
  const Index n = u0.size();
  require(n >= 4 && (n & (n - 1)) == 0, ErrorCode::kInvalidArgument, "simulate_ks: grid points must be a power of two");
  require(options.length > 0.0, ErrorCode::kInvalidArgument, "simulate_ks: domain length must be positive");
  require(u0.allFinite(), ErrorCode::kInvalidArgument, "simulate_ks: initial condition not finite");
  const Index frames = output_count(t_end, dt_out);
  const int inner = substeps(dt_out, options.max_step);
  const double h = dt_out / inner;

  RealFft fft({static_cast<int>(n)});
  const std::size_t modes = fft.spectral_size();
  const Vector k = wavenumbers(n, options.length);
  std::vector<double> linear(modes);
  std::vector<Complex> deriv(modes);
  for (std::size_t m = 0; m < modes; ++m) {
    const double km = k[static_cast<Index>(m)];
    linear[m] = km * km - km * km * km * km;
    // -(1/2) d/dx of u^2, truncated by the 2/3 rule.
    deriv[m] = kept(static_cast<Index>(m), n) ? Complex(0.0, -0.5 * km) : Complex(0.0);
  }

  std::vector<double> phys(static_cast<std::size_t>(n));
  Etdrk4 stepper(linear, h, [&](const Spectrum& v, Spectrum& nv) {
    fft.inverse(v.data(), phys.data());
    for (double& x : phys) x *= x;
    fft.forward(phys.data(), nv.data());
    for (std::size_t m = 0; m < modes; ++m) nv[m] *= deriv[m];
  });

  Field field = make_field(Axis{"t", 0.0, dt_out, frames, false},
                           {Axis{"x", 0.0, options.length / static_cast<double>(n), n, true}}, {"u"});
  Spectrum v(modes);
  fft.forward(u0.data(), v.data());
  for (Index i = 0; i < n; ++i) field.at(0, i, 0) = u0[i];
  for (Index f = 1; f < frames; ++f) {
    for (int s = 0; s < inner; ++s) stepper.step(v);
    fft.inverse(v.data(), phys.data());
    check_bounded(phys, static_cast<double>(f) * dt_out, "Kuramoto-Sivashinsky");
    for (Index i = 0; i < n; ++i) field.at(f, i, 0) = phys[static_cast<std::size_t>(i)];
  }
  return field;
}

Vector ks_initial_condition(Index points, RngStream& rng) {
  require(points >= 4, ErrorCode::kInvalidArgument, "ks_initial_condition: too few points");
  const double r0 = rng.uniform();
  const double r1 = rng.uniform();
  const double q = std::round(4.0 * r1);
  Vector u(points);
  for (Index i = 0; i < points; ++i) {
    const double s = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(points);
    u[i] = std::cos(s + r0) + std::sin(q * s);
  }
  return u / u.cwiseAbs().maxCoeff();
}

Field simulate_reaction_diffusion(const Matrix& u0, const Matrix& v0, double t_end, double dt_out,
                                  const ReactionDiffusionOptions& options) {
  const Index n = u0.rows();
  require(n >= 4 && u0.cols() == n && v0.rows() == n && v0.cols() == n, ErrorCode::kShapeMismatch,
          "simulate_reaction_diffusion: u0 and v0 must be equal square grids");
  require(u0.allFinite() && v0.allFinite(), ErrorCode::kInvalidArgument,
          "simulate_reaction_diffusion: initial condition not finite");
  const Index frames = output_count(t_end, dt_out);
  const int inner = substeps(dt_out, options.max_step);
  const double h = dt_out / inner;
  const double length = 2.0 * options.half_width;

  RealFft fft({static_cast<int>(n), static_cast<int>(n)});
  const std::size_t modes = fft.spectral_size();
  const Index cols = n / 2 + 1;
  const Vector k = wavenumbers(n, length);
  std::vector<double> linear(2 * modes);
  std::vector<bool> mask(modes);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const auto m = static_cast<std::size_t>(i * cols + j);
      linear[m] = 1.0 - options.diffusion * (k[i] * k[i] + k[j] * k[j]);
      linear[m + modes] = linear[m];
      mask[m] = kept(i, n) && kept(j, n);
    }
  }

  const auto points = static_cast<std::size_t>(n * n);
  std::vector<double> u(points), v(points), nu(points), nv(points);
  Etdrk4 stepper(linear, h, [&](const Spectrum& w, Spectrum& out) {
    fft.inverse(w.data(), u.data());
    fft.inverse(w.data() + modes, v.data());
    for (std::size_t p = 0; p < points; ++p) {
      const double a = u[p], b = v[p];
      const double r2 = a * a + b * b;
      nu[p] = -a * r2 + b * r2;
      nv[p] = -a * r2 - b * r2;
    }
    fft.forward(nu.data(), out.data());
    fft.forward(nv.data(), out.data() + modes);
    for (std::size_t m = 0; m < modes; ++m) {
      if (!mask[m]) {
        out[m] = 0.0;
        out[m + modes] = 0.0;
      }
    }
  });

  const double step = length / static_cast<double>(n);
  Field field = make_field(Axis{"t", 0.0, dt_out, frames, false},
                           {Axis{"x", -options.half_width, step, n, true}, Axis{"y", -options.half_width, step, n, true}},
                           {"u", "v"});
  auto store = [&](Index f, const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t p = 0; p < points; ++p) {
      field.at(f, static_cast<Index>(p), 0) = a[p];
      field.at(f, static_cast<Index>(p), 1) = b[p];
    }
  };

  // Row-major copies so grid index (i, j) maps to flat i * n + j.
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      u[static_cast<std::size_t>(i * n + j)] = u0(i, j);
      v[static_cast<std::size_t>(i * n + j)] = v0(i, j);
    }
  }
  store(0, u, v);
  Spectrum w(2 * modes);
  fft.forward(u.data(), w.data());
  fft.forward(v.data(), w.data() + modes);
  for (Index f = 1; f < frames; ++f) {
    for (int s = 0; s < inner; ++s) stepper.step(w);
    fft.inverse(w.data(), u.data());
    fft.inverse(w.data() + modes, v.data());
    check_bounded(u, static_cast<double>(f) * dt_out, "reaction-diffusion");
    check_bounded(v, static_cast<double>(f) * dt_out, "reaction-diffusion");
    store(f, u, v);
  }
  return field;
}

std::pair<Matrix, Matrix> spiral_initial_condition(Index points, double half_width, double scale,
                                                   double offset) {
  require(points >= 2 && half_width > 0.0, ErrorCode::kInvalidArgument, "spiral_initial_condition: bad grid");
  const double step = 2.0 * half_width / static_cast<double>(points);
  Matrix u(points, points), v(points, points);
  for (Index i = 0; i < points; ++i) {
    const double x = -half_width + static_cast<double>(i) * step;
    for (Index j = 0; j < points; ++j) {
      const double y = -half_width + static_cast<double>(j) * step;
      const double r = std::hypot(x, y);
      const double phase = std::atan2(y, x) + offset - scale * r;
      u(i, j) = std::tanh(r) * std::cos(phase);
      v(i, j) = std::tanh(r) * std::sin(phase);
    }
  }
  return {std::move(u), std::move(v)};
}

std::pair<Matrix, Matrix> sample_spiral_initial_condition(Index points, double half_width,
                                                          RngStream& rng) {
  const double scale = rng.uniform(0.95, 1.05);
  const double offset = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return spiral_initial_condition(points, half_width, scale, offset);
}

}  // namespace miosindy

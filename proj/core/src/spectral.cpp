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

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "miosindy/error.hpp"
#include "miosindy/field.hpp"

namespace miosindy {

namespace {

// FFTW planning touches global state; execution of distinct plans does not.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  double* real = nullptr;
  fftw_complex* spectral = nullptr;
};

RealFft::RealFft(std::vector<int> shape) : plans_(std::make_unique<Plans>()) {
  require(!shape.empty(), ErrorCode::kInvalidArgument, "RealFft: empty shape");
  real_size_ = 1;
  for (int s : shape) {
    require(s >= 1, ErrorCode::kInvalidArgument, "RealFft: nonpositive extent");
    real_size_ *= static_cast<std::size_t>(s);
  }
  spectral_size_ = real_size_ / static_cast<std::size_t>(shape.back()) * static_cast<std::size_t>(shape.back() / 2 + 1);

  std::lock_guard lock(planner_mutex());
  plans_->real = fftw_alloc_real(real_size_);
  plans_->spectral = fftw_alloc_complex(spectral_size_);
  const int rank = static_cast<int>(shape.size());
  plans_->forward = fftw_plan_dft_r2c(rank, shape.data(), plans_->real, plans_->spectral, FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r(rank, shape.data(), plans_->spectral, plans_->real, FFTW_ESTIMATE);
  if (plans_->forward == nullptr || plans_->inverse == nullptr) {
    fail(ErrorCode::kInvalidArgument, "RealFft: FFTW planning failed");
  }
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward != nullptr) fftw_destroy_plan(plans_->forward);
  if (plans_->inverse != nullptr) fftw_destroy_plan(plans_->inverse);
  fftw_free(plans_->real);
  fftw_free(plans_->spectral);
}

void RealFft::forward(const double* in, std::complex<double>* out) {
  std::copy(in, in + real_size_, plans_->real);
  fftw_execute(plans_->forward);
  const auto* s = reinterpret_cast<const std::complex<double>*>(plans_->spectral);
  std::copy(s, s + spectral_size_, out);
}

void RealFft::inverse(const std::complex<double>* in, double* out) {
  std::copy(in, in + spectral_size_, reinterpret_cast<std::complex<double>*>(plans_->spectral));
  fftw_execute(plans_->inverse);
  const double scale = 1.0 / static_cast<double>(real_size_);
  for (std::size_t i = 0; i < real_size_; ++i) out[i] = plans_->real[i] * scale;
}

Vector wavenumbers(Index n, double length) {
  Vector k(n);
  const double base = 2.0 * std::numbers::pi / length;
  for (Index m = 0; m < n; ++m) {
    const Index signed_m = m <= n / 2 ? m : m - n;
    k[m] = base * static_cast<double>(signed_m);
  }
  return k;
}

}  // namespace miosindy

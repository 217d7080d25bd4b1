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

#include "miosindy/metrics.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "miosindy/error.hpp"

namespace miosindy {

double aicc(double rss, Index m, Index k, bool* floored) {
  require(k >= 0 && m > k + 2, ErrorCode::kDegenerateSampleSize,
          "aicc: need m > k + 2 (m = " + std::to_string(m) + ", k = " + std::to_string(k) + ")");
  require(rss >= 0.0 && !std::isnan(rss), ErrorCode::kInvalidArgument, "aicc: rss must be nonnegative");
  const bool zero = rss < 1e-300;
  if (floored != nullptr) *floored = zero;
  const double r = zero ? 1e-300 : rss;
  const auto md = static_cast<double>(m);
  const auto kd = static_cast<double>(k);
  return md * std::log(r / md) + 2.0 * kd + 2.0 * (kd + 1.0) * (kd + 2.0) / (md - kd - 2.0);
}

double true_positivity_rate(const Matrix& truth, const Matrix& est) {
  require(truth.rows() == est.rows() && truth.cols() == est.cols(), ErrorCode::kShapeMismatch,
          "true_positivity_rate: coefficient matrices differ in shape");
  const auto a = truth.array() != 0.0;
  const auto b = est.array() != 0.0;
  const auto both = (a && b).count();
  const auto either = (a || b).count();
  return either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
}

double coefficient_error(const Matrix& truth, const Matrix& est) {
  require(truth.rows() == est.rows() && truth.cols() == est.cols(), ErrorCode::kShapeMismatch,
          "coefficient_error: coefficient matrices differ in shape");
  const double norm = truth.norm();
  require(norm > 0.0, ErrorCode::kInvalidArgument, "coefficient_error: true coefficients are all zero");
  return (truth - est).norm() / norm;
}

double derivative_rmse(const Matrix& est, const Matrix& truth, const Matrix& theta) {
  require(truth.rows() == est.rows() && truth.cols() == est.cols(), ErrorCode::kShapeMismatch,
          "derivative_rmse: coefficient matrices differ in shape");
  require(theta.cols() == est.rows(), ErrorCode::kDimensionMismatch, "derivative_rmse: library size mismatch");
  const Matrix diff = theta * (truth - est);
  if (diff.size() == 0) return 0.0;
  return std::sqrt(diff.squaredNorm() / static_cast<double>(diff.size()));
}

nlohmann::json to_json(const MetricReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"tpr", num(r.tpr)}, {"coef_error", num(r.coef_error)}, {"rmse", num(r.rmse)}, {"aicc", num(r.aicc)}};
}

}  // namespace miosindy

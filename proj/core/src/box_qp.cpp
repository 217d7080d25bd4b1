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

#include "miosindy/box_qp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "miosindy/error.hpp"

namespace miosindy::qp {

namespace {

enum class Bound { kFree, kLower, kUpper };

}  // namespace

Result minimize_box(const Matrix& h, const Vector& c, const Vector& lower, const Vector& upper) {
  const Index n = h.rows();
  require(h.cols() == n && c.size() == n && lower.size() == n && upper.size() == n,
          ErrorCode::kDimensionMismatch, "minimize_box: inconsistent dimensions");
  require((lower.array() <= 0.0).all() && (upper.array() >= 0.0).all(), ErrorCode::kInvalidArgument,
          "minimize_box: bounds must bracket zero");
  Result r;
  r.x = Vector::Zero(n);
  if (n == 0) return r;

  std::vector<Bound> state(static_cast<std::size_t>(n), Bound::kFree);
  for (Index i = 0; i < n; ++i) {
    if (lower[i] == 0.0 && upper[i] == 0.0) state[static_cast<std::size_t>(i)] = Bound::kLower;
  }
  const double ridge = 1e-13 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
  const double tol = 1e-10 * (1.0 + c.cwiseAbs().maxCoeff());
  const int max_iter = 20 * static_cast<int>(n) + 50;
  bool pd = true;

  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<Index> free;
    for (Index i = 0; i < n; ++i) {
      if (state[static_cast<std::size_t>(i)] == Bound::kFree) free.push_back(i);
    }
    const auto nf = static_cast<Index>(free.size());
    if (nf > 0) {
      Matrix hf(nf, nf);
      Vector rhs(nf);
      for (Index a = 0; a < nf; ++a) {
        rhs[a] = c[free[a]];
        for (Index j = 0; j < n; ++j) {
          if (state[static_cast<std::size_t>(j)] != Bound::kFree) rhs[a] -= h(free[a], j) * r.x[j];
        }
        for (Index b = 0; b < nf; ++b) hf(a, b) = h(free[a], free[b]);
      }
      Eigen::LLT<Matrix> llt(hf);
      if (llt.info() != Eigen::Success) {
        pd = false;
        hf.diagonal().array() += ridge;
        llt.compute(hf);
      }
      const Vector target = llt.solve(rhs);
      double step = 1.0;
      Index blocking = -1;
      for (Index a = 0; a < nf; ++a) {
        const Index i = free[a];
        const double d = target[a] - r.x[i];
        if (d > 0.0 && r.x[i] + d > upper[i]) {
          const double s = (upper[i] - r.x[i]) / d;
          if (s < step) {
            step = s;
            blocking = i;
          }
        } else if (d < 0.0 && r.x[i] + d < lower[i]) {
          const double s = (lower[i] - r.x[i]) / d;
          if (s < step) {
            step = s;
            blocking = i;
          }
        }
      }
      for (Index a = 0; a < nf; ++a) r.x[free[a]] += step * (target[a] - r.x[free[a]]);
      if (blocking >= 0) {
        const bool at_upper = std::abs(r.x[blocking] - upper[blocking]) <= std::abs(r.x[blocking] - lower[blocking]);
        r.x[blocking] = at_upper ? upper[blocking] : lower[blocking];
        state[static_cast<std::size_t>(blocking)] = at_upper ? Bound::kUpper : Bound::kLower;
        continue;
      }
    }
    // Multipliers of the bound constraints from the gradient 2(Hx - c).
    const Vector grad = 2.0 * (h * r.x - c);
    Index release = -1;
    double worst = tol;
    for (Index i = 0; i < n; ++i) {
      const Bound s = state[static_cast<std::size_t>(i)];
      if (s == Bound::kLower && lower[i] < upper[i] && -grad[i] > worst) {
        worst = -grad[i];
        release = i;
      } else if (s == Bound::kUpper && grad[i] > worst) {
        worst = grad[i];
        release = i;
      }
    }
    if (release < 0) {
      r.objective = r.x.dot(h * r.x) - 2.0 * c.dot(r.x);
      r.positive_definite = pd;
      return r;
    }
    state[static_cast<std::size_t>(release)] = Bound::kFree;
  }
  fail(ErrorCode::kInvalidProblem, "minimize_box: active-set iteration limit reached");
}

}  // namespace miosindy::qp

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

#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace miosindy::oracle {

std::optional<Vec> gaussian_solve(Mat a, Vec b, double tiny) {
  const int n = static_cast<int>(a.rows());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) <= tiny) return std::nullopt;
    if (pivot != col) {
      a.row(col).swap(a.row(pivot));
      std::swap(b[col], b[pivot]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  Vec x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return x;
}

namespace {

double objective(const Mat& gram, const Vec& linear, double lambda, const Vec& x) {
  return x.dot(gram * x) + lambda * x.squaredNorm() - 2.0 * linear.dot(x);
}

// Optimum restricted to `support`; nullopt when singular or infeasible.
std::optional<Vec> restricted(const Mat& gram, const Vec& linear, double lambda, const std::vector<int>& support,
                              const std::optional<std::pair<Mat, Vec>>& equality) {
  const int d = static_cast<int>(gram.rows());
  const int s = static_cast<int>(support.size());
  const int m = equality ? static_cast<int>(equality->first.rows()) : 0;
  Mat kkt = Mat::Zero(s + m, s + m);
  Vec rhs = Vec::Zero(s + m);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) kkt(i, j) = gram(support[i], support[j]);
    kkt(i, i) += lambda;
    rhs[i] = linear[support[i]];
    for (int r = 0; r < m; ++r) {
      kkt(i, s + r) = equality->first(r, support[i]);
      kkt(s + r, i) = equality->first(r, support[i]);
    }
  }
  for (int r = 0; r < m; ++r) rhs[s + r] = equality->second[r];
  Vec x = Vec::Zero(d);
  if (s + m > 0) {
    auto sol = gaussian_solve(kkt, rhs, 1e-12);
    if (!sol) {
      if (m == 0) return std::nullopt;
      // Redundant rows make the KKT matrix singular; retry by least squares on the same system.
      sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    }
    for (int i = 0; i < s; ++i) x[support[i]] = (*sol)[i];
  }
  if (equality) {
    const Vec r = equality->first * x - equality->second;
    if (r.cwiseAbs().maxCoeff() > 1e-8 * (1.0 + equality->second.cwiseAbs().maxCoeff())) return std::nullopt;
  }
  return x;
}

void enumerate(int start, int d, int k, std::vector<int>& current, const std::function<void()>& visit) {
  visit();
  if (static_cast<int>(current.size()) == k) return;
  for (int i = start; i < d; ++i) {
    current.push_back(i);
    enumerate(i + 1, d, k, current, visit);
    current.pop_back();
  }
}

}  // namespace

SubsetOptimum best_subset(const Mat& gram, const Vec& linear, double lambda, int k,
                          const std::optional<std::pair<Mat, Vec>>& equality) {
  SubsetOptimum best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<int> current;
  enumerate(0, static_cast<int>(gram.rows()), k, current, [&] {
    const auto x = restricted(gram, linear, lambda, current, equality);
    if (!x) return;
    const double obj = objective(gram, linear, lambda, *x);
    if (obj < best.objective) {
      best.objective = obj;
      best.support = current;
      best.xi = *x;
    }
  });
  return best;
}

Vec multiplier_search(const Mat& gram, const Vec& linear, double lambda, const Vec& a, double b) {
  Mat h = gram;
  h.diagonal().array() += lambda;
  // x(mu) = H^{-1}(c - mu a); a'x(mu) - b is affine and decreasing in mu.
  auto x_of = [&](double mu) { return *gaussian_solve(h, linear - mu * a); };
  auto g = [&](double mu) { return a.dot(x_of(mu)) - b; };
  double lo = -1.0, hi = 1.0;
  while (g(lo) < 0.0) lo *= 2.0;
  while (g(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return x_of(0.5 * (lo + hi));
}

}  // namespace miosindy::oracle

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

#include "miosindy/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "miosindy/error.hpp"
#include "miosindy/rng.hpp"

namespace miosindy {

namespace {

SparseSolution heuristic_solution(const Matrix& theta, const Vector& y, double lambda, Vector xi) {
  SparseSolution s;
  for (Index i = 0; i < xi.size(); ++i) {
    if (xi[i] != 0.0) s.support.push_back(i);
  }
  const Vector r = theta * xi;
  s.objective = r.squaredNorm() + lambda * xi.squaredNorm() - 2.0 * y.dot(r);
  s.xi = std::move(xi);
  s.lower_bound = std::numeric_limits<double>::quiet_NaN();
  s.gap = std::numeric_limits<double>::quiet_NaN();
  s.status = SolveStatus::kHeuristic;
  return s;
}

void check_inputs(const Matrix& theta, const Vector& y, const char* who) {
  require(theta.cols() >= 1, ErrorCode::kInvalidArgument, std::string(who) + ": theta needs at least one column");
  require(theta.rows() == y.size(), ErrorCode::kDimensionMismatch, std::string(who) + ": theta rows must match y");
}

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Vector ridge_on_support(const Matrix& theta, const Vector& y, double lambda, const std::vector<Index>& support) {
  Vector xi = Vector::Zero(theta.cols());
  if (support.empty()) return xi;
  const auto n = static_cast<Index>(support.size());
  Matrix sub(theta.rows(), n);
  for (Index i = 0; i < n; ++i) sub.col(i) = theta.col(support[static_cast<std::size_t>(i)]);
  Matrix h = sub.transpose() * sub;
  h.diagonal().array() += lambda;
  const Vector c = sub.transpose() * y;
  Vector coef;
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-14) {
    coef = llt.solve(c);
  } else {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(h);
    coef = cod.solve(c);
  }
  for (Index i = 0; i < n; ++i) xi[support[static_cast<std::size_t>(i)]] = coef[i];
  return xi;
}

SparseSolution stlsq(const Matrix& theta, const Vector& y, const StlsqConfig& cfg) {
  check_inputs(theta, y, "stlsq");
  require(cfg.threshold > 0.0, ErrorCode::kInvalidArgument, "stlsq: threshold must be positive");
  require(cfg.lambda >= 0.0 && cfg.max_iter >= 1, ErrorCode::kInvalidArgument, "stlsq: bad lambda or max_iter");
  std::vector<Index> active(static_cast<std::size_t>(theta.cols()));
  std::iota(active.begin(), active.end(), Index{0});
  Vector xi = ridge_on_support(theta, y, cfg.lambda, active);
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    std::vector<Index> kept;
    for (Index i : active) {
      if (std::abs(xi[i]) >= cfg.threshold) kept.push_back(i);
    }
    if (kept == active) break;
    active = std::move(kept);
    xi = ridge_on_support(theta, y, cfg.lambda, active);
  }
  return heuristic_solution(theta, y, cfg.lambda, std::move(xi));
}

std::vector<SparseSolution> ssr(const Matrix& theta, const Vector& y, double lambda) {
  check_inputs(theta, y, "ssr");
  require(lambda >= 0.0, ErrorCode::kInvalidArgument, "ssr: lambda must be nonnegative");
  std::vector<Index> active(static_cast<std::size_t>(theta.cols()));
  std::iota(active.begin(), active.end(), Index{0});
  std::vector<SparseSolution> path;
  Vector xi = ridge_on_support(theta, y, lambda, active);
  while (true) {
    path.push_back(heuristic_solution(theta, y, lambda, xi));
    // heuristic_solution reports only nonzeros; keep the nominal level support.
    path.back().support = active;
    if (active.size() == 1) break;
    auto drop = std::min_element(active.begin(), active.end(),
                                 [&](Index a, Index b) { return std::abs(xi[a]) < std::abs(xi[b]); });
    active.erase(drop);
    xi = ridge_on_support(theta, y, lambda, active);
  }
  return path;
}

Matrix ensemble_members(const Matrix& theta, const Vector& y, const EnsembleConfig& cfg) {
  check_inputs(theta, y, "ensemble_stlsq");
  require(cfg.n_models >= 2, ErrorCode::kInvalidArgument, "ensemble_stlsq: need at least 2 models");
  require(theta.rows() >= 10, ErrorCode::kTooFewSamples, "ensemble_stlsq: need at least 10 rows");
  const Index n = theta.rows();
  const Index d = theta.cols();
  const RngStream root(cfg.seed);
  Matrix coefs(d, cfg.n_models);
  for (int m = 0; m < cfg.n_models; ++m) {
    RngStream rng = root.substream(static_cast<std::uint64_t>(m));
    if (cfg.mode == EnsembleMode::kBagging) {
      Matrix sample_theta(n, d);
      Vector sample_y(n);
      for (Index r = 0; r < n; ++r) {
        const auto row = static_cast<Index>(rng.below(static_cast<std::size_t>(n)));
        sample_theta.row(r) = theta.row(row);
        sample_y[r] = y[row];
      }
      coefs.col(m) = stlsq(sample_theta, sample_y, cfg.base).xi;
    } else {
      require(cfg.drop_terms >= 0 && cfg.drop_terms < d, ErrorCode::kInvalidArgument,
              "ensemble_stlsq: drop_terms must be below the library size");
      std::vector<Index> keep(static_cast<std::size_t>(d));
      std::iota(keep.begin(), keep.end(), Index{0});
      for (int t = 0; t < cfg.drop_terms; ++t) {
        keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(rng.below(keep.size())));
      }
      Matrix sub(n, static_cast<Index>(keep.size()));
      for (std::size_t i = 0; i < keep.size(); ++i) sub.col(static_cast<Index>(i)) = theta.col(keep[i]);
      const Vector fit = stlsq(sub, y, cfg.base).xi;
      coefs.col(m).setZero();
      for (std::size_t i = 0; i < keep.size(); ++i) coefs(keep[i], m) = fit[static_cast<Index>(i)];
    }
  }
  return coefs;
}

SparseSolution ensemble_stlsq(const Matrix& theta, const Vector& y, const EnsembleConfig& cfg) {
  const Matrix coefs = ensemble_members(theta, y, cfg);
  const Index d = theta.cols();
  if (cfg.top_k) {
    require(*cfg.top_k >= 0 && *cfg.top_k <= d, ErrorCode::kInvalidArgument, "ensemble_stlsq: top_k out of range");
    std::vector<double> inclusion(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
      inclusion[static_cast<std::size_t>(i)] = static_cast<double>((coefs.row(i).array() != 0.0).count()) / cfg.n_models;
    }
    std::vector<Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return inclusion[static_cast<std::size_t>(a)] > inclusion[static_cast<std::size_t>(b)];
    });
    std::vector<Index> support(order.begin(), order.begin() + *cfg.top_k);
    std::sort(support.begin(), support.end());
    return heuristic_solution(theta, y, cfg.base.lambda, ridge_on_support(theta, y, cfg.base.lambda, support));
  }

  Vector xi(d);
  std::vector<double> member(static_cast<std::size_t>(cfg.n_models));
  for (Index i = 0; i < d; ++i) {
    for (int m = 0; m < cfg.n_models; ++m) member[static_cast<std::size_t>(m)] = coefs(i, m);
    xi[i] = median(member);
  }
  return heuristic_solution(theta, y, cfg.base.lambda, std::move(xi));
}

}  // namespace miosindy

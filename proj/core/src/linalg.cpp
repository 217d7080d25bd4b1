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

#include "miosindy/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "miosindy/error.hpp"

namespace miosindy {

namespace {

void check_symmetric_square(const Matrix& g, const char* who) {
  require(g.rows() == g.cols(), ErrorCode::kDimensionMismatch,
          std::string(who) + ": Gram matrix must be square");
  require(all_finite(g), ErrorCode::kInvalidArgument,
          std::string(who) + ": Gram matrix has non-finite entries");
  if (g.size() == 0) return;
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-10 * scale, ErrorCode::kInvalidArgument,
          std::string(who) + ": Gram matrix is not symmetric");
}

Matrix shifted(const Matrix& g, double lambda) {
  Matrix h = g;
  h.diagonal().array() += lambda;
  return h;
}

}  // namespace

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

double ridge_objective(const Matrix& gram, const Vector& linear, double lambda,
                       const Vector& xi) {
  return xi.dot(gram * xi) + lambda * xi.squaredNorm() - 2.0 * linear.dot(xi);
}

Vector ridge_solve(const Matrix& gram, const Vector& linear, double lambda) {
  check_symmetric_square(gram, "ridge_solve");
  require(linear.size() == gram.rows(), ErrorCode::kDimensionMismatch,
          "ridge_solve: linear term length " + std::to_string(linear.size()) +
              " does not match Gram size " + std::to_string(gram.rows()));
  require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::kInvalidArgument,
          "ridge_solve: lambda must be finite and nonnegative");
  if (gram.size() == 0) return Vector(0);

  const Matrix h = shifted(gram, lambda);
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() == Eigen::Success && (lambda > 0.0 || llt.rcond() * kConditionLimit >= 1.0)) {
    return llt.solve(linear);
  }
  Eigen::LDLT<Matrix> ldlt(h);
  const Vector pivots = ldlt.vectorD().cwiseAbs();
  const double rcond = ldlt.rcond();
  if (ldlt.info() != Eigen::Success || !std::isfinite(rcond) || rcond * kConditionLimit < 1.0 ||
      pivots.minCoeff() * kConditionLimit < pivots.maxCoeff()) {
    fail(ErrorCode::kSingularSystem, "ridge_solve: system is numerically singular");
  }
  return ldlt.solve(linear);
}

Vector constrained_ridge_solve(const Matrix& gram, const Vector& linear, double lambda,
                               const Matrix& a, const Vector& b) {
  check_symmetric_square(gram, "constrained_ridge_solve");
  const Index n = gram.rows();
  require(linear.size() == n, ErrorCode::kDimensionMismatch,
          "constrained_ridge_solve: linear term length mismatch");
  require(a.rows() == b.size(), ErrorCode::kDimensionMismatch,
          "constrained_ridge_solve: A rows must match b length");
  require(a.rows() == 0 || a.cols() == n, ErrorCode::kDimensionMismatch,
          "constrained_ridge_solve: A columns must match Gram size");
  if (a.rows() == 0) return ridge_solve(gram, linear, lambda);
  require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::kInvalidArgument,
          "constrained_ridge_solve: lambda must be finite and nonnegative");

  Eigen::ColPivHouseholderQR<Matrix> qr(a.transpose());
  qr.setThreshold(1e-12);
  require(qr.rank() == a.rows(), ErrorCode::kInfeasibleConstraints,
          "constrained_ridge_solve: constraint matrix is row-rank deficient");

  const Matrix h = shifted(gram, lambda);
  const Vector xp = a.completeOrthogonalDecomposition().solve(b);
  const Index free_dims = n - a.rows();
  Vector xi = xp;
  if (free_dims > 0) {
    const Matrix q = qr.householderQ();
    const Matrix basis = q.rightCols(free_dims);
    const Matrix reduced = basis.transpose() * h * basis;
    const Vector rhs = basis.transpose() * (linear - h * xp);
    Eigen::LDLT<Matrix> ldlt(reduced);
    const Vector pivots = ldlt.vectorD().cwiseAbs();
  const double rcond = ldlt.rcond();
  if (ldlt.info() != Eigen::Success || !std::isfinite(rcond) || rcond * kConditionLimit < 1.0 ||
      pivots.minCoeff() * kConditionLimit < pivots.maxCoeff()) {
      fail(ErrorCode::kInfeasibleConstraints,
           "constrained_ridge_solve: KKT system is singular on the constraint null space");
    }
    xi += basis * ldlt.solve(rhs);
  }
  const double bnorm = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
  require((a * xi - b).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + bnorm),
          ErrorCode::kInfeasibleConstraints,
          "constrained_ridge_solve: constraints cannot be satisfied");
  return xi;
}

namespace qp {

Result minimize(const Matrix& h, const Vector& c) {
  Result r;
  if (h.rows() == 0) {
    r.x = Vector(0);
    r.positive_definite = true;
    return r;
  }
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() == Eigen::Success && llt.rcond() * 1e15 >= 1.0) {
    r.x = llt.solve(c);
    r.positive_definite = true;
  } else {
    Eigen::LDLT<Matrix> ldlt(h);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
        ldlt.rcond() * kConditionLimit >= 1.0) {
      r.x = ldlt.solve(c);
    } else {
      // Singular PSD block: the minimum is finite only when c lies in range(H).
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(h);
      cod.setThreshold(1e-12);
      r.x = cod.solve(c);
      const double scale = 1.0 + c.norm() + h.norm() * r.x.norm();
      if ((h * r.x - c).norm() > 1e-7 * scale) {
        r.outcome = Outcome::kUnbounded;
        return r;
      }
    }
  }
  r.objective = r.x.dot(h * r.x) - 2.0 * c.dot(r.x);
  return r;
}

Result minimize_eq(const Matrix& h, const Vector& c, const Matrix& a, const Vector& b) {
  if (a.rows() == 0) return minimize(h, c);
  const Index n = h.rows();
  Result r;
  const double bnorm = b.cwiseAbs().maxCoeff();
  if (n == 0) {
    r.x = Vector(0);
    r.outcome = bnorm <= 1e-9 ? Outcome::kSolved : Outcome::kInfeasible;
    return r;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(a.transpose());
  qr.setThreshold(1e-10);
  const Index rank = qr.rank();

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  cod.setThreshold(1e-10);
  const Vector xp = cod.solve(b);
  if ((a * xp - b).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + bnorm)) {
    r.outcome = Outcome::kInfeasible;
    return r;
  }
  const Index free_dims = n - rank;
  if (free_dims == 0) {
    r.x = xp;
    r.objective = r.x.dot(h * r.x) - 2.0 * c.dot(r.x);
    r.positive_definite = true;
    return r;
  }
  const Matrix q = qr.householderQ();
  const Matrix basis = q.rightCols(free_dims);
  const Result inner = minimize(basis.transpose() * h * basis, basis.transpose() * (c - h * xp));
  if (inner.outcome != Outcome::kSolved) {
    r.outcome = inner.outcome;
    return r;
  }
  r.x = xp + basis * inner.x;
  r.objective = r.x.dot(h * r.x) - 2.0 * c.dot(r.x);
  r.positive_definite = inner.positive_definite;
  return r;
}

}  // namespace qp

}  // namespace miosindy

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

#include "miosindy/miosr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "miosindy/box_qp.hpp"
#include "miosindy/error.hpp"

namespace miosindy {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kTimeLimit: return "TimeLimit";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kHeuristic: return "Heuristic";
  }
  return "Unknown";
}

SparseRegressionProblem SparseRegressionProblem::from_data(const Matrix& theta, const Vector& y, double lambda,
                                                           Index k) {
  require(theta.rows() == y.size(), ErrorCode::kDimensionMismatch, "from_data: theta rows must match y length");
  SparseRegressionProblem p;
  p.gram = theta.transpose() * theta;
  p.linear = theta.transpose() * y;
  p.lambda = lambda;
  p.k = k;
  return p;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxInequalities = 8;

enum class Var : unsigned char { kFree, kIn, kOut };

struct Relaxation {
  bool feasible = false;
  Vector eta;          // full length, zero on eliminated variables
  double objective = kInf;
  Vector removal_cost; // exact objective increase from zeroing each variable; empty if unknown
};

struct Node {
  std::vector<Var> state;
  double key = -kInf;  // valid lower bound for the subtree
  int depth = 0;
  std::size_t id = 0;
  std::shared_ptr<const Relaxation> relaxation;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.key != b.key) return a.key > b.key;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

double json_number(double x) { return std::isfinite(x) ? x : std::numeric_limits<double>::quiet_NaN(); }

// Branch-and-bound on the Jacobi-equilibrated problem x = s .* eta,
// H = S (G + lambda I) S, c = S c, A = A S.
class BranchAndBound {
 public:
  BranchAndBound(const SparseRegressionProblem& p, const BnbConfig& cfg) : cfg_(cfg), k_(p.k) {
    const Index d = p.gram.rows();
    scale_.resize(d);
    for (Index i = 0; i < d; ++i) {
      const double g = p.gram(i, i) + p.lambda;
      scale_[i] = g > 0.0 ? 1.0 / std::sqrt(g) : 1.0;
    }
    h_ = scale_.asDiagonal() * p.gram * scale_.asDiagonal();
    h_.diagonal() += p.lambda * scale_.cwiseProduct(scale_);
    c_ = scale_.cwiseProduct(p.linear);
    if (p.constraints && p.constraints->a.rows() > 0) {
      a_ = p.constraints->a * scale_.asDiagonal();
      b_ = p.constraints->b;
      sense_ = p.constraints->sense;
    } else {
      a_ = Matrix(0, d);
      b_ = Vector(0);
    }
    if (cfg.big_m) {
      lower_ = cfg.big_m->lower.cwiseQuotient(scale_);
      upper_ = cfg.big_m->upper.cwiseQuotient(scale_);
    }
  }

  SparseSolution run() {
    const auto start = std::chrono::steady_clock::now();
    const Index d = h_.rows();
    if (cfg_.warm_start) {
      std::vector<Index> support;
      for (Index i = 0; i < d; ++i) {
        if ((*cfg_.warm_start)[i] != 0.0) support.push_back(i);
      }
      if (static_cast<Index>(support.size()) <= k_) try_support(support);
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
    queue.push(Node{std::vector<Var>(static_cast<std::size_t>(d), Var::kFree), -kInf, 0, next_id_++, nullptr});
    if (k_ == 0) {
      queue.pop();
      Node leaf{std::vector<Var>(static_cast<std::size_t>(d), Var::kOut), -kInf, 0, 0, nullptr};
      queue.push(std::move(leaf));
    }

    std::size_t explored = 0;
    bool limited = false;
    while (!queue.empty()) {
      const double top = queue.top().key;
      if (std::isfinite(incumbent_obj_) && gap(incumbent_obj_, top) <= cfg_.gap_tolerance) break;
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (explored >= cfg_.node_limit || elapsed >= cfg_.time_limit) {
        limited = true;
        break;
      }
      Node node = queue.top();
      queue.pop();
      ++explored;
      process(std::move(node), queue);
    }
    const double bound = queue.empty() ? incumbent_obj_ : std::min(incumbent_obj_, queue.top().key);

    if (!std::isfinite(incumbent_obj_)) {
      if (!limited) {
        fail(ErrorCode::kInfeasibleConstraints,
             "solve_sparse: no support with at most " + std::to_string(k_) + " terms satisfies the constraints");
      }
      SparseSolution s;
      s.xi = Vector::Zero(d);
      s.objective = kInf;
      s.lower_bound = bound;
      s.gap = kInf;
      s.status = SolveStatus::kTimeLimit;
      s.nodes_explored = explored;
      s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return s;
    }

    SparseSolution s;
    s.xi = scale_.cwiseProduct(incumbent_);
    for (Index i = 0; i < d; ++i) {
      if (s.xi[i] != 0.0) s.support.push_back(i);
    }
    s.lower_bound = bound;
    s.nodes_explored = explored;
    s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // Gap bookkeeping happens in equilibrated units where the search ran.
    s.gap = std::max(0.0, gap(incumbent_obj_, bound));
    s.status = (!limited || s.gap <= cfg_.gap_tolerance) ? SolveStatus::kOptimal : SolveStatus::kTimeLimit;
    objective_in_equilibrated_units_ = incumbent_obj_;
    return s;
  }

  double equilibrated_objective() const { return objective_in_equilibrated_units_; }

 private:
  static double gap(double upper, double lower) { return (upper - lower) / std::max(1.0, std::abs(upper)); }

  double prune_tolerance() const { return 1e-9 * (1.0 + std::abs(incumbent_obj_)); }

  void trace(const Node& node, double lb, const char* action) const {
    if (cfg_.trace == nullptr) return;
    nlohmann::json line = {{"node_id", node.id},
                           {"depth", node.depth},
                           {"lower_bound", json_number(lb)},
                           {"incumbent", json_number(incumbent_obj_)},
                           {"action", action}};
    *cfg_.trace << line.dump() << '\n';
  }

  // Minimizes over the variables in `active` (ascending), honoring side
  // constraints and coefficient bounds; others are fixed at zero.
  qp::Result restricted(const std::vector<Index>& active) const {
    const auto n = static_cast<Index>(active.size());
    Matrix h(n, n);
    Vector c(n);
    for (Index i = 0; i < n; ++i) {
      c[i] = c_[active[i]];
      for (Index j = 0; j < n; ++j) h(i, j) = h_(active[i], active[j]);
    }
    if (cfg_.big_m) {
      Vector lo(n), hi(n);
      for (Index i = 0; i < n; ++i) {
        lo[i] = lower_[active[i]];
        hi[i] = upper_[active[i]];
      }
      return qp::minimize_box(h, c, lo, hi);
    }
    if (a_.rows() == 0) return qp::minimize(h, c);
    Matrix a(a_.rows(), n);
    for (Index i = 0; i < n; ++i) a.col(i) = a_.col(active[i]);
    if (sense_ == ConstraintSense::kEqual) return qp::minimize_eq(h, c, a, b_);

    // Inequalities: best feasible equality-constrained optimum over all
    // subsets of rows held active.
    const Index m = a.rows();
    qp::Result best;
    best.outcome = qp::Outcome::kInfeasible;
    best.objective = kInf;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<Index> rows;
      for (Index r = 0; r < m; ++r) {
        if (mask & (1u << r)) rows.push_back(r);
      }
      Matrix aw(static_cast<Index>(rows.size()), n);
      Vector bw(static_cast<Index>(rows.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        aw.row(static_cast<Index>(r)) = a.row(rows[r]);
        bw[static_cast<Index>(r)] = b_[rows[r]];
      }
      qp::Result r = qp::minimize_eq(h, c, aw, bw);
      if (r.outcome != qp::Outcome::kSolved) continue;
      const Vector slack = b_ - a * r.x;
      if (slack.size() > 0 && slack.minCoeff() < -1e-9 * (1.0 + b_.cwiseAbs().maxCoeff())) continue;
      if (r.objective < best.objective) best = std::move(r);
    }
    return best;
  }

  std::shared_ptr<const Relaxation> relax(const std::vector<Var>& state) const {
    auto out = std::make_shared<Relaxation>();
    const Index d = h_.rows();
    std::vector<Index> active;
    for (Index i = 0; i < d; ++i) {
      if (state[static_cast<std::size_t>(i)] != Var::kOut) active.push_back(i);
    }
    out->eta = Vector::Zero(d);
    const bool plain = a_.rows() == 0 && !cfg_.big_m;
    if (plain && !active.empty()) {
      const auto n = static_cast<Index>(active.size());
      Matrix h(n, n);
      Vector c(n);
      for (Index i = 0; i < n; ++i) {
        c[i] = c_[active[i]];
        for (Index j = 0; j < n; ++j) h(i, j) = h_(active[i], active[j]);
      }
      Eigen::LLT<Matrix> llt(h);
      if (llt.info() == Eigen::Success && llt.rcond() > 1e-13) {
        const Vector x = llt.solve(c);
        const Vector inv_diag = llt.solve(Matrix::Identity(n, n)).diagonal();
        out->removal_cost = Vector::Zero(d);
        for (Index i = 0; i < n; ++i) {
          out->eta[active[i]] = x[i];
          out->removal_cost[active[i]] = inv_diag[i] > 0.0 ? x[i] * x[i] / inv_diag[i] : 0.0;
        }
        out->objective = -c.dot(x);
        out->feasible = true;
        return out;
      }
    }
    const qp::Result r = restricted(active);
    if (r.outcome == qp::Outcome::kUnbounded) {
      fail(ErrorCode::kInvalidProblem, "solve_sparse: relaxation is unbounded (Gram matrix not PSD?)");
    }
    if (r.outcome != qp::Outcome::kSolved) return out;
    for (std::size_t i = 0; i < active.size(); ++i) out->eta[active[i]] = r.x[static_cast<Index>(i)];
    out->objective = r.objective;
    out->feasible = true;
    return out;
  }

  void offer(const Vector& eta, double objective) {
    if (objective < incumbent_obj_) {
      incumbent_obj_ = objective;
      incumbent_ = eta;
    }
  }

  // Refit on a support and offer it as incumbent.
  void try_support(std::vector<Index> support) {
    std::sort(support.begin(), support.end());
    if (!tried_.insert(support).second) return;
    const qp::Result r = restricted(support);
    if (r.outcome != qp::Outcome::kSolved) return;
    Vector eta = Vector::Zero(h_.rows());
    for (std::size_t i = 0; i < support.size(); ++i) eta[support[i]] = r.x[static_cast<Index>(i)];
    offer(eta, r.objective);
  }

  void process(Node node, std::priority_queue<Node, std::vector<Node>, NodeOrder>& queue) {
    if (!node.relaxation) node.relaxation = relax(node.state);
    const Relaxation& rel = *node.relaxation;
    if (!rel.feasible) {
      trace(node, kInf, "infeasible");
      return;
    }
    double lb = std::max(node.key, rel.objective);
    if (lb >= incumbent_obj_ - prune_tolerance()) {
      trace(node, lb, "prune");
      return;
    }

    const Index d = h_.rows();
    Index forced = 0;
    std::vector<Index> free;
    Index nonzero = 0;
    for (Index i = 0; i < d; ++i) {
      const Var v = node.state[static_cast<std::size_t>(i)];
      if (v == Var::kIn) ++forced;
      if (v == Var::kFree) free.push_back(i);
      if (v != Var::kOut && rel.eta[i] != 0.0) ++nonzero;
    }
    if (forced + static_cast<Index>(free.size()) <= k_ || nonzero <= k_) {
      offer(rel.eta, rel.objective);
      trace(node, lb, "leaf");
      return;
    }

    // Free variables by decreasing |eta|, lowest index first on ties.
    std::stable_sort(free.begin(), free.end(),
                     [&](Index a, Index b) { return std::abs(rel.eta[a]) > std::abs(rel.eta[b]); });
    const Index room = k_ - forced;
    std::vector<Index> support;
    for (Index i = 0; i < d; ++i) {
      if (node.state[static_cast<std::size_t>(i)] == Var::kIn) support.push_back(i);
    }
    support.insert(support.end(), free.begin(), free.begin() + room);
    try_support(support);

    if (rel.removal_cost.size() > 0) {
      // At least `must_drop` free variables leave the support and dropping a
      // set costs at least as much as dropping any one of its members.
      const auto must_drop = static_cast<std::size_t>(static_cast<Index>(free.size()) - room);
      std::vector<double> costs;
      for (Index i : free) costs.push_back(rel.removal_cost[i]);
      std::nth_element(costs.begin(), costs.begin() + static_cast<std::ptrdiff_t>(must_drop - 1), costs.end());
      lb = std::max(lb, rel.objective + costs[must_drop - 1]);
    }
    if (lb >= incumbent_obj_ - prune_tolerance()) {
      trace(node, lb, "prune");
      return;
    }

    const Index j = free.front();
    Node in{node.state, lb, node.depth + 1, next_id_++, node.relaxation};
    in.state[static_cast<std::size_t>(j)] = Var::kIn;
    if (forced + 1 == k_) {
      for (Index i : free) {
        if (i != j) in.state[static_cast<std::size_t>(i)] = Var::kOut;
      }
      in.relaxation = nullptr;
    }
    Node out{node.state, lb, node.depth + 1, next_id_++, nullptr};
    out.state[static_cast<std::size_t>(j)] = Var::kOut;
    if (rel.removal_cost.size() > 0) out.key = std::max(lb, rel.objective + rel.removal_cost[j]);
    trace(node, lb, "branch");
    queue.push(std::move(in));
    queue.push(std::move(out));
  }

  const BnbConfig& cfg_;
  Index k_;
  Vector scale_;
  Matrix h_;
  Vector c_;
  Matrix a_;
  Vector b_;
  ConstraintSense sense_ = ConstraintSense::kEqual;
  Vector lower_, upper_;
  Vector incumbent_;
  double incumbent_obj_ = kInf;
  std::set<std::vector<Index>> tried_;
  std::size_t next_id_ = 0;
  double objective_in_equilibrated_units_ = kInf;
};

void validate(const SparseRegressionProblem& p, const BnbConfig& cfg) {
  const Index d = p.gram.rows();
  require(p.gram.cols() == d && p.linear.size() == d, ErrorCode::kInvalidProblem,
          "solve_sparse: Gram matrix and linear term dimensions disagree");
  require(p.gram.allFinite() && p.linear.allFinite(), ErrorCode::kInvalidProblem, "solve_sparse: non-finite data");
  if (d > 0) {
    const double scale = std::max(1.0, p.gram.cwiseAbs().maxCoeff());
    require((p.gram - p.gram.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale, ErrorCode::kInvalidProblem,
            "solve_sparse: Gram matrix is not symmetric");
  }
  require(std::isfinite(p.lambda) && p.lambda >= 0.0, ErrorCode::kInvalidProblem, "solve_sparse: lambda must be >= 0");
  require(p.k >= 0 && p.k <= d, ErrorCode::kInvalidProblem,
          "solve_sparse: sparsity " + std::to_string(p.k) + " outside [0, " + std::to_string(d) + "]");
  require(cfg.gap_tolerance > 0.0 && cfg.time_limit > 0.0, ErrorCode::kInvalidProblem,
          "solve_sparse: gap tolerance and time limit must be positive");
  if (p.constraints) {
    const auto& sc = *p.constraints;
    require(sc.a.rows() == sc.b.size() && (sc.a.rows() == 0 || sc.a.cols() == d), ErrorCode::kInvalidProblem,
            "solve_sparse: constraint dimensions disagree with the problem");
    require(sc.a.allFinite() && sc.b.allFinite(), ErrorCode::kInvalidProblem, "solve_sparse: non-finite constraints");
    require(sc.sense == ConstraintSense::kEqual || sc.a.rows() <= kMaxInequalities, ErrorCode::kInvalidProblem,
            "solve_sparse: at most 8 inequality rows are supported");
    require(!cfg.big_m || sc.a.rows() == 0, ErrorCode::kInvalidProblem,
            "solve_sparse: coefficient bounds cannot be combined with side constraints");
  }
  if (cfg.big_m) {
    require(cfg.big_m->lower.size() == d && cfg.big_m->upper.size() == d, ErrorCode::kInvalidProblem,
            "solve_sparse: coefficient bound length mismatch");
    require((cfg.big_m->lower.array() <= 0.0).all() && (cfg.big_m->upper.array() >= 0.0).all(),
            ErrorCode::kInvalidProblem, "solve_sparse: coefficient bounds must bracket zero");
  }
  if (cfg.warm_start) {
    require(cfg.warm_start->size() == d, ErrorCode::kInvalidProblem, "solve_sparse: warm start length mismatch");
  }
}

}  // namespace

SparseSolution solve_sparse(const SparseRegressionProblem& problem, const BnbConfig& cfg) {
  validate(problem, cfg);
  BranchAndBound bnb(problem, cfg);
  SparseSolution s = bnb.run();
  if (std::isfinite(s.objective)) {
    // Report the objective in original units; the bound moves by the same
    // rounding-level amount.
    const double equilibrated = bnb.equilibrated_objective();
    s.objective = ridge_objective(problem.gram, problem.linear, problem.lambda, s.xi);
    s.lower_bound = std::min(s.lower_bound + (s.objective - equilibrated), s.objective);
    s.gap = std::max(0.0, (s.objective - s.lower_bound) / std::max(1.0, std::abs(s.objective)));
  }
  return s;
}

JointSolution solve_joint(const Matrix& theta, const Matrix& targets, double lambda, Index k_global,
                          const std::optional<SideConstraints>& constraints, const BnbConfig& cfg) {
  require(theta.rows() == targets.rows(), ErrorCode::kDimensionMismatch,
          "solve_joint: theta and targets row counts differ");
  const Index d = theta.cols();
  const Index m = targets.cols();
  require(k_global >= 0 && k_global <= d * m, ErrorCode::kInvalidProblem, "solve_joint: k_global exceeds D * d");
  const Matrix gram = theta.transpose() * theta;
  SparseRegressionProblem p;
  p.gram = Matrix::Zero(d * m, d * m);
  p.linear.resize(d * m);
  for (Index j = 0; j < m; ++j) {
    p.gram.block(j * d, j * d, d, d) = gram;
    p.linear.segment(j * d, d) = theta.transpose() * targets.col(j);
  }
  p.lambda = lambda;
  p.k = k_global;
  p.constraints = constraints;

  JointSolution out;
  out.stacked = solve_sparse(p, cfg);
  for (Index j = 0; j < m; ++j) {
    SparseSolution s = out.stacked;
    s.xi = out.stacked.xi.segment(j * d, d);
    s.support.clear();
    for (Index i = 0; i < d; ++i) {
      if (s.xi[i] != 0.0) s.support.push_back(i);
    }
    s.objective = ridge_objective(gram, p.linear.segment(j * d, d), lambda, s.xi);
    out.per_dimension.push_back(std::move(s));
  }
  return out;
}

Vector unbias(const std::vector<Index>& support, const Matrix& theta, const Vector& y) {
  require(theta.rows() == y.size(), ErrorCode::kDimensionMismatch, "unbias: theta rows must match y length");
  Vector xi = Vector::Zero(theta.cols());
  if (support.empty()) return xi;
  Matrix sub(theta.rows(), static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    require(support[i] >= 0 && support[i] < theta.cols(), ErrorCode::kInvalidArgument, "unbias: support index out of range");
    sub.col(static_cast<Index>(i)) = theta.col(support[i]);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(sub);
  qr.setThreshold(1e-12);
  if (qr.rank() < sub.cols()) {
    fail(ErrorCode::kSingularSupport, "unbias: support columns are linearly dependent");
  }
  const Vector coef = qr.solve(y);
  for (std::size_t i = 0; i < support.size(); ++i) xi[support[i]] = coef[static_cast<Index>(i)];
  return xi;
}

}  // namespace miosindy

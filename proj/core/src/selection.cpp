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

#include "miosindy/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "miosindy/error.hpp"
#include "miosindy/metrics.hpp"

namespace miosindy {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kMiosr: return "miosr";
    case Algorithm::kStlsq: return "stlsq";
    case Algorithm::kSsr: return "ssr";
    case Algorithm::kEnsembleStlsq: return "estlsq";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
  for (Algorithm a : {Algorithm::kMiosr, Algorithm::kStlsq, Algorithm::kSsr, Algorithm::kEnsembleStlsq}) {
    if (to_string(a) == name) return a;
  }
  fail(ErrorCode::kInvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

SelectionData split_rows(const CandidateLibrary& lib, double fraction) {
  require(fraction > 0.0 && fraction < 1.0, ErrorCode::kInvalidArgument, "split_rows: fraction must be in (0, 1)");
  const Index n = lib.theta.rows();
  const auto train = static_cast<Index>(std::floor(fraction * static_cast<double>(n)));
  require(train >= 1 && train < n, ErrorCode::kTooFewSamples, "split_rows: too few rows to split");
  return SelectionData{lib.theta.topRows(train), lib.targets.topRows(train), lib.theta.bottomRows(n - train),
                       lib.targets.bottomRows(n - train)};
}

namespace {

// Validation residuals below this fraction of the target energy are roundoff; flooring them
// keeps AICc from ranking models by floating-point noise on exact data.
constexpr double kRoundoffRss = 1e-24;

struct Candidate {
  Hyperparameters hp;
  Matrix xi;                             // terms x equations
  std::vector<SparseSolution> solutions;
};

void record(SolverStats& stats, const SparseSolution& s) {
  ++stats.solves;
  if (s.status != SolveStatus::kOptimal) ++stats.non_optimal;
  if (std::isfinite(s.gap)) stats.max_gap = std::max(stats.max_gap, s.gap);
  if (!std::isfinite(s.objective)) stats.max_gap = std::numeric_limits<double>::infinity();
  stats.max_time = std::max(stats.max_time, s.wall_time);
}

Index nonzeros(const Vector& v) { return static_cast<Index>((v.array() != 0.0).count()); }

// Less is better: AICc, then fewer terms, then earlier grid point.
bool better(double a_score, Index a_terms, Index a_grid, double b_score, Index b_terms, Index b_grid) {
  const double tol = 1e-12 * std::max(1.0, std::max(std::abs(a_score), std::abs(b_score)));
  if (a_score < b_score - tol) return true;
  if (a_score > b_score + tol) return false;
  if (a_terms != b_terms) return a_terms < b_terms;
  return a_grid < b_grid;
}

class Fitter {
 public:
  Fitter(const SelectionData& data, const AlgorithmSpec& spec, SelectionResult& result)
      : data_(data), spec_(spec), result_(result) {}

  std::vector<Candidate> run() {
    switch (spec_.algorithm) {
      case Algorithm::kMiosr: miosr(); break;
      case Algorithm::kStlsq:
      case Algorithm::kEnsembleStlsq: thresholded(); break;
      case Algorithm::kSsr: ssr_path(); break;
    }
    return std::move(candidates_);
  }

  const std::exception_ptr& last_error() const { return last_error_; }

 private:
  Index terms() const { return data_.train_theta.cols(); }
  Index equations() const { return data_.train_targets.cols(); }

  // Refits on the support with ordinary least squares when requested.
  void finish(Candidate c) {
    if (spec_.unbias) {
      for (Index j = 0; j < equations(); ++j) {
        std::vector<Index> support;
        for (Index i = 0; i < terms(); ++i) {
          if (c.xi(i, j) != 0.0) support.push_back(i);
        }
        c.xi.col(j) = unbias(support, data_.train_theta, data_.train_targets.col(j));
      }
    }
    candidates_.push_back(std::move(c));
  }

  template <typename F>
  void attempt(const Hyperparameters& hp, F&& fit) {
    try {
      fit();
    } catch (const Error& e) {
      last_error_ = std::current_exception();
      result_.log.push_back("grid point " + std::to_string(hp.grid_index) + " (alpha " + std::to_string(hp.alpha) +
                            ", threshold " + std::to_string(hp.threshold) + ", sparsity " +
                            std::to_string(hp.sparsity) + ") skipped: " + e.what());
    }
  }

  void miosr() {
    const Matrix gram = data_.train_theta.transpose() * data_.train_theta;
    const Matrix linear = data_.train_theta.transpose() * data_.train_targets;
    Index grid = 0;
    for (double alpha : spec_.alphas) {
      for (Index k : spec_.sparsities) {
        Hyperparameters hp{grid++, alpha, 0.0, k};
        attempt(hp, [&] {
          Candidate c{hp, Matrix::Zero(terms(), equations()), {}};
          if (spec_.joint) {
            const Index budget = std::min(k, terms() * equations());
            const JointSolution js = solve_joint(data_.train_theta, data_.train_targets, alpha, budget,
                                                 spec_.constraints, spec_.bnb);
            record(result_.stats, js.stacked);
            for (Index j = 0; j < equations(); ++j) c.xi.col(j) = js.per_dimension[static_cast<std::size_t>(j)].xi;
            c.solutions = js.per_dimension;
          } else {
            for (Index j = 0; j < equations(); ++j) {
              SparseRegressionProblem p;
              p.gram = gram;
              p.linear = linear.col(j);
              p.lambda = alpha;
              p.k = std::min(k, terms());
              SparseSolution s = solve_sparse(p, spec_.bnb);
              record(result_.stats, s);
              c.xi.col(j) = s.xi;
              c.solutions.push_back(std::move(s));
            }
          }
          finish(std::move(c));
        });
      }
    }
  }

  void thresholded() {
    Index grid = 0;
    for (double alpha : spec_.alphas) {
      for (double threshold : spec_.thresholds) {
        Hyperparameters hp{grid++, alpha, threshold, 0};
        attempt(hp, [&] {
          Candidate c{hp, Matrix::Zero(terms(), equations()), {}};
          StlsqConfig base{threshold, alpha, spec_.ensemble.base.max_iter};
          for (Index j = 0; j < equations(); ++j) {
            SparseSolution s;
            if (spec_.algorithm == Algorithm::kStlsq) {
              s = stlsq(data_.train_theta, data_.train_targets.col(j), base);
            } else {
              EnsembleConfig ec = spec_.ensemble;
              ec.base = base;
              ec.seed = spec_.ensemble.seed ^ static_cast<std::uint64_t>(j);
              s = ensemble_stlsq(data_.train_theta, data_.train_targets.col(j), ec);
            }
            c.xi.col(j) = s.xi;
            c.solutions.push_back(std::move(s));
          }
          finish(std::move(c));
        });
      }
    }
  }

  void ssr_path() {
    Index grid = 0;
    for (double alpha : spec_.alphas) {
      std::vector<std::vector<SparseSolution>> paths;
      Hyperparameters first{grid, alpha, 0.0, terms()};
      bool ok = true;
      attempt(first, [&] {
        for (Index j = 0; j < equations(); ++j) paths.push_back(ssr(data_.train_theta, data_.train_targets.col(j), alpha));
      });
      if (paths.size() != static_cast<std::size_t>(equations())) ok = false;
      for (Index level = 0; level < terms(); ++level) {
        Hyperparameters hp{grid++, alpha, 0.0, terms() - level};
        if (!ok) continue;
        attempt(hp, [&] {
          Candidate c{hp, Matrix::Zero(terms(), equations()), {}};
          for (Index j = 0; j < equations(); ++j) {
            const SparseSolution& s = paths[static_cast<std::size_t>(j)][static_cast<std::size_t>(level)];
            c.xi.col(j) = s.xi;
            c.solutions.push_back(s);
          }
          finish(std::move(c));
        });
      }
    }
  }

  const SelectionData& data_;
  const AlgorithmSpec& spec_;
  SelectionResult& result_;
  std::vector<Candidate> candidates_;
  std::exception_ptr last_error_;
};

}  // namespace

SelectionResult select_model(const SelectionData& data, const AlgorithmSpec& spec, const SelectionConfig& cfg) {
  require(data.train_theta.rows() == data.train_targets.rows() && data.val_theta.rows() == data.val_targets.rows(),
          ErrorCode::kDimensionMismatch, "select_model: theta and targets row counts differ");
  require(data.train_theta.cols() == data.val_theta.cols() && data.train_targets.cols() == data.val_targets.cols(),
          ErrorCode::kDimensionMismatch, "select_model: train and validation libraries differ");
  require(!spec.alphas.empty(), ErrorCode::kInvalidArgument, "select_model: empty alpha grid");
  require(spec.algorithm != Algorithm::kMiosr || !spec.sparsities.empty(), ErrorCode::kInvalidArgument,
          "select_model: empty sparsity grid");
  require((spec.algorithm != Algorithm::kStlsq && spec.algorithm != Algorithm::kEnsembleStlsq) ||
              !spec.thresholds.empty(),
          ErrorCode::kInvalidArgument, "select_model: empty threshold grid");
  require(!spec.joint || spec.algorithm == Algorithm::kMiosr, ErrorCode::kInvalidArgument,
          "select_model: joint fitting is MIOSR only");
  require(!spec.joint || !cfg.dimensionwise, ErrorCode::kInvalidArgument,
          "select_model: joint fitting needs global (non-dimensionwise) selection");

  SelectionResult result;
  Fitter fitter(data, spec, result);
  const std::vector<Candidate> candidates = fitter.run();
  if (candidates.empty()) {
    if (fitter.last_error()) std::rethrow_exception(fitter.last_error());
    fail(ErrorCode::kInvalidArgument, "select_model: no grid point produced a model");
  }

  const Index eqs = data.train_targets.cols();
  const Index m = data.val_theta.rows();
  const Index dims = cfg.dimensionwise ? eqs : 1;
  std::vector<const Candidate*> best(static_cast<std::size_t>(dims), nullptr);
  std::vector<double> best_score(static_cast<std::size_t>(dims), std::numeric_limits<double>::infinity());
  std::vector<Index> best_terms(static_cast<std::size_t>(dims), 0);
  std::vector<bool> best_floored(static_cast<std::size_t>(dims), false);

  std::vector<double> rss_floor(static_cast<std::size_t>(dims));
  for (Index g = 0; g < dims; ++g) {
    const double energy = cfg.dimensionwise ? data.val_targets.col(g).squaredNorm() : data.val_targets.squaredNorm();
    rss_floor[static_cast<std::size_t>(g)] = kRoundoffRss * energy;
  }

  for (const Candidate& c : candidates) {
    const Matrix residual = data.val_targets - data.val_theta * c.xi;
    for (Index g = 0; g < dims; ++g) {
      double rss = 0.0;
      Index k = 0;
      Index samples = 0;
      if (cfg.dimensionwise) {
        rss = residual.col(g).squaredNorm();
        k = nonzeros(c.xi.col(g));
        samples = m;
      } else {
        rss = residual.squaredNorm();
        k = static_cast<Index>((c.xi.array() != 0.0).count());
        samples = m * eqs;
      }
      double score = 0.0;
      bool floored = rss < rss_floor[static_cast<std::size_t>(g)];
      if (floored) rss = rss_floor[static_cast<std::size_t>(g)];
      try {
        bool zero = false;
        score = aicc(rss, samples, k, &zero);
        floored = floored || zero;
      } catch (const Error& e) {
        result.log.push_back("grid point " + std::to_string(c.hp.grid_index) + " not scored: " + e.what());
        continue;
      }
      const auto gi = static_cast<std::size_t>(g);
      if (best[gi] == nullptr ||
          better(score, k, c.hp.grid_index, best_score[gi], best_terms[gi], best[gi]->hp.grid_index)) {
        best[gi] = &c;
        best_score[gi] = score;
        best_terms[gi] = k;
        best_floored[gi] = floored;
      }
    }
  }

  result.coefficients = Matrix::Zero(data.train_theta.cols(), eqs);
  for (Index j = 0; j < eqs; ++j) {
    const auto gi = static_cast<std::size_t>(cfg.dimensionwise ? j : 0);
    const Candidate* c = best[gi];
    require(c != nullptr, ErrorCode::kDegenerateSampleSize,
            "select_model: no grid point could be scored for equation " + std::to_string(j));
    result.coefficients.col(j) = c->xi.col(j);
    result.solutions.push_back(c->solutions[static_cast<std::size_t>(j)]);
    result.chosen.push_back(c->hp);
    result.rss_floored = result.rss_floored || best_floored[gi];
  }
  for (double s : best_score) result.aicc.push_back(s);
  return result;
}

}  // namespace miosindy

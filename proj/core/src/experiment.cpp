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

#include "miosindy/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

#include "miosindy/differentiation.hpp"
#include "miosindy/error.hpp"
#include "miosindy/field.hpp"
#include "miosindy/library.hpp"
#include "miosindy/pde_systems.hpp"
#include "miosindy/rng.hpp"
#include "miosindy/systems.hpp"
#include "miosindy/weak_form.hpp"

namespace miosindy {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Matrix select_columns(const Matrix& m, const std::vector<std::size_t>& cols) {
  Matrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = m.col(static_cast<Index>(cols[j]));
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

std::vector<std::string> term_labels(const std::vector<Term>& terms) {
  std::vector<std::string> out;
  for (const auto& t : terms) out.push_back(t.label);
  return out;
}

std::vector<Index> support_of(const Vector& v) {
  std::vector<Index> out;
  for (Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) out.push_back(i);
  }
  return out;
}

void merge_stats(SolverStats& into, const SolverStats& from) {
  into.solves += from.solves;
  into.non_optimal += from.non_optimal;
  into.max_gap = std::max(into.max_gap, from.max_gap);
  into.max_time = std::max(into.max_time, from.max_time);
}

// Everything an algorithm needs to be fitted and scored within one trial.
struct TrialProblem {
  SelectionData data;
  Vector scales;  // library column factors; coefficients are divided by these
  Matrix truth;
  std::optional<SideConstraints> constraints;  // original units
  std::vector<Matrix> test_thetas;
  bool achievability = false;
  std::uint64_t seed = 0;
};

// Equation-by-equation fit with a fixed per-equation sparsity (MIOSR and SSR budget, E-STLSQ top_k).
SelectionResult fit_true_sparsity(const SelectionData& data, AlgorithmSpec spec, const SelectionConfig& sel,
                                  const std::vector<Index>& ks) {
  if (spec.joint) {
    Index total = 0;
    for (Index k : ks) total += k;
    spec.sparsities = {total};
    return select_model(data, spec, sel);
  }
  SelectionResult out;
  const Index eqs = data.train_targets.cols();
  out.coefficients = Matrix::Zero(data.train_theta.cols(), eqs);
  for (Index j = 0; j < eqs; ++j) {
    SelectionData one{data.train_theta, data.train_targets.col(j), data.val_theta, data.val_targets.col(j)};
    AlgorithmSpec s = spec;
    const Index k = ks[static_cast<std::size_t>(j)];
    if (s.algorithm == Algorithm::kEnsembleStlsq) {
      s.ensemble.top_k = k;
      s.ensemble.seed = spec.ensemble.seed ^ static_cast<std::uint64_t>(j);
    } else {
      s.sparsities = {k};
    }
    SelectionResult r = select_model(one, s, sel);
    out.coefficients.col(j) = r.coefficients.col(0);
    out.solutions.push_back(r.solutions.at(0));
    out.chosen.push_back(r.chosen.at(0));
    out.aicc.push_back(r.aicc.at(0));
    merge_stats(out.stats, r.stats);
    for (auto& line : r.log) out.log.push_back("equation " + std::to_string(j) + ": " + line);
    out.rss_floored = out.rss_floored || r.rss_floored;
  }
  return out;
}

SelectionResult fit_spec(const SelectionData& data, const AlgorithmSpec& spec, const SelectionConfig& sel,
                         const std::optional<std::vector<Index>>& ks) {
  const bool fixed = ks && spec.algorithm != Algorithm::kStlsq;
  return fixed ? fit_true_sparsity(data, spec, sel, *ks) : select_model(data, spec, sel);
}

// Single-point specs covering the algorithm's grid, in selection order.
std::vector<AlgorithmSpec> grid_points(const AlgorithmSpec& spec, bool fixed_sparsity) {
  std::vector<AlgorithmSpec> out;
  for (double alpha : spec.alphas) {
    AlgorithmSpec s = spec;
    s.alphas = {alpha};
    switch (spec.algorithm) {
      case Algorithm::kStlsq:
      case Algorithm::kEnsembleStlsq:
        for (double t : spec.thresholds) {
          s.thresholds = {t};
          out.push_back(s);
        }
        break;
      case Algorithm::kMiosr:
      case Algorithm::kSsr:
        if (fixed_sparsity) {
          out.push_back(s);
        } else {
          for (Index k : spec.sparsities) {
            s.sparsities = {k};
            out.push_back(s);
          }
        }
        break;
    }
  }
  return out;
}

AlgorithmOutcome fit_algorithm(const AlgorithmSettings& settings, const TrialProblem& problem,
                               const ExperimentConfig& cfg) {
  AlgorithmOutcome out;
  out.label = settings.label;
  out.algorithm = std::string(to_string(settings.spec.algorithm));

  AlgorithmSpec spec = settings.spec;
  spec.ensemble.seed ^= problem.seed;
  const Index terms = problem.data.train_theta.cols();
  const Index eqs = problem.data.train_targets.cols();
  if (settings.constraints == "gradient") {
    require(problem.constraints.has_value(), ErrorCode::kConfigError,
            "gradient constraints are only defined for the constraints experiment");
    // Constraints act on original-unit coefficients xi = xi_scaled / scales.
    SideConstraints scaled = *problem.constraints;
    for (Index e = 0; e < eqs; ++e) {
      for (Index i = 0; i < terms; ++i) scaled.a.col(e * terms + i) /= problem.scales[i];
    }
    spec.constraints = scaled;
  }
  std::optional<std::vector<Index>> ks;
  if (settings.true_sparsity) {
    ks.emplace();
    for (Index j = 0; j < eqs; ++j) {
      ks->push_back(static_cast<Index>((problem.truth.col(j).array() != 0.0).count()));
    }
  }

  const auto start = Clock::now();
  SelectionResult result;
  if (problem.achievability) {
    // Best grid point judged against the known model: support first, then coefficient error.
    double best_tpr = -1.0, best_err = std::numeric_limits<double>::infinity();
    for (const auto& point : grid_points(spec, ks.has_value())) {
      SelectionResult r;
      try {
        r = fit_spec(problem.data, point, cfg.selection, ks);
      } catch (const Error& e) {
        out.log.push_back(std::string("grid point skipped: ") + e.what());
        continue;
      }
      const Matrix coef = r.coefficients.array().colwise() / problem.scales.array();
      const double tpr = true_positivity_rate(problem.truth, coef);
      const double err = coefficient_error(problem.truth, coef);
      merge_stats(out.stats, r.stats);
      if (tpr > best_tpr || (tpr == best_tpr && err < best_err)) {
        best_tpr = tpr;
        best_err = err;
        result = std::move(r);
      }
    }
    require(best_tpr >= 0.0, ErrorCode::kInvalidProblem, "every grid point failed");
  } else {
    result = fit_spec(problem.data, spec, cfg.selection, ks);
    out.stats = result.stats;
  }
  out.fit_seconds = seconds_since(start);

  out.coefficients = result.coefficients.array().colwise() / problem.scales.array();
  out.chosen = result.chosen;
  for (auto& line : result.log) out.log.push_back(std::move(line));
  for (const auto& s : result.solutions) {
    out.status.emplace_back(to_string(s.status));
    out.gap.push_back(s.gap);
    out.nodes.push_back(s.nodes_explored);
  }

  out.metrics.tpr = true_positivity_rate(problem.truth, out.coefficients);
  out.metrics.coef_error = coefficient_error(problem.truth, out.coefficients);
  out.metrics.aicc = 0.0;
  for (double a : result.aicc) out.metrics.aicc += a;
  if (problem.test_thetas.empty()) {
    out.metrics.rmse = kNaN;
  } else {
    double sum = 0.0;
    for (const auto& theta : problem.test_thetas) sum += derivative_rmse(out.coefficients, problem.truth, theta);
    out.metrics.rmse = sum / static_cast<double>(problem.test_thetas.size());
  }
  out.success = true;
  for (Index j = 0; j < eqs; ++j) {
    out.success = out.success && support_of(out.coefficients.col(j)) == support_of(problem.truth.col(j));
  }
  if (problem.constraints) {
    const Vector stacked = out.coefficients.reshaped();
    const Vector residual = (problem.constraints->a * stacked - problem.constraints->b).cwiseAbs();
    out.violation = residual.sum() / static_cast<double>(residual.size());
    out.max_violation = residual.maxCoeff();
  }
  return out;
}

void fit_all(const ExperimentConfig& cfg, const TrialProblem& problem, ExperimentRecord& rec) {
  for (const auto& a : cfg.algorithms) {
    try {
      rec.algorithms.push_back(fit_algorithm(a, problem, cfg));
    } catch (const std::exception& e) {
      AlgorithmOutcome failed;
      failed.label = a.label;
      failed.algorithm = std::string(to_string(a.spec.algorithm));
      failed.error = e.what();
      rec.algorithms.push_back(std::move(failed));
    }
  }
}

void run_ode_trial(const ExperimentConfig& cfg, ExperimentRecord& rec, const RngStream& base, std::size_t condition) {
  const OdeSystem& sys = find_system(cfg.system);
  const auto lib_vars = cfg.library.variables.empty() ? all_indices(sys.dim()) : cfg.library.variables;
  const auto tgt_vars = cfg.library.targets.empty() ? all_indices(sys.dim()) : cfg.library.targets;
  RngStream ic_rng = base.substream(0);
  RngStream test_rng = base.substream(1);
  const RngStream cond_rng = base.substream(2).substream(condition);
  RngStream noise_rng = cond_rng.substream(0);

  auto start = Clock::now();
  const Vector x0 = sample_initial_condition(sys, ic_rng);
  rec.initial_condition.assign(x0.begin(), x0.end());
  const Trajectory clean = rk4_integrate(sys, x0, rec.train_seconds, cfg.dt);
  const Trajectory noisy = add_noise(clean, rec.noise_percent, noise_rng);
  rec.simulate_seconds = seconds_since(start);

  std::vector<std::string> names;
  for (std::size_t v : lib_vars) names.push_back(sys.variables()[v]);
  for (std::size_t v : tgt_vars) rec.targets.push_back(sys.variables()[v] + "_t");
  const auto terms = polynomial_terms(lib_vars.size(), cfg.library.degree, cfg.library.include_bias, names);
  rec.terms = term_labels(terms);

  TrialProblem problem;
  problem.seed = rec.seed;
  problem.truth = sys.true_coefficients(terms, lib_vars, tgt_vars);
  problem.scales = Vector::Ones(static_cast<Index>(terms.size()));
  start = Clock::now();
  if (!cfg.library.weak) {
    CandidateLibrary lib;
    lib.terms = terms;
    lib.theta = evaluate_terms(terms, select_columns(noisy.states, lib_vars));
    lib.targets = select_columns(differentiate(noisy, cfg.differentiation), tgt_vars);
    lib.scales = problem.scales;
    problem.data = split_rows(lib, cfg.selection.split_fraction);
  } else {
    // Weak libraries split the trajectory in time; the validation half is scored in the strong
    // form below the noise cutoff and in the weak form at or above it.
    const Index n = noisy.samples();
    const auto n_train = static_cast<Index>(std::floor(cfg.selection.split_fraction * static_cast<double>(n)));
    const Trajectory train = noisy.slice(0, n_train);
    const Trajectory val = noisy.slice(n_train, n);
    WeakConfig wc{cfg.library.num_domains, cfg.library.points_per_domain, 0, cond_rng.substream(1).next_u64()};
    const CandidateLibrary train_lib = normalize_columns(weak_ode_library(train, terms, wc));
    problem.scales = train_lib.scales;
    problem.data.train_theta = train_lib.theta;
    problem.data.train_targets = train_lib.targets;
    if (rec.noise_percent < cfg.library.weak_validation_noise) {
      problem.data.val_theta = evaluate_terms(terms, val.states);
      problem.data.val_targets = differentiate(val, Differentiator{cfg.library.validation_method, cfg.library.validation_window});
    } else {
      wc.seed = cond_rng.substream(2).next_u64();
      const CandidateLibrary val_lib = weak_ode_library(val, terms, wc);
      problem.data.val_theta = val_lib.theta;
      problem.data.val_targets = val_lib.targets;
    }
    problem.data.val_theta = problem.data.val_theta.array().rowwise() / problem.scales.transpose().array();
  }
  if (cfg.experiment == ExperimentKind::kConstraints) {
    require(lib_vars.size() == tgt_vars.size(), ErrorCode::kConfigError,
            "gradient constraints need as many targets as library variables");
    problem.constraints = gradient_constraints(terms, lib_vars.size());
  }
  rec.library_seconds = seconds_since(start);

  for (int i = 0; i < cfg.test_trajectories; ++i) {
    const Vector x = sample_initial_condition(sys, test_rng);
    const Trajectory test = rk4_integrate(sys, x, cfg.test_seconds, cfg.dt);
    problem.test_thetas.push_back(evaluate_terms(terms, select_columns(test.states, lib_vars)));
  }
  rec.truth = problem.truth;
  fit_all(cfg, problem, rec);
}

void add_field_noise(Field& field, double percent, RngStream& rng) {
  if (percent == 0.0) return;
  double sq = 0.0;
  for (double v : field.values) sq += v * v;
  const double sd = percent / 100.0 * std::sqrt(sq / static_cast<double>(field.values.size()));
  for (double& v : field.values) v += rng.normal(0.0, sd);
}

void run_pde_trial(const ExperimentConfig& cfg, ExperimentRecord& rec, const RngStream& base, std::size_t condition) {
  RngStream ic_rng = base.substream(0);
  const RngStream cond_rng = base.substream(2).substream(condition);
  RngStream noise_rng = cond_rng.substream(0);

  auto start = Clock::now();
  Field field;
  if (cfg.system == "ks") {
    const Vector u0 = ks_initial_condition(cfg.pde.grid_points, ic_rng);
    rec.initial_condition.assign(u0.begin(), u0.end());
    field = simulate_ks(u0, cfg.pde.t_end, cfg.pde.dt_out);
  } else {
    const ReactionDiffusionOptions opts;
    const double scale = ic_rng.uniform(0.95, 1.05);
    const double offset = ic_rng.uniform(0.0, 2.0 * std::numbers::pi);
    rec.initial_condition = {scale, offset};
    const auto [u0, v0] = spiral_initial_condition(cfg.pde.grid_points, opts.half_width, scale, offset);
    field = simulate_reaction_diffusion(u0, v0, cfg.pde.t_end, cfg.pde.dt_out, opts);
  }
  add_field_noise(field, rec.noise_percent, noise_rng);
  rec.simulate_seconds = seconds_since(start);

  std::vector<std::string> axes;
  for (const auto& a : field.space) axes.push_back(a.name);
  const auto terms = pde_terms(field.variables, axes, cfg.library.degree, cfg.library.max_deriv);
  rec.terms = term_labels(terms);
  for (const auto& v : field.variables) rec.targets.push_back(v + "_t");

  start = Clock::now();
  const WeakConfig wc{cfg.library.num_domains, cfg.library.points_per_domain, 0, cond_rng.substream(1).next_u64()};
  const CandidateLibrary lib = normalize_columns(weak_pde_library(field, terms, wc));
  rec.library_seconds = seconds_since(start);

  TrialProblem problem;
  problem.seed = rec.seed;
  problem.achievability = true;
  problem.truth = pde_true_coefficients(cfg.system, terms);
  problem.scales = lib.scales;
  // No model selection: the full library serves as both fit and (unused) validation data.
  problem.data = SelectionData{lib.theta, lib.targets, lib.theta, lib.targets};
  rec.truth = problem.truth;
  fit_all(cfg, problem, rec);
}

nlohmann::json number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double number_from(const nlohmann::json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const nlohmann::json& j) {
  if (j.empty()) return Matrix();
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(j[0].size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) m(i, k) = number_from(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
  }
  return m;
}

}  // namespace

bool ExperimentRecord::failed() const {
  if (!error.empty()) return true;
  for (const auto& a : algorithms) {
    if (!a.error.empty()) return true;
  }
  return false;
}

std::string condition_label(double noise_percent, double train_seconds) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "noise=%g;seconds=%g", noise_percent, train_seconds);
  return buf;
}

std::string record_filename(int trial, std::size_t condition) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "trial%04d_cond%03zu.json", trial, condition);
  return buf;
}

std::vector<std::pair<double, double>> experiment_conditions(const ExperimentConfig& cfg) {
  std::vector<std::pair<double, double>> out;
  for (double noise : cfg.noise_percent) {
    for (double seconds : cfg.train_seconds) out.emplace_back(noise, seconds);
  }
  return out;
}

Matrix pde_true_coefficients(const std::string& system, const std::vector<Term>& terms) {
  struct Entry {
    std::size_t equation;
    std::vector<int> exponents;
    std::optional<DerivativeSpec> derivative;
    double value;
  };
  std::vector<Entry> entries;
  std::size_t equations = 0;
  if (system == "ks") {
    equations = 1;
    entries = {{0, {1}, DerivativeSpec{0, {1}}, -1.0},
               {0, {0}, DerivativeSpec{0, {2}}, -1.0},
               {0, {0}, DerivativeSpec{0, {4}}, -1.0}};
  } else if (system == "reaction_diffusion") {
    equations = 2;
    const double d = ReactionDiffusionOptions{}.diffusion;
    // u_t = d lap u + u - u^3 - u v^2 + u^2 v + v^3, v_t = d lap v + v - u^3 - u^2 v - u v^2 - v^3
    entries = {{0, {0, 0}, DerivativeSpec{0, {2, 0}}, d}, {0, {0, 0}, DerivativeSpec{0, {0, 2}}, d},
               {0, {1, 0}, std::nullopt, 1.0},           {0, {3, 0}, std::nullopt, -1.0},
               {0, {1, 2}, std::nullopt, -1.0},          {0, {2, 1}, std::nullopt, 1.0},
               {0, {0, 3}, std::nullopt, 1.0},
               {1, {0, 0}, DerivativeSpec{1, {2, 0}}, d}, {1, {0, 0}, DerivativeSpec{1, {0, 2}}, d},
               {1, {0, 1}, std::nullopt, 1.0},           {1, {3, 0}, std::nullopt, -1.0},
               {1, {2, 1}, std::nullopt, -1.0},          {1, {1, 2}, std::nullopt, -1.0},
               {1, {0, 3}, std::nullopt, -1.0}};
  } else {
    fail(ErrorCode::kUnknownSystem, "no PDE named '" + system + "'");
  }
  Matrix xi = Matrix::Zero(static_cast<Index>(terms.size()), static_cast<Index>(equations));
  for (const auto& e : entries) {
    const Term key{e.exponents, e.derivative, ""};
    bool found = false;
    for (std::size_t t = 0; t < terms.size() && !found; ++t) {
      if (terms[t] == key) {
        xi(static_cast<Index>(t), static_cast<Index>(e.equation)) = e.value;
        found = true;
      }
    }
    require(found, ErrorCode::kInvalidArgument, system + ": library lacks a true term");
  }
  return xi;
}

SideConstraints gradient_constraints(const std::vector<Term>& terms, std::size_t num_variables) {
  const auto d = static_cast<Index>(terms.size());
  auto find = [&](const std::vector<int>& exponents) -> Index {
    for (Index t = 0; t < d; ++t) {
      if (!terms[static_cast<std::size_t>(t)].derivative && terms[static_cast<std::size_t>(t)].exponents == exponents) return t;
    }
    return -1;
  };
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < num_variables; ++i) {
    for (std::size_t j = i + 1; j < num_variables; ++j) {
      // d/dx_j of F_i matched against d/dx_i of F_j, one row per resulting monomial.
      std::vector<std::vector<int>> monomials;
      for (const auto& t : terms) {
        if (t.derivative) continue;
        for (std::size_t v : {i, j}) {
          if (t.exponents[v] == 0) continue;
          std::vector<int> m = t.exponents;
          --m[v];
          if (std::find(monomials.begin(), monomials.end(), m) == monomials.end()) monomials.push_back(m);
        }
      }
      for (const auto& m : monomials) {
        Vector row = Vector::Zero(d * static_cast<Index>(num_variables));
        std::vector<int> up_j = m, up_i = m;
        ++up_j[j];
        ++up_i[i];
        if (Index t = find(up_j); t >= 0) row[static_cast<Index>(i) * d + t] += up_j[j];
        if (Index t = find(up_i); t >= 0) row[static_cast<Index>(j) * d + t] -= up_i[i];
        if (row.cwiseAbs().maxCoeff() > 0.0) rows.push_back(std::move(row));
      }
    }
  }
  SideConstraints out;
  out.a.resize(static_cast<Index>(rows.size()), d * static_cast<Index>(num_variables));
  for (std::size_t r = 0; r < rows.size(); ++r) out.a.row(static_cast<Index>(r)) = rows[r].transpose();
  out.b = Vector::Zero(out.a.rows());
  out.sense = ConstraintSense::kEqual;
  return out;
}

ExperimentRecord run_trial(const ExperimentConfig& cfg, int trial, std::size_t condition) {
  const auto conditions = experiment_conditions(cfg);
  require(trial >= 0 && trial < cfg.trials && condition < conditions.size(), ErrorCode::kInvalidArgument,
          "run_trial: trial or condition out of range");
  ExperimentRecord rec;
  rec.config_hash = config_hash(cfg);
  rec.experiment = to_string(cfg.experiment);
  rec.system = cfg.system;
  rec.trial = trial;
  rec.seed = cfg.seed ^ static_cast<std::uint64_t>(trial);
  rec.condition = condition;
  rec.noise_percent = conditions[condition].first;
  rec.train_seconds = conditions[condition].second;
  const RngStream base(rec.seed);
  try {
    if (cfg.experiment == ExperimentKind::kPde) {
      run_pde_trial(cfg, rec, base, condition);
    } else {
      run_ode_trial(cfg, rec, base, condition);
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, bool persist) {
  const std::size_t conditions = experiment_conditions(cfg).size();
  const std::size_t jobs = static_cast<std::size_t>(cfg.trials) * conditions;
  std::vector<ExperimentRecord> records(jobs);
  const std::filesystem::path dir = std::filesystem::path(cfg.output_dir) / "records";
  if (persist) std::filesystem::create_directories(dir);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const int trial = static_cast<int>(job / conditions);
      const std::size_t condition = job % conditions;
      records[job] = run_trial(cfg, trial, condition);
      if (persist) write_record(records[job], (dir / record_filename(trial, condition)).string());
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), jobs);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

nlohmann::json to_json(const ExperimentRecord& record) {
  nlohmann::json algos = nlohmann::json::array();
  for (const auto& a : record.algorithms) {
    nlohmann::json chosen = nlohmann::json::array();
    for (const auto& h : a.chosen) {
      chosen.push_back({{"grid_index", h.grid_index}, {"alpha", h.alpha}, {"threshold", h.threshold},
                        {"sparsity", h.sparsity}});
    }
    nlohmann::json gaps = nlohmann::json::array();
    for (double g : a.gap) gaps.push_back(number(g));
    algos.push_back({{"label", a.label},
                     {"algorithm", a.algorithm},
                     {"coefficients", matrix_json(a.coefficients)},
                     {"chosen", chosen},
                     {"status", a.status},
                     {"gap", gaps},
                     {"nodes", a.nodes},
                     {"solver_stats",
                      {{"solves", a.stats.solves},
                       {"non_optimal", a.stats.non_optimal},
                       {"max_gap", number(a.stats.max_gap)},
                       {"max_time", a.stats.max_time}}},
                     {"metrics", to_json(a.metrics)},
                     {"violation", number(a.violation)},
                     {"max_violation", number(a.max_violation)},
                     {"success", a.success},
                     {"fit_seconds", a.fit_seconds},
                     {"log", a.log},
                     {"error", a.error}});
  }
  return {{"config_hash", record.config_hash},
          {"experiment", record.experiment},
          {"system", record.system},
          {"trial", record.trial},
          {"seed", record.seed},
          {"condition", record.condition},
          {"noise_percent", record.noise_percent},
          {"train_seconds", record.train_seconds},
          {"initial_condition", record.initial_condition},
          {"terms", record.terms},
          {"targets", record.targets},
          {"truth", matrix_json(record.truth)},
          {"simulate_seconds", record.simulate_seconds},
          {"library_seconds", record.library_seconds},
          {"algorithms", algos},
          {"error", record.error}};
}

ExperimentRecord record_from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  try {
    r.config_hash = j.at("config_hash").get<std::string>();
    r.experiment = j.at("experiment").get<std::string>();
    r.system = j.at("system").get<std::string>();
    r.trial = j.at("trial").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.condition = j.at("condition").get<std::size_t>();
    r.noise_percent = j.at("noise_percent").get<double>();
    r.train_seconds = j.at("train_seconds").get<double>();
    r.initial_condition = j.at("initial_condition").get<std::vector<double>>();
    r.terms = j.at("terms").get<std::vector<std::string>>();
    r.targets = j.at("targets").get<std::vector<std::string>>();
    r.truth = matrix_from(j.at("truth"));
    r.simulate_seconds = j.at("simulate_seconds").get<double>();
    r.library_seconds = j.at("library_seconds").get<double>();
    r.error = j.at("error").get<std::string>();
    for (const auto& aj : j.at("algorithms")) {
      AlgorithmOutcome a;
      a.label = aj.at("label").get<std::string>();
      a.algorithm = aj.at("algorithm").get<std::string>();
      a.coefficients = matrix_from(aj.at("coefficients"));
      for (const auto& h : aj.at("chosen")) {
        a.chosen.push_back(Hyperparameters{h.at("grid_index").get<Index>(), h.at("alpha").get<double>(),
                                           h.at("threshold").get<double>(), h.at("sparsity").get<Index>()});
      }
      a.status = aj.at("status").get<std::vector<std::string>>();
      for (const auto& g : aj.at("gap")) a.gap.push_back(number_from(g));
      a.nodes = aj.at("nodes").get<std::vector<std::size_t>>();
      const auto& st = aj.at("solver_stats");
      a.stats.solves = st.at("solves").get<std::size_t>();
      a.stats.non_optimal = st.at("non_optimal").get<std::size_t>();
      a.stats.max_gap = number_from(st.at("max_gap"));
      a.stats.max_time = st.at("max_time").get<double>();
      const auto& m = aj.at("metrics");
      a.metrics.tpr = number_from(m.at("tpr"));
      a.metrics.coef_error = number_from(m.at("coef_error"));
      a.metrics.rmse = number_from(m.at("rmse"));
      a.metrics.aicc = number_from(m.at("aicc"));
      a.violation = number_from(aj.at("violation"));
      a.max_violation = number_from(aj.at("max_violation"));
      a.success = aj.at("success").get<bool>();
      a.fit_seconds = aj.at("fit_seconds").get<double>();
      a.log = aj.at("log").get<std::vector<std::string>>();
      a.error = aj.at("error").get<std::string>();
      r.algorithms.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIoError, std::string("malformed experiment record: ") + e.what());
  }
  return r;
}

void write_record(const ExperimentRecord& record, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path);
  out << to_json(record).dump(1) << '\n';
}

std::vector<ExperimentRecord> read_records(const std::string& directory) {
  std::filesystem::path dir(directory);
  if (std::filesystem::is_directory(dir / "records")) dir /= "records";
  require(std::filesystem::is_directory(dir), ErrorCode::kIoError, "no record directory at " + directory);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ExperimentRecord> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      out.push_back(record_from_json(nlohmann::json::parse(in)));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kIoError, f.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace miosindy

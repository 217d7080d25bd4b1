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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "miosindy/error.hpp"
#include "miosindy/experiment.hpp"
#include "miosindy/field.hpp"
#include "miosindy/library.hpp"
#include "miosindy/pde_systems.hpp"
#include "miosindy/report.hpp"
#include "miosindy/rng.hpp"
#include "miosindy/selection.hpp"
#include "miosindy/systems.hpp"
#include "miosindy/weak_form.hpp"

namespace {

using namespace miosindy;

constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      fail(ErrorCode::kConfigError, "not a number: '" + item + "'");
    }
  }
  return out;
}

// "alphas=0,1e-3;sparsities=1,2,3;thresholds=0.1"
void apply_grid(const std::string& grid, AlgorithmSpec& spec) {
  std::stringstream in(grid);
  std::string part;
  while (std::getline(in, part, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) fail(ErrorCode::kConfigError, "grid entry needs key=values: '" + part + "'");
    const std::string key = part.substr(0, eq);
    const auto values = parse_numbers(part.substr(eq + 1));
    if (key == "alphas") {
      spec.alphas = values;
    } else if (key == "thresholds") {
      spec.thresholds = values;
    } else if (key == "sparsities") {
      spec.sparsities.clear();
      for (double v : values) spec.sparsities.push_back(static_cast<Index>(v));
    } else {
      fail(ErrorCode::kConfigError, "unknown grid key '" + key + "'");
    }
  }
}

int simulate(const std::string& system, double seconds, double dt, double noise, std::uint64_t seed,
             const std::string& out, int grid_points) {
  RngStream rng(seed);
  if (system == "ks" || system == "reaction_diffusion") {
    RngStream ic = rng.substream(0);
    Field field;
    if (system == "ks") {
      field = simulate_ks(ks_initial_condition(grid_points, ic), seconds, dt);
    } else {
      const auto [u0, v0] = sample_spiral_initial_condition(grid_points, ReactionDiffusionOptions{}.half_width, ic);
      field = simulate_reaction_diffusion(u0, v0, seconds, dt);
    }
    RngStream noise_rng = rng.substream(1);
    if (noise > 0.0) {
      double sq = 0.0;
      for (double v : field.values) sq += v * v;
      const double sd = noise / 100.0 * std::sqrt(sq / static_cast<double>(field.values.size()));
      for (double& v : field.values) v += noise_rng.normal(0.0, sd);
    }
    write_field(field, out);
    std::cout << "wrote " << out << " (" << field.num_times() << " snapshots)\n";
    return 0;
  }
  const OdeSystem& sys = find_system(system);
  RngStream ic = rng.substream(0);
  RngStream noise_rng = rng.substream(1);
  const Trajectory traj = add_noise(rk4_integrate(sys, sample_initial_condition(sys, ic), seconds, dt), noise, noise_rng);
  write_trajectory_csv(traj, out);
  std::cout << "wrote " << out << " (" << traj.samples() << " samples)\n";
  return 0;
}

struct FitOptions {
  std::string data;
  int degree = 3;
  bool no_bias = false;
  std::string algorithm = "miosr";
  std::string grid;
  std::string diff = "smoothed";
  int window = 9;
  bool weak = false;
  int domains = 100;
  int points = 100;
  bool joint = false;
  std::string out;
};

int fit(const FitOptions& o) {
  const Trajectory traj = read_trajectory_csv(o.data);
  const auto terms = polynomial_terms(static_cast<std::size_t>(traj.dim()), o.degree, !o.no_bias);
  AlgorithmSpec spec;
  spec.algorithm = algorithm_from_string(o.algorithm);
  apply_grid(o.grid, spec);
  spec.joint = o.joint;
  SelectionConfig sel;
  sel.dimensionwise = !o.joint;

  SelectionData data;
  Vector scales = Vector::Ones(static_cast<Index>(terms.size()));
  if (o.weak) {
    const Index n_train = traj.samples() * 2 / 3;
    const WeakConfig wc{o.domains, o.points, 0, 0};
    const CandidateLibrary train = normalize_columns(weak_ode_library(traj.slice(0, n_train), terms, wc));
    const CandidateLibrary val = weak_ode_library(traj.slice(n_train, traj.samples()), terms, WeakConfig{o.domains, o.points, 0, 1});
    scales = train.scales;
    data = SelectionData{train.theta, train.targets, val.theta.array().rowwise() / scales.transpose().array(), val.targets};
  } else {
    const Differentiator d{diff_method_from_string(o.diff), o.window};
    data = split_rows(polynomial_library(traj, o.degree, !o.no_bias, d), 2.0 / 3.0);
  }
  const SelectionResult result = select_model(data, spec, sel);
  const Matrix coef = result.coefficients.array().colwise() / scales.array();

  std::ostringstream table;
  table << "term";
  for (Index j = 0; j < coef.cols(); ++j) table << ",x" << j << "_t";
  table << '\n';
  for (Index i = 0; i < coef.rows(); ++i) {
    if ((coef.row(i).array() == 0.0).all()) continue;
    table << terms[static_cast<std::size_t>(i)].label;
    for (Index j = 0; j < coef.cols(); ++j) table << ',' << coef(i, j);
    table << '\n';
  }
  std::cout << table.str();
  for (std::size_t j = 0; j < result.chosen.size(); ++j) {
    const auto& h = result.chosen[j];
    std::cout << "# equation " << j << ": alpha=" << h.alpha << " threshold=" << h.threshold << " sparsity=" << h.sparsity
              << '\n';
  }
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) fail(ErrorCode::kIoError, "cannot write " + o.out);
    f << table.str();
  }
  return 0;
}

int experiment(const std::string& path, const std::string& output_dir, int workers, int trials, bool quiet) {
  ExperimentConfig cfg;
  try {
    cfg = load_experiment_config(path);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (workers > 0) cfg.workers = workers;
  if (trials > 0) cfg.trials = trials;

  const auto records = run_experiment(cfg);
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (r.failed()) {
      ++failed;
      std::cerr << "trial " << r.trial << " condition " << r.condition << " failed: "
                << (r.error.empty() ? "algorithm error" : r.error) << '\n';
    }
  }
  const auto files = write_report(cfg.output_dir);
  if (!quiet) {
    std::cout << records.size() << " records (" << failed << " with failures), config " << config_hash(cfg) << '\n';
    for (const auto& f : files) std::cout << "wrote " << f << '\n';
  }
  return failed == 0 ? 0 : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse system identification with exact best-subset regression"};
  app.require_subcommand(1);

  std::string system, out;
  double seconds = 10.0, dt = 0.002, noise = 0.0;
  std::uint64_t seed = 0;
  int grid_points = 256;
  auto* sim = app.add_subcommand("simulate", "Simulate a benchmark system to CSV (ODE) or a binary field (PDE)");
  sim->add_option("system", system, "lorenz, hopf, mhd, duffing, vanderpol, lotka, rossler, ks, reaction_diffusion")
      ->required();
  sim->add_option("--seconds", seconds, "Duration");
  sim->add_option("--dt", dt, "Sample spacing (output spacing for PDEs)");
  sim->add_option("--noise", noise, "Gaussian noise, percent of the RMS state");
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--grid-points", grid_points, "Spatial points per axis (PDEs)");
  sim->add_option("--out", out, "Output path")->required();

  FitOptions fo;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a sparse model to a trajectory CSV with AICc selection");
  fit_cmd->add_option("data", fo.data, "Trajectory CSV")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--library", fo.degree, "Polynomial degree");
  fit_cmd->add_flag("--no-bias", fo.no_bias, "Drop the constant term");
  fit_cmd->add_option("--algorithm", fo.algorithm, "miosr, stlsq, ssr or estlsq");
  fit_cmd->add_option("--grid", fo.grid, "Grid, e.g. \"alphas=0,1e-3;sparsities=1,2,3\"");
  fit_cmd->add_option("--diff", fo.diff, "centered, smoothed or savgol");
  fit_cmd->add_option("--window", fo.window, "Smoothing window");
  fit_cmd->add_flag("--weak", fo.weak, "Use the weak form");
  fit_cmd->add_option("--domains", fo.domains, "Weak-form domains");
  fit_cmd->add_option("--points", fo.points, "Samples per weak-form domain");
  fit_cmd->add_flag("--joint", fo.joint, "Single stacked MIOSR solve with a global sparsity");
  fit_cmd->add_option("--out", fo.out, "Write the coefficient table here as well");

  std::string config, output_dir;
  int workers = 0, trials = 0;
  bool quiet = false;
  auto* exp = app.add_subcommand("experiment", "Run an experiment from a TOML config");
  exp->add_option("config", config, "Config file")->required();
  exp->add_option("--output-dir", output_dir, "Override output_dir");
  exp->add_option("--workers", workers, "Override workers");
  exp->add_option("--trials", trials, "Override trials");
  exp->add_flag("--quiet", quiet, "Only report failures");

  std::string report_dir;
  auto* rep = app.add_subcommand("report", "Aggregate records into summary.csv and figure tables");
  rep->add_option("dir", report_dir, "Experiment output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return simulate(system, seconds, dt, noise, seed, out, grid_points);
    if (*fit_cmd) return fit(fo);
    if (*exp) return experiment(config, output_dir, workers, trials, quiet);
    if (*rep) {
      for (const auto& f : write_report(report_dir)) std::cout << "wrote " << f << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kConfigError ? kExitConfig : 1;
  }
  return 0;
}

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


#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "miosindy/experiment_config.hpp"
#include "miosindy/metrics.hpp"
#include "miosindy/miosr.hpp"
#include "miosindy/selection.hpp"
#include "miosindy/term.hpp"

namespace miosindy {

struct AlgorithmOutcome {
  std::string label;
  std::string algorithm;
  Matrix coefficients;  // original units, terms x equations
  std::vector<Hyperparameters> chosen;
  std::vector<std::string> status;  // per equation
  std::vector<double> gap;
  std::vector<std::size_t> nodes;
  SolverStats stats;
  MetricReport metrics;
  double violation = 0.0;      // mean |A xi - b| over constraint rows, constraints experiment only
  double max_violation = 0.0;
  bool success = false;        // estimated support equals the true support
  double fit_seconds = 0.0;
  std::vector<std::string> log;
  std::string error;           // non-empty when the fit failed
};

struct ExperimentRecord {
  std::string config_hash;
  std::string experiment;
  std::string system;
  int trial = 0;
  std::uint64_t seed = 0;
  std::size_t condition = 0;
  double noise_percent = 0.0;
  double train_seconds = 0.0;
  std::vector<double> initial_condition;
  std::vector<std::string> terms;
  std::vector<std::string> targets;
  Matrix truth;
  double simulate_seconds = 0.0;
  double library_seconds = 0.0;
  std::vector<AlgorithmOutcome> algorithms;
  std::string error;           // non-empty when the trial failed before fitting

  bool failed() const;
};

std::string condition_label(double noise_percent, double train_seconds);
std::string record_filename(int trial, std::size_t condition);

// Conditions are the cartesian product noise_percent x train_seconds, noise outermost.
std::vector<std::pair<double, double>> experiment_conditions(const ExperimentConfig& cfg);

// Coefficients of the benchmark PDEs ("ks", "reaction_diffusion") over a PDE term list.
Matrix pde_true_coefficients(const std::string& system, const std::vector<Term>& terms);

// Curl-free constraints dF_i/dx_j = dF_j/dx_i on the stacked coefficients of a polynomial
// library over `num_variables` variables fitted to as many targets.
SideConstraints gradient_constraints(const std::vector<Term>& terms, std::size_t num_variables);

ExperimentRecord run_trial(const ExperimentConfig& cfg, int trial, std::size_t condition);

// Runs every (trial, condition) job on cfg.workers threads. When `persist` is set each record is
// written to <output_dir>/records/ as soon as it finishes.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, bool persist = true);

nlohmann::json to_json(const ExperimentRecord& record);
ExperimentRecord record_from_json(const nlohmann::json& j);
void write_record(const ExperimentRecord& record, const std::string& path);
std::vector<ExperimentRecord> read_records(const std::string& directory);

}  // namespace miosindy

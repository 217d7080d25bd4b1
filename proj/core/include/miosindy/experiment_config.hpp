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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "miosindy/differentiation.hpp"
#include "miosindy/selection.hpp"

namespace miosindy {

enum class ExperimentKind { kSampleEfficiency, kRuntime, kConstraints, kRobustness, kPde };

std::string to_string(ExperimentKind kind);

struct LibrarySettings {
  int degree = 5;
  bool include_bias = true;
  int max_deriv = 4;  // PDE only
  // State indices feeding the library and the equations being fitted; empty
  // means all state variables.
  std::vector<std::size_t> variables;
  std::vector<std::size_t> targets;
  bool weak = false;
  int num_domains = 100;
  int points_per_domain = 100;
  // Noise percent at or above which weak models are validated in weak form;
  // below it validation uses smoothed derivatives.
  double weak_validation_noise = 15.0;
  DiffMethod validation_method = DiffMethod::kSmoothed;
  int validation_window = 21;
};

struct PdeSettings {
  int grid_points = 256;
  double t_end = 25.0;
  double dt_out = 0.1;
};

struct AlgorithmSettings {
  std::string label;  // name in records and summaries
  AlgorithmSpec spec;
  // MIOSR sparsity set to the number of true terms per equation instead of
  // the configured grid (PDE achievability runs).
  bool true_sparsity = false;
  // Constraint family for joint fits: "" or "gradient".
  std::string constraints;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kSampleEfficiency;
  std::string system;
  int trials = 10;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output_dir = "results";
  double dt = 0.002;
  std::vector<double> noise_percent{0.0};
  std::vector<double> train_seconds{10.0};  // total simulated duration, split into train and validation
  int test_trajectories = 10;
  double test_seconds = 10.0;
  LibrarySettings library;
  Differentiator differentiation;
  SelectionConfig selection;
  PdeSettings pde;
  std::vector<AlgorithmSettings> algorithms;
};

// Parses and validates a TOML document. Throws ConfigError with the offending
// key in the message.
ExperimentConfig parse_experiment_config(const std::string& toml_text, const std::string& source = "<string>");
ExperimentConfig load_experiment_config(const std::string& path);

// Canonical JSON form; its hash identifies the configuration in records.
nlohmann::json to_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace miosindy

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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "miosindy/baselines.hpp"
#include "miosindy/library.hpp"
#include "miosindy/linalg.hpp"
#include "miosindy/miosr.hpp"

namespace miosindy {

enum class Algorithm { kMiosr, kStlsq, kSsr, kEnsembleStlsq };

std::string_view to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view name);  // throws InvalidArgument

struct AlgorithmSpec {
  Algorithm algorithm = Algorithm::kMiosr;
  std::vector<double> alphas{0.0};       // ridge weights
  std::vector<double> thresholds{0.1};   // STLSQ and E-STLSQ
  std::vector<Index> sparsities{1, 2, 3, 4, 5};  // MIOSR: per equation, or total when joint
  BnbConfig bnb;
  EnsembleConfig ensemble;               // n_models, mode, seed for E-STLSQ
  bool joint = false;                    // MIOSR only: one stacked solve for all equations
  std::optional<SideConstraints> constraints;  // joint MIOSR only
  bool unbias = true;
};

struct SelectionConfig {
  double split_fraction = 2.0 / 3.0;
  bool dimensionwise = true;
};

// Train and validation libraries sharing the same terms.
struct SelectionData {
  Matrix train_theta;
  Matrix train_targets;
  Matrix val_theta;
  Matrix val_targets;
};

// First `fraction` of the rows for training, the rest for validation.
SelectionData split_rows(const CandidateLibrary& lib, double fraction);

struct Hyperparameters {
  Index grid_index = 0;
  double alpha = 0.0;
  double threshold = 0.0;  // STLSQ / E-STLSQ
  Index sparsity = 0;      // MIOSR budget or SSR level (terms kept)
};

struct SolverStats {
  std::size_t solves = 0;
  std::size_t non_optimal = 0;
  double max_gap = 0.0;
  double max_time = 0.0;  // seconds, single solve
};

struct SelectionResult {
  Matrix coefficients;                    // terms x equations
  std::vector<SparseSolution> solutions;  // chosen fit per equation
  std::vector<Hyperparameters> chosen;    // per equation (identical entries when not dimensionwise)
  std::vector<double> aicc;               // per equation, or one total when not dimensionwise
  SolverStats stats;
  std::vector<std::string> log;
  bool rss_floored = false;
};

// Fits every grid point on the training rows, scores it by AICc on the
// validation rows and keeps the minimizer, per equation when dimensionwise.
// Validation RSS below 1e-24 of the target energy counts as roundoff and is floored there.
// Ties go to the sparser model, then to the lower grid index. Grid points that
// fail are skipped and logged; when all fail the last error is rethrown.
SelectionResult select_model(const SelectionData& data, const AlgorithmSpec& spec, const SelectionConfig& cfg);

}  // namespace miosindy

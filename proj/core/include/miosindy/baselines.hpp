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
#include <vector>

#include "miosindy/linalg.hpp"
#include "miosindy/miosr.hpp"

namespace miosindy {

struct StlsqConfig {
  double threshold = 0.1;
  double lambda = 0.0;
  int max_iter = 20;
};

// Sequentially thresholded ridge regression. An all-thresholded model is
// returned as an empty support, not an error. Status is Heuristic, gap NaN.
SparseSolution stlsq(const Matrix& theta, const Vector& y, const StlsqConfig& cfg);

// Backward elimination path: entry i keeps D - i terms, each level refitted
// by ridge after dropping the smallest-magnitude coefficient.
std::vector<SparseSolution> ssr(const Matrix& theta, const Vector& y, double lambda);

enum class EnsembleMode {
  kBagging,  // bootstrap rows, median coefficients
  kLibrary,  // drop random library terms per model, keep the top_k most included
};

struct EnsembleConfig {
  int n_models = 50;
  StlsqConfig base;
  EnsembleMode mode = EnsembleMode::kBagging;
  int drop_terms = 1;          // library mode: terms removed per model
  std::optional<Index> top_k;  // keep the k terms with the highest inclusion rate
  std::uint64_t seed = 0;
};

SparseSolution ensemble_stlsq(const Matrix& theta, const Vector& y, const EnsembleConfig& cfg);

// Member coefficients behind ensemble_stlsq, terms x n_models.
Matrix ensemble_members(const Matrix& theta, const Vector& y, const EnsembleConfig& cfg);

// Ridge fit restricted to `support`, zero elsewhere. Least-norm solution when
// lambda == 0 and the support is rank deficient.
Vector ridge_on_support(const Matrix& theta, const Vector& y, double lambda, const std::vector<Index>& support);

}  // namespace miosindy

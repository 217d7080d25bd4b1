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

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "miosindy/linalg.hpp"

namespace miosindy {

// Corrected Akaike information criterion
//   m ln(rss / m) + 2k + 2(k + 1)(k + 2) / (m - k - 2).
// rss == 0 is floored at 1e-300 and reported through `floored`. Throws
// DegenerateSampleSize when m <= k + 2.
double aicc(double rss, Index m, Index k, bool* floored = nullptr);

// |supp(truth) & supp(est)| / |supp(truth) | supp(est)|, 1 when both are empty.
double true_positivity_rate(const Matrix& truth, const Matrix& est);

// |truth - est|_F / |truth|_F.
double coefficient_error(const Matrix& truth, const Matrix& est);

// Root mean squared difference between theta * truth and theta * est.
double derivative_rmse(const Matrix& est, const Matrix& truth, const Matrix& theta);

struct MetricReport {
  double tpr = 0.0;
  double coef_error = 0.0;
  double rmse = 0.0;
  double aicc = 0.0;
};

nlohmann::json to_json(const MetricReport& report);

}  // namespace miosindy

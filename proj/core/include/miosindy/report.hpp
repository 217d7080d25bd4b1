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

#include <iosfwd>
#include <string>
#include <vector>

#include "miosindy/experiment.hpp"

namespace miosindy {

struct SummaryRow {
  std::string experiment;
  std::string system;
  std::string algorithm;
  std::string condition;
  std::string metric;
  double mean = 0.0;
  double stderr_mean = 0.0;  // sample standard deviation / sqrt(n), 0 for n = 1
  std::size_t n = 0;
};

// log10 metrics are floored at 1e-16 before the logarithm. Failed fits are left out.
std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records);

bool is_timing_metric(const std::string& metric);

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out, bool include_timing = true);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path, bool include_timing = true);

// Plot-ready tables, one per experiment family present; returns the files written.
std::vector<std::string> write_figure_data(const std::vector<ExperimentRecord>& records, const std::string& directory);

// Reads <directory>/records and writes summary.csv plus the figure tables next to it.
std::vector<std::string> write_report(const std::string& directory);

}  // namespace miosindy

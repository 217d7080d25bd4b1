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

#include "miosindy/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include "miosindy/error.hpp"

namespace miosindy {

namespace {

double log10_floored(double v) { return std::log10(std::max(v, 1e-16)); }

// Metric values of one fitted algorithm, in output order. NaN marks "not applicable".
std::vector<std::pair<std::string, double>> metric_values(const ExperimentRecord& rec, const AlgorithmOutcome& a) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<std::string, double>> out{
      {"log10_rmse", std::isfinite(a.metrics.rmse) ? log10_floored(a.metrics.rmse) : nan},
      {"log10_coef_error", log10_floored(a.metrics.coef_error)},
      {"tpr", a.metrics.tpr},
      {"wall_time", a.fit_seconds}};
  if (rec.experiment == "constraints") {
    out.emplace_back("violation", a.violation);
    out.emplace_back("max_violation", a.max_violation);
  }
  if (rec.experiment == "pde") out.emplace_back("success", a.success ? 1.0 : 0.0);
  return out;
}

using GroupKey = std::tuple<std::string, std::string, std::size_t, std::string>;  // experiment, system, condition, label

struct Group {
  double noise = 0.0;
  double seconds = 0.0;
  std::size_t library_size = 0;
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> values;
};

std::map<GroupKey, Group> group_records(const std::vector<ExperimentRecord>& records) {
  std::map<GroupKey, Group> groups;
  for (const auto& rec : records) {
    if (!rec.error.empty()) continue;
    for (const auto& a : rec.algorithms) {
      if (!a.error.empty()) continue;
      Group& g = groups[GroupKey{rec.experiment, rec.system, rec.condition, a.label}];
      g.noise = rec.noise_percent;
      g.seconds = rec.train_seconds;
      g.library_size = rec.terms.size();
      for (const auto& [name, value] : metric_values(rec, a)) {
        if (std::isnan(value)) continue;
        if (!g.values.count(name)) g.order.push_back(name);
        g.values[name].push_back(value);
      }
    }
  }
  return groups;
}

std::pair<double, double> mean_stderr(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct FigureLayout {
  std::string experiment;
  std::string file;
  std::vector<std::string> metrics;
};

const std::vector<FigureLayout>& figure_layouts() {
  static const std::vector<FigureLayout> layouts{
      {"sample_efficiency", "fig1_sample_efficiency.csv", {"tpr", "log10_coef_error", "log10_rmse"}},
      {"runtime", "fig2_runtime.csv", {"wall_time", "tpr"}},
      {"constraints", "fig3_constraints.csv", {"tpr", "log10_coef_error", "log10_rmse", "violation", "max_violation"}},
      {"robustness", "fig4_robustness.csv", {"tpr", "log10_coef_error", "log10_rmse"}},
      {"pde", "fig5_pde.csv", {"success", "tpr", "log10_coef_error"}}};
  return layouts;
}

}  // namespace

std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records) {
  std::vector<SummaryRow> rows;
  for (const auto& [key, g] : group_records(records)) {
    const auto& [experiment, system, condition, label] = key;
    for (const auto& metric : g.order) {
      const auto& v = g.values.at(metric);
      const auto [mean, se] = mean_stderr(v);
      rows.push_back(SummaryRow{experiment, system, label, condition_label(g.noise, g.seconds), metric, mean, se,
                                v.size()});
    }
  }
  return rows;
}

bool is_timing_metric(const std::string& metric) { return metric == "wall_time"; }

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out, bool include_timing) {
  out << "experiment,system,algorithm,condition,metric,mean,stderr,n\n";
  for (const auto& r : rows) {
    if (!include_timing && is_timing_metric(r.metric)) continue;
    out << r.experiment << ',' << r.system << ',' << r.algorithm << ',' << r.condition << ',' << r.metric << ','
        << fmt(r.mean) << ',' << fmt(r.stderr_mean) << ',' << r.n << '\n';
  }
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path, bool include_timing) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path);
  write_summary_csv(rows, out, include_timing);
}

std::vector<std::string> write_figure_data(const std::vector<ExperimentRecord>& records, const std::string& directory) {
  const auto groups = group_records(records);
  std::vector<std::string> written;
  for (const auto& layout : figure_layouts()) {
    bool present = false;
    for (const auto& [key, g] : groups) present = present || std::get<0>(key) == layout.experiment;
    if (!present) continue;
    const std::string path = (std::filesystem::path(directory) / layout.file).string();
    std::ofstream out(path);
    if (!out) fail(ErrorCode::kIoError, "cannot write " + path);
    out << "system,algorithm,noise_percent,train_seconds,library_size,n";
    for (const auto& m : layout.metrics) out << ',' << m << "_mean," << m << "_stderr";
    out << '\n';
    for (const auto& [key, g] : groups) {
      if (std::get<0>(key) != layout.experiment) continue;
      std::size_t n = 0;
      for (const auto& [name, v] : g.values) n = std::max(n, v.size());
      out << std::get<1>(key) << ',' << std::get<3>(key) << ',' << fmt(g.noise) << ',' << fmt(g.seconds) << ','
          << g.library_size << ',' << n;
      for (const auto& m : layout.metrics) {
        auto it = g.values.find(m);
        if (it == g.values.end()) {
          out << ",,";
        } else {
          const auto [mean, se] = mean_stderr(it->second);
          out << ',' << fmt(mean) << ',' << fmt(se);
        }
      }
      out << '\n';
    }
    written.push_back(path);
  }
  return written;
}

std::vector<std::string> write_report(const std::string& directory) {
  const auto records = read_records(directory);
  const std::string summary = (std::filesystem::path(directory) / "summary.csv").string();
  write_summary_csv(aggregate(records), summary);
  std::vector<std::string> written{summary};
  for (auto& f : write_figure_data(records, directory)) written.push_back(std::move(f));
  return written;
}

}  // namespace miosindy

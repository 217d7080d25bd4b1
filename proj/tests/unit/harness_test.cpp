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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "miosindy/error.hpp"
#include "miosindy/experiment.hpp"
#include "miosindy/experiment_config.hpp"
#include "miosindy/library.hpp"
#include "miosindy/report.hpp"
#include "miosindy/systems.hpp"

namespace miosindy {
namespace {

namespace fs = std::filesystem;

constexpr const char* kSmallConfig = R"(
experiment = "sample_efficiency"
system = "hopf"
trials = 2
seed = 5
noise_percent = [0.5]
train_seconds = [2, 4]
test_trajectories = 2
test_seconds = 2

[library]
degree = 3

[differentiation]
method = "smoothed"
window = 9

[[algorithms]]
name = "miosr"
alphas = [0, 0.01]
sparsities = [1, 2, 3, 4]

[[algorithms]]
name = "stlsq"
thresholds = [0.01, 0.1]
)";

ErrorCode config_error_code(const std::string& text) {
  try {
    parse_experiment_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "config parsed unexpectedly";
  return ErrorCode::kInvalidArgument;
}

std::string with(const std::string& extra) { return std::string(kSmallConfig) + extra; }

TEST(Config, ParsesSmallConfig) {
  const ExperimentConfig cfg = parse_experiment_config(kSmallConfig);
  EXPECT_EQ(cfg.system, "hopf");
  EXPECT_EQ(cfg.trials, 2);
  EXPECT_EQ(cfg.train_seconds, (std::vector<double>{2.0, 4.0}));
  EXPECT_EQ(cfg.differentiation.method, DiffMethod::kSmoothed);
  ASSERT_EQ(cfg.algorithms.size(), 2u);
  EXPECT_EQ(cfg.algorithms[0].label, "miosr");
  EXPECT_EQ(cfg.algorithms[1].spec.algorithm, Algorithm::kStlsq);
  EXPECT_EQ(cfg.algorithms[1].spec.thresholds, (std::vector<double>{0.01, 0.1}));
}

TEST(Config, RejectsMistakes) {
  EXPECT_EQ(config_error_code("system = \"hopf\"\n"), ErrorCode::kConfigError);
  EXPECT_EQ(config_error_code(with("bogus_key = 1\n")), ErrorCode::kConfigError);
  std::string unknown_system = kSmallConfig;
  unknown_system.replace(unknown_system.find("\"hopf\""), 6, "\"pendulum\"");
  EXPECT_EQ(config_error_code(unknown_system), ErrorCode::kConfigError);
  EXPECT_EQ(config_error_code(with("[[algorithms]]\nname = \"lasso\"\n")), ErrorCode::kConfigError);
  EXPECT_EQ(config_error_code(with("[[algorithms]]\nname = \"miosr\"\n")), ErrorCode::kConfigError);
  std::string zero_trials = kSmallConfig;
  zero_trials.replace(zero_trials.find("trials = 2"), 10, "trials = 0");
  EXPECT_EQ(config_error_code(zero_trials), ErrorCode::kConfigError);
  EXPECT_EQ(config_error_code("this is = not toml ["), ErrorCode::kConfigError);
}

TEST(Config, HashIgnoresWorkersAndOutput) {
  ExperimentConfig a = parse_experiment_config(kSmallConfig);
  ExperimentConfig b = a;
  b.workers = 4;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 6;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* dir : {"acceptance", "full"}) {
    for (const auto& entry : fs::directory_iterator(fs::path(MIOSINDY_CONFIG_DIR) / dir)) {
      EXPECT_NO_THROW(load_experiment_config(entry.path().string())) << entry.path();
    }
  }
}

TEST(Conditions, NoiseOutermost) {
  ExperimentConfig cfg = parse_experiment_config(kSmallConfig);
  cfg.noise_percent = {1.0, 2.0};
  const auto conds = experiment_conditions(cfg);
  ASSERT_EQ(conds.size(), 4u);
  EXPECT_EQ(conds[1], std::make_pair(1.0, 4.0));
  EXPECT_EQ(conds[2], std::make_pair(2.0, 2.0));
  EXPECT_EQ(condition_label(0.5, 4.0), "noise=0.5;seconds=4");
  EXPECT_EQ(record_filename(3, 12), "trial0003_cond012.json");
}

TEST(GroundTruth, DuffingGradientRows) {
  const auto terms = polynomial_terms(2, 3, true);
  const SideConstraints c = gradient_constraints(terms, 2);
  EXPECT_EQ(c.a.rows(), 6);
  EXPECT_EQ(c.a.cols(), 2 * static_cast<Index>(terms.size()));
  const Matrix truth = find_system("duffing").true_coefficients(terms, {0, 1}, {2, 3});
  Vector stacked(2 * truth.rows());
  stacked << truth.col(0), truth.col(1);
  EXPECT_LE((c.a * stacked - c.b).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ((truth.array() != 0.0).count(), 6);
}

TEST(GroundTruth, PdeCoefficients) {
  const auto ks_terms = pde_terms({"u"}, {"x"}, 3, 4);
  const Matrix ks = pde_true_coefficients("ks", ks_terms);
  EXPECT_EQ(ks.rows(), 19);
  EXPECT_EQ((ks.array() != 0.0).count(), 3);
  EXPECT_EQ((ks.array() == -1.0).count(), 3);
  const auto rd_terms = pde_terms({"u", "v"}, {"x", "y"}, 3, 2);
  const Matrix rd = pde_true_coefficients("reaction_diffusion", rd_terms);
  EXPECT_EQ(rd.rows(), 109);
  EXPECT_EQ(rd.cols(), 2);
  EXPECT_EQ((rd.array() != 0.0).count(), 14);
}

class SmallExperiment : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    records_ = new std::vector<ExperimentRecord>(run_experiment(parse_experiment_config(kSmallConfig), false));
  }
  static void TearDownTestSuite() {
    delete records_;
    records_ = nullptr;
  }
  static std::vector<ExperimentRecord>* records_;
};

std::vector<ExperimentRecord>* SmallExperiment::records_ = nullptr;

TEST_F(SmallExperiment, OneRecordPerJob) {
  ASSERT_EQ(records_->size(), 4u);
  for (const auto& r : *records_) {
    EXPECT_FALSE(r.failed()) << r.error;
    EXPECT_EQ(r.seed, 5u ^ static_cast<std::uint64_t>(r.trial));
    ASSERT_EQ(r.algorithms.size(), 2u);
    for (const auto& a : r.algorithms) {
      EXPECT_TRUE(a.error.empty()) << a.error;
      EXPECT_GE(a.metrics.tpr, 0.0);
      EXPECT_LE(a.metrics.tpr, 1.0);
      EXPECT_TRUE(std::isfinite(a.metrics.rmse));
    }
  }
}

TEST_F(SmallExperiment, RerunIsIdentical) {
  ExperimentConfig cfg = parse_experiment_config(kSmallConfig);
  const ExperimentRecord again = run_trial(cfg, 1, 1);
  const ExperimentRecord* original = nullptr;
  for (const auto& r : *records_) {
    if (r.trial == 1 && r.condition == 1) original = &r;
  }
  ASSERT_NE(original, nullptr);
  EXPECT_EQ(again.initial_condition, original->initial_condition);
  for (std::size_t i = 0; i < again.algorithms.size(); ++i) {
    EXPECT_EQ(again.algorithms[i].coefficients, original->algorithms[i].coefficients);
    EXPECT_EQ(again.algorithms[i].metrics.rmse, original->algorithms[i].metrics.rmse);
  }
}

TEST_F(SmallExperiment, RecordJsonRoundTrip) {
  for (const auto& r : *records_) {
    const ExperimentRecord back = record_from_json(to_json(r));
    EXPECT_EQ(back.config_hash, r.config_hash);
    EXPECT_EQ(back.trial, r.trial);
    EXPECT_EQ(back.terms, r.terms);
    EXPECT_EQ(back.truth, r.truth);
    ASSERT_EQ(back.algorithms.size(), r.algorithms.size());
    for (std::size_t i = 0; i < r.algorithms.size(); ++i) {
      EXPECT_EQ(back.algorithms[i].coefficients, r.algorithms[i].coefficients);
      EXPECT_EQ(back.algorithms[i].metrics.tpr, r.algorithms[i].metrics.tpr);
      EXPECT_EQ(back.algorithms[i].chosen.size(), r.algorithms[i].chosen.size());
    }
  }
}

TEST_F(SmallExperiment, ReportWritesSummaryAndFigure) {
  const fs::path dir = fs::temp_directory_path() / "miosindy_harness_test";
  fs::remove_all(dir);
  fs::create_directories(dir / "records");
  for (const auto& r : *records_) write_record(r, (dir / "records" / record_filename(r.trial, r.condition)).string());
  ASSERT_EQ(read_records(dir.string()).size(), records_->size());
  const auto files = write_report(dir.string());
  EXPECT_TRUE(fs::exists(dir / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir / "fig1_sample_efficiency.csv"));
  std::ifstream in(dir / "summary.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "experiment,system,algorithm,condition,metric,mean,stderr,n");
  fs::remove_all(dir);
}

TEST_F(SmallExperiment, AggregateCountsTrials) {
  const auto rows = aggregate(*records_);
  bool found = false;
  for (const auto& row : rows) {
    if (row.algorithm == "miosr" && row.metric == "tpr") {
      EXPECT_EQ(row.n, 2u);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  std::ostringstream with_time, without_time;
  write_summary_csv(rows, with_time, true);
  write_summary_csv(rows, without_time, false);
  EXPECT_NE(with_time.str().find(",wall_time,"), std::string::npos);
  EXPECT_EQ(without_time.str().find(",wall_time,"), std::string::npos);
}

TEST(Aggregate, LogRmseAveragesInLogSpace) {
  auto record = [](int trial, double rmse) {
    ExperimentRecord r;
    r.experiment = "sample_efficiency";
    r.system = "lorenz";
    r.trial = trial;
    AlgorithmOutcome a;
    a.label = "miosr";
    a.algorithm = "miosr";
    a.metrics.rmse = rmse;
    a.metrics.coef_error = rmse;
    a.metrics.tpr = 1.0;
    r.algorithms.push_back(a);
    return r;
  };
  const auto rows = aggregate({record(0, 0.1), record(1, 10.0)});
  bool found = false;
  for (const auto& row : rows) {
    if (row.metric == "log10_rmse") {
      EXPECT_NEAR(row.mean, 0.0, 1e-12);
      // Logs are -1 and 1: sample sd sqrt(2), divided by sqrt(2).
      EXPECT_NEAR(row.stderr_mean, 1.0, 1e-12);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

}  // namespace
}  // namespace miosindy

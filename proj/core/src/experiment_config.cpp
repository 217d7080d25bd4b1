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

#include "miosindy/experiment_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <toml.hpp>

#include "miosindy/error.hpp"
#include "miosindy/systems.hpp"

namespace miosindy {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSampleEfficiency: return "sample_efficiency";
    case ExperimentKind::kRuntime: return "runtime";
    case ExperimentKind::kConstraints: return "constraints";
    case ExperimentKind::kRobustness: return "robustness";
    case ExperimentKind::kPde: return "pde";
  }
  return "unknown";
}

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::kConfigError, where + ": " + what);
}

// Reads typed values out of one TOML table and rejects keys nobody asked for.
class TableReader {
 public:
  TableReader(const toml::table& table, std::string where) : table_(table), where_(std::move(where)) {}

  ~TableReader() = default;

  void finish() const {
    for (const auto& [key, node] : table_) {
      if (!seen_.count(std::string(key.str()))) config_error(where_, "unknown key '" + std::string(key.str()) + "'");
    }
  }

  const toml::node* node(const std::string& key) {
    seen_.insert(key);
    return table_.get(key);
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    const toml::node* n = node(key);
    if (n == nullptr) return;
    if constexpr (std::is_same_v<T, bool>) {
      if (!n->is_boolean()) config_error(where_, "'" + key + "' must be a boolean");
      out = n->as_boolean()->get();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!n->is_string()) config_error(where_, "'" + key + "' must be a string");
      out = n->as_string()->get();
    } else if constexpr (std::is_floating_point_v<T>) {
      out = number(*n, key);
    } else {
      if (!n->is_integer()) config_error(where_, "'" + key + "' must be an integer");
      const std::int64_t v = n->as_integer()->get();
      if constexpr (std::is_unsigned_v<T>) {
        if (v < 0) config_error(where_, "'" + key + "' must be nonnegative");
      }
      out = static_cast<T>(v);
    }
  }

  // Accepts a scalar or an array.
  template <typename T>
  void read_list(const std::string& key, std::vector<T>& out) {
    const toml::node* n = node(key);
    if (n == nullptr) return;
    out.clear();
    auto one = [&](const toml::node& item) {
      if constexpr (std::is_floating_point_v<T>) {
        out.push_back(number(item, key));
      } else {
        if (!item.is_integer()) config_error(where_, "'" + key + "' entries must be integers");
        const std::int64_t v = item.as_integer()->get();
        if (v < 0) config_error(where_, "'" + key + "' entries must be nonnegative");
        out.push_back(static_cast<T>(v));
      }
    };
    if (const auto* arr = n->as_array()) {
      for (const auto& item : *arr) one(item);
    } else {
      one(*n);
    }
  }

  const std::string& where() const { return where_; }

 private:
  double number(const toml::node& n, const std::string& key) const {
    if (n.is_floating_point()) return n.as_floating_point()->get();
    if (n.is_integer()) return static_cast<double>(n.as_integer()->get());
    config_error(where_, "'" + key + "' must be a number");
  }

  const toml::table& table_;
  std::string where_;
  std::set<std::string> seen_;
};

ExperimentKind parse_kind(const std::string& s, const std::string& where) {
  for (ExperimentKind k : {ExperimentKind::kSampleEfficiency, ExperimentKind::kRuntime, ExperimentKind::kConstraints,
                           ExperimentKind::kRobustness, ExperimentKind::kPde}) {
    if (to_string(k) == s) return k;
  }
  config_error(where, "unknown experiment '" + s + "'");
}

const toml::table* subtable(const toml::table& root, const std::string& key, const std::string& where) {
  const toml::node* n = root.get(key);
  if (n == nullptr) return nullptr;
  if (!n->is_table()) config_error(where, "'" + key + "' must be a table");
  return n->as_table();
}

AlgorithmSettings parse_algorithm(const toml::table& t, const std::string& where) {
  TableReader r(t, where);
  AlgorithmSettings a;
  std::string name;
  r.read("name", name);
  if (name.empty()) config_error(where, "'name' is required");
  try {
    a.spec.algorithm = algorithm_from_string(name);
  } catch (const Error& e) {
    config_error(where, e.what());
  }
  a.label = name;
  r.read("label", a.label);
  r.read_list("alphas", a.spec.alphas);
  r.read_list("thresholds", a.spec.thresholds);
  std::vector<std::int64_t> sparsities;
  r.read_list("sparsities", sparsities);
  if (!sparsities.empty()) a.spec.sparsities.assign(sparsities.begin(), sparsities.end());
  r.read("gap_tolerance", a.spec.bnb.gap_tolerance);
  r.read("time_limit", a.spec.bnb.time_limit);
  std::int64_t node_limit = -1;
  r.read("node_limit", node_limit);
  if (node_limit >= 0) a.spec.bnb.node_limit = static_cast<std::size_t>(node_limit);
  r.read("joint", a.spec.joint);
  r.read("constraints", a.constraints);
  r.read("unbias", a.spec.unbias);
  r.read("true_sparsity", a.true_sparsity);
  r.read("n_models", a.spec.ensemble.n_models);
  std::string mode = "bagging";
  r.read("ensemble_mode", mode);
  if (mode == "bagging") {
    a.spec.ensemble.mode = EnsembleMode::kBagging;
  } else if (mode == "library") {
    a.spec.ensemble.mode = EnsembleMode::kLibrary;
  } else {
    config_error(where, "ensemble_mode must be 'bagging' or 'library'");
  }
  r.read("drop_terms", a.spec.ensemble.drop_terms);
  r.read("max_iter", a.spec.ensemble.base.max_iter);
  r.read("seed", a.spec.ensemble.seed);
  r.finish();

  if (a.spec.alphas.empty()) config_error(where, "'alphas' must not be empty");
  for (double x : a.spec.alphas) {
    if (!(x >= 0.0)) config_error(where, "alphas must be nonnegative");
  }
  for (double x : a.spec.thresholds) {
    if (!(x > 0.0)) config_error(where, "thresholds must be positive");
  }
  const bool thresholded = a.spec.algorithm == Algorithm::kStlsq || a.spec.algorithm == Algorithm::kEnsembleStlsq;
  if (thresholded && a.spec.thresholds.empty()) config_error(where, "'thresholds' must not be empty");
  if (!(a.spec.bnb.gap_tolerance > 0.0) || !(a.spec.bnb.time_limit > 0.0)) {
    config_error(where, "gap_tolerance and time_limit must be positive");
  }
  if (!a.constraints.empty() && a.constraints != "gradient") config_error(where, "constraints must be 'gradient'");
  if (!a.constraints.empty() && !a.spec.joint) config_error(where, "constraints require joint = true");
  if (a.spec.joint && a.spec.algorithm != Algorithm::kMiosr) config_error(where, "joint fitting is MIOSR only");
  if (a.spec.ensemble.n_models < 2) config_error(where, "n_models must be at least 2");
  return a;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& toml_text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " (line " << e.source().begin.line << ")";
    config_error(source, msg.str());
  }

  ExperimentConfig cfg;
  TableReader top(root, source);
  std::string kind;
  top.read("experiment", kind);
  if (kind.empty()) config_error(source, "'experiment' is required");
  cfg.experiment = parse_kind(kind, source);
  top.read("system", cfg.system);
  top.read("trials", cfg.trials);
  top.read("seed", cfg.seed);
  top.read("workers", cfg.workers);
  top.read("output_dir", cfg.output_dir);
  top.read("dt", cfg.dt);
  top.read_list("noise_percent", cfg.noise_percent);
  top.read_list("train_seconds", cfg.train_seconds);
  top.read("test_trajectories", cfg.test_trajectories);
  top.read("test_seconds", cfg.test_seconds);

  if (const auto* t = subtable(root, "library", source)) {
    top.node("library");
    TableReader r(*t, source + " [library]");
    r.read("degree", cfg.library.degree);
    r.read("include_bias", cfg.library.include_bias);
    r.read("max_deriv", cfg.library.max_deriv);
    r.read_list("variables", cfg.library.variables);
    r.read_list("targets", cfg.library.targets);
    r.read("weak", cfg.library.weak);
    r.read("num_domains", cfg.library.num_domains);
    r.read("points_per_domain", cfg.library.points_per_domain);
    r.read("weak_validation_noise", cfg.library.weak_validation_noise);
    std::string validation(to_string(cfg.library.validation_method));
    r.read("validation_method", validation);
    try {
      cfg.library.validation_method = diff_method_from_string(validation);
    } catch (const Error& e) {
      config_error(r.where(), e.what());
    }
    r.read("validation_window", cfg.library.validation_window);
    r.finish();
  }
  if (const auto* t = subtable(root, "differentiation", source)) {
    top.node("differentiation");
    TableReader r(*t, source + " [differentiation]");
    std::string method(to_string(cfg.differentiation.method));
    r.read("method", method);
    try {
      cfg.differentiation.method = diff_method_from_string(method);
    } catch (const Error& e) {
      config_error(r.where(), e.what());
    }
    r.read("window", cfg.differentiation.window);
    r.finish();
  }
  if (const auto* t = subtable(root, "selection", source)) {
    top.node("selection");
    TableReader r(*t, source + " [selection]");
    r.read("split_fraction", cfg.selection.split_fraction);
    r.read("dimensionwise", cfg.selection.dimensionwise);
    r.finish();
  }
  if (const auto* t = subtable(root, "pde", source)) {
    top.node("pde");
    TableReader r(*t, source + " [pde]");
    r.read("grid_points", cfg.pde.grid_points);
    r.read("t_end", cfg.pde.t_end);
    r.read("dt_out", cfg.pde.dt_out);
    r.finish();
  }
  if (const toml::node* n = top.node("algorithms")) {
    const auto* arr = n->as_array();
    if (arr == nullptr) config_error(source, "'algorithms' must be an array of tables");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto* t = (*arr)[i].as_table();
      if (t == nullptr) config_error(source, "'algorithms' entries must be tables");
      cfg.algorithms.push_back(parse_algorithm(*t, source + " [[algorithms]] #" + std::to_string(i + 1)));
    }
  }
  top.finish();

  // Cross-field validation.
  if (cfg.trials < 1) config_error(source, "trials must be at least 1");
  if (cfg.workers < 1) config_error(source, "workers must be at least 1");
  if (cfg.algorithms.empty()) config_error(source, "at least one [[algorithms]] entry is required");
  if (cfg.noise_percent.empty() || cfg.train_seconds.empty()) {
    config_error(source, "noise_percent and train_seconds must not be empty");
  }
  for (double x : cfg.noise_percent) {
    if (!(x >= 0.0)) config_error(source, "noise_percent entries must be nonnegative");
  }
  for (double x : cfg.train_seconds) {
    if (!(x > 0.0)) config_error(source, "train_seconds entries must be positive");
  }
  if (!(cfg.dt > 0.0)) config_error(source, "dt must be positive");
  if (!(cfg.selection.split_fraction > 0.0 && cfg.selection.split_fraction < 1.0)) {
    config_error(source, "split_fraction must lie in (0, 1)");
  }
  if (cfg.library.degree < 1) config_error(source, "library degree must be at least 1");
  if (cfg.experiment == ExperimentKind::kPde) {
    if (cfg.system != "ks" && cfg.system != "reaction_diffusion") {
      config_error(source, "pde experiments need system 'ks' or 'reaction_diffusion'");
    }
    if (!cfg.library.weak) config_error(source, "pde experiments use the weak form (library.weak = true)");
  } else {
    try {
      const OdeSystem& sys = find_system(cfg.system);
      for (std::size_t v : cfg.library.variables) {
        if (v >= sys.dim()) config_error(source, "library variable index out of range");
      }
      for (std::size_t v : cfg.library.targets) {
        if (v >= sys.dim()) config_error(source, "library target index out of range");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfigError) throw;
      config_error(source, e.what());
    }
    if (cfg.library.weak && (!cfg.library.variables.empty() || !cfg.library.targets.empty())) {
      config_error(source, "weak libraries use every state variable; drop library.variables and library.targets");
    }
    if (cfg.test_trajectories < 1 || !(cfg.test_seconds > 0.0)) {
      config_error(source, "test_trajectories and test_seconds must be positive");
    }
  }
  for (const auto& a : cfg.algorithms) {
    if (a.spec.joint && cfg.selection.dimensionwise) {
      config_error(source, "joint algorithm '" + a.label + "' needs selection.dimensionwise = false");
    }
  }
  std::set<std::string> labels;
  for (const auto& a : cfg.algorithms) {
    if (!labels.insert(a.label).second) config_error(source, "duplicate algorithm label '" + a.label + "'");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kConfigError, "cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), path);
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json algos = nlohmann::json::array();
  for (const auto& a : cfg.algorithms) {
    algos.push_back({{"label", a.label},
                     {"name", to_string(a.spec.algorithm)},
                     {"alphas", a.spec.alphas},
                     {"thresholds", a.spec.thresholds},
                     {"sparsities", a.spec.sparsities},
                     {"gap_tolerance", a.spec.bnb.gap_tolerance},
                     {"time_limit", a.spec.bnb.time_limit},
                     {"node_limit", a.spec.bnb.node_limit},
                     {"joint", a.spec.joint},
                     {"constraints", a.constraints},
                     {"unbias", a.spec.unbias},
                     {"true_sparsity", a.true_sparsity},
                     {"n_models", a.spec.ensemble.n_models},
                     {"ensemble_mode", a.spec.ensemble.mode == EnsembleMode::kBagging ? "bagging" : "library"},
                     {"drop_terms", a.spec.ensemble.drop_terms},
                     {"max_iter", a.spec.ensemble.base.max_iter},
                     {"seed", a.spec.ensemble.seed}});
  }
  return {{"experiment", to_string(cfg.experiment)},
          {"system", cfg.system},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"dt", cfg.dt},
          {"noise_percent", cfg.noise_percent},
          {"train_seconds", cfg.train_seconds},
          {"test_trajectories", cfg.test_trajectories},
          {"test_seconds", cfg.test_seconds},
          {"library",
           {{"degree", cfg.library.degree},
            {"include_bias", cfg.library.include_bias},
            {"max_deriv", cfg.library.max_deriv},
            {"variables", cfg.library.variables},
            {"targets", cfg.library.targets},
            {"weak", cfg.library.weak},
            {"num_domains", cfg.library.num_domains},
            {"points_per_domain", cfg.library.points_per_domain},
            {"weak_validation_noise", cfg.library.weak_validation_noise},
            {"validation_method", to_string(cfg.library.validation_method)},
            {"validation_window", cfg.library.validation_window}}},
          {"differentiation",
           {{"method", to_string(cfg.differentiation.method)},
            {"window", cfg.differentiation.window}}},
          {"selection", {{"split_fraction", cfg.selection.split_fraction}, {"dimensionwise", cfg.selection.dimensionwise}}},
          {"pde", {{"grid_points", cfg.pde.grid_points}, {"t_end", cfg.pde.t_end}, {"dt_out", cfg.pde.dt_out}}},
          {"algorithms", algos}};
}

std::string config_hash(const ExperimentConfig& cfg) {
  // FNV-1a over the canonical JSON; workers and output_dir do not affect results.
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace miosindy

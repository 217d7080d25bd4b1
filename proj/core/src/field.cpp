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

#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "miosindy/error.hpp"
#include "miosindy/field.hpp"

namespace miosindy {

namespace {

constexpr char kMagic[8] = {'M', 'S', 'F', 'I', 'E', 'L', 'D', '1'};

// f' along a strided line of n samples, second order, one-sided at the ends.
void difference_line(const double* in, double* out, Index n, std::ptrdiff_t stride, double h) {
  auto f = [&](Index i) { return in[i * stride]; };
  const double inv = 1.0 / (2.0 * h);
  out[0] = (-3.0 * f(0) + 4.0 * f(1) - f(2)) * inv;
  for (Index i = 1; i + 1 < n; ++i) out[i * stride] = (f(i + 1) - f(i - 1)) * inv;
  out[(n - 1) * stride] = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) * inv;
}

nlohmann::json axis_to_json(const Axis& a) {
  return {{"name", a.name}, {"start", a.start}, {"step", a.step}, {"count", a.count}, {"periodic", a.periodic}};
}

Axis axis_from_json(const nlohmann::json& j) {
  return Axis{j.at("name").get<std::string>(), j.at("start").get<double>(), j.at("step").get<double>(),
              j.at("count").get<Index>(), j.at("periodic").get<bool>()};
}

}  // namespace

Index Field::num_points() const {
  Index n = 1;
  for (const auto& a : space) n *= a.count;
  return n;
}

std::vector<Index> Field::shape() const {
  std::vector<Index> s{time.count};
  for (const auto& a : space) s.push_back(a.count);
  s.push_back(num_variables());
  return s;
}

Matrix Field::variable(Index var) const {
  require(0 <= var && var < num_variables(), ErrorCode::kInvalidArgument, "Field::variable: index out of range");
  const Index points = num_points();
  Matrix out(num_times(), points);
  for (Index t = 0; t < num_times(); ++t) {
    for (Index p = 0; p < points; ++p) out(t, p) = at(t, p, var);
  }
  return out;
}

void Field::set_variable(Index var, const Matrix& data) {
  require(0 <= var && var < num_variables(), ErrorCode::kInvalidArgument, "Field::set_variable: index out of range");
  require(data.rows() == num_times() && data.cols() == num_points(), ErrorCode::kShapeMismatch,
          "Field::set_variable: shape mismatch");
  for (Index t = 0; t < num_times(); ++t) {
    for (Index p = 0; p < data.cols(); ++p) at(t, p, var) = data(t, p);
  }
}

Index Field::axis_index(const std::string& name) const {
  for (std::size_t a = 0; a < space.size(); ++a) {
    if (space[a].name == name) return static_cast<Index>(a);
  }
  fail(ErrorCode::kInvalidArgument, "field has no spatial axis '" + name + "'");
}

Field make_field(Axis time, std::vector<Axis> space, std::vector<std::string> variables) {
  require(time.count >= 1 && time.step > 0.0, ErrorCode::kInvalidArgument, "make_field: bad time axis");
  require(!variables.empty(), ErrorCode::kInvalidArgument, "make_field: at least one variable required");
  for (const auto& a : space) {
    require(a.count >= 1 && a.step > 0.0, ErrorCode::kInvalidArgument, "make_field: bad axis " + a.name);
  }
  Field f;
  f.time = std::move(time);
  f.space = std::move(space);
  f.variables = std::move(variables);
  f.values.assign(static_cast<std::size_t>(f.num_times() * f.num_points() * f.num_variables()), 0.0);
  return f;
}

Field time_derivative(const Field& field) {
  require(field.num_times() >= 3, ErrorCode::kTooFewSamples, "time_derivative: need at least 3 snapshots");
  Field out = field;
  const auto stride = static_cast<std::ptrdiff_t>(field.num_points() * field.num_variables());
  for (std::ptrdiff_t j = 0; j < stride; ++j) {
    difference_line(field.values.data() + j, out.values.data() + j, field.num_times(), stride, field.time.step);
  }
  return out;
}

Field spatial_derivative(const Field& field, const std::string& axis, int order) {
  return spatial_derivative(field, field.axis_index(axis), order);
}

Field spatial_derivative(const Field& field, Index axis, int order) {
  require(order >= 1 && order <= 4, ErrorCode::kOrderUnsupported,
          "spatial_derivative: order " + std::to_string(order) + " outside 1..4");
  require(0 <= axis && axis < static_cast<Index>(field.space.size()), ErrorCode::kInvalidArgument,
          "spatial_derivative: axis out of range");
  const Axis& ax = field.space[static_cast<std::size_t>(axis)];
  const Index n = ax.count;

  Index inner = field.num_variables();
  for (std::size_t a = static_cast<std::size_t>(axis) + 1; a < field.space.size(); ++a) inner *= field.space[a].count;
  const Index outer = static_cast<Index>(field.values.size()) / (n * inner);

  Field out = field;
  if (ax.periodic) {
    RealFft fft({static_cast<int>(n)});
    const Vector k = wavenumbers(n, ax.length());
    std::vector<std::complex<double>> factor(fft.spectral_size());
    for (std::size_t m = 0; m < factor.size(); ++m) {
      factor[m] = std::pow(std::complex<double>(0.0, k[static_cast<Index>(m)]), order);
    }
    if (n % 2 == 0 && order % 2 == 1) factor.back() = 0.0;
    std::vector<double> line(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> spec(fft.spectral_size());
    for (Index o = 0; o < outer; ++o) {
      for (Index i = 0; i < inner; ++i) {
        const std::size_t base = static_cast<std::size_t>(o * n * inner + i);
        for (Index p = 0; p < n; ++p) line[static_cast<std::size_t>(p)] = field.values[base + static_cast<std::size_t>(p * inner)];
        fft.forward(line.data(), spec.data());
        for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= factor[m];
        fft.inverse(spec.data(), line.data());
        for (Index p = 0; p < n; ++p) out.values[base + static_cast<std::size_t>(p * inner)] = line[static_cast<std::size_t>(p)];
      }
    }
    return out;
  }

  require(n >= 3, ErrorCode::kTooFewSamples, "spatial_derivative: need at least 3 points on a bounded axis");
  std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  for (Index o = 0; o < outer; ++o) {
    for (Index i = 0; i < inner; ++i) {
      const std::size_t base = static_cast<std::size_t>(o * n * inner + i);
      for (Index p = 0; p < n; ++p) a[static_cast<std::size_t>(p)] = field.values[base + static_cast<std::size_t>(p * inner)];
      for (int r = 0; r < order; ++r) {
        difference_line(a.data(), b.data(), n, 1, ax.step);
        std::swap(a, b);
      }
      for (Index p = 0; p < n; ++p) out.values[base + static_cast<std::size_t>(p * inner)] = a[static_cast<std::size_t>(p)];
    }
  }
  return out;
}

void write_field(const Field& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kIoError, "cannot open " + path + " for writing");
  const auto shape = field.shape();
  const auto rank = static_cast<std::uint64_t>(shape.size());
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
  for (Index s : shape) {
    const auto dim = static_cast<std::uint64_t>(s);
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  }
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  require(static_cast<bool>(out), ErrorCode::kIoError, "failed writing " + path);

  nlohmann::json meta;
  meta["time"] = axis_to_json(field.time);
  meta["space"] = nlohmann::json::array();
  for (const auto& a : field.space) meta["space"].push_back(axis_to_json(a));
  meta["variables"] = field.variables;
  meta["layout"] = "row-major (time, space..., variable), little-endian float64";
  std::ofstream side(path + ".json");
  require(static_cast<bool>(side), ErrorCode::kIoError, "cannot open " + path + ".json for writing");
  side << meta.dump(2) << '\n';
}

Field read_field(const std::string& path) {
  std::ifstream side(path + ".json");
  require(static_cast<bool>(side), ErrorCode::kIoError, "cannot open " + path + ".json");
  nlohmann::json meta;
  try {
    side >> meta;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIoError, path + ".json: " + e.what());
  }
  std::vector<Axis> space;
  for (const auto& a : meta.at("space")) space.push_back(axis_from_json(a));
  Field field = make_field(axis_from_json(meta.at("time")), std::move(space),
                           meta.at("variables").get<std::vector<std::string>>());

  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIoError, "cannot open " + path);
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  require(in && std::memcmp(magic, kMagic, sizeof(kMagic)) == 0, ErrorCode::kIoError, path + ": bad magic");
  std::uint64_t rank = 0;
  in.read(reinterpret_cast<char*>(&rank), sizeof(rank));
  const auto shape = field.shape();
  require(in && rank == shape.size(), ErrorCode::kIoError, path + ": rank disagrees with sidecar");
  for (Index s : shape) {
    std::uint64_t dim = 0;
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    require(in && dim == static_cast<std::uint64_t>(s), ErrorCode::kIoError, path + ": shape disagrees with sidecar");
  }
  in.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  require(static_cast<bool>(in), ErrorCode::kIoError, path + ": truncated data");
  return field;
}

}  // namespace miosindy

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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace miosindy {

// Spatial derivative factor of a PDE library term: d^orders(variable).
struct DerivativeSpec {
  std::size_t variable = 0;
  std::vector<int> orders;  // one entry per spatial axis

  int total_order() const;
  bool operator==(const DerivativeSpec&) const = default;
};

// One candidate library column: prod_j x_j^exponents[j], optionally times a
// spatial derivative of one state variable.
struct Term {
  std::vector<int> exponents;
  std::optional<DerivativeSpec> derivative;
  std::string label;

  int degree() const;
  bool is_constant() const { return degree() == 0 && !derivative; }
  bool operator==(const Term& other) const {
    return exponents == other.exponents && derivative == other.derivative;
  }
};

// "1", "x0", "x0^2 x1" style label for a monomial.
std::string monomial_label(const std::vector<int>& exponents,
                           const std::vector<std::string>& names);

// Default variable names x0, x1, ...
std::vector<std::string> default_variable_names(std::size_t count);

}  // namespace miosindy

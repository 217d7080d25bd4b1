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

#include "miosindy/term.hpp"

namespace miosindy {

int DerivativeSpec::total_order() const {
  int total = 0;
  for (int o : orders) total += o;
  return total;
}

int Term::degree() const {
  int total = 0;
  for (int e : exponents) total += e;
  return total;
}

std::string monomial_label(const std::vector<int>& exponents,
                           const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    if (exponents[j] == 0) continue;
    if (!out.empty()) out += ' ';
    out += j < names.size() ? names[j] : "x" + std::to_string(j);
    if (exponents[j] > 1) out += "^" + std::to_string(exponents[j]);
  }
  return out.empty() ? "1" : out;
}

std::vector<std::string> default_variable_names(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < count; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

}  // namespace miosindy

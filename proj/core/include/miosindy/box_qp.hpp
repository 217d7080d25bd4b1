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

#include "miosindy/linalg.hpp"

namespace miosindy::qp {

// Minimizes x'Hx - 2c'x subject to lower <= x <= upper with a primal
// active-set method. Requires lower <= 0 <= upper and H symmetric PSD.
Result minimize_box(const Matrix& h, const Vector& c, const Vector& lower, const Vector& upper);

}  // namespace miosindy::qp

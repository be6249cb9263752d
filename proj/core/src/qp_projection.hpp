/*
 * Copyright 2026 The cvxrelu Authors
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
 */

#pragma once

// Dual active-set (Goldfarb-Idnani) projection onto a polyhedron:
//   min 1/2 ||x - y||^2  s.t.  CE^T x = 0,  CI^T x + ci0 >= 0.
// Internal to the library.

#include <vector>

#include "cvxrelu/linalg.hpp"

namespace cvxrelu::detail {

struct Projection {
    Vec x;
    // multiplier per equality column / inequality column (zero when inactive)
    Vec u_eq;
    Vec u_in;
    int iterations = 0;
    bool ok = false;
};

Projection project_polyhedron(const Vec& y, const Mat& CE, const Mat& CI, const Vec& ci0, int max_iters);

}  // namespace cvxrelu::detail

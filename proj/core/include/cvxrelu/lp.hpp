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

#include "cvxrelu/linalg.hpp"

namespace cvxrelu {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
    LpStatus status = LpStatus::iteration_limit;
    Vec x;              // primal, length = cols(A)
    Vec y;              // row duals: A^T y <= c at optimality, b^T y = c^T x
    double objective = 0.0;
    int iterations = 0;
    double infeasibility = 0.0;  // phase-one residual (sum of artificials)
};

// min c^T x  s.t.  A x = b, x >= 0.  Dense two-phase tableau simplex, Dantzig
// pricing with a Bland fallback on degenerate stalls; final basis is refactored
// for x and y.
LpResult linprog_standard(const Mat& A, const Vec& b, const Vec& c, int max_iters = 100000);

}  // namespace cvxrelu

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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvxrelu/linalg.hpp"
#include "cvxrelu/network.hpp"

namespace cvxrelu {

struct RegPath {
    double beta = 0.0;
    int active_neuron_count = 0;
    std::string case_label;
    // set when any output weight in the interval is optimal (threshold ties)
    std::optional<std::pair<double, double>> weight_interval;
};

struct ClosedForm {
    Network net;
    RegPath path;
    double objective = 0.0;
};

// min-l0 interpolating network: u = A^+(+-y)_+ / ||.||, w = +-||A^+(+-y)_+||
Network l0_closed_form(const Mat& A, const Vec& y);

// squared loss + beta ||w||_1 on whitened A
ClosedForm regularized_whitened(const Mat& A, const Vec& y, double beta);
// hinge loss + beta ||w||_1 on whitened A, labels +-1
ClosedForm hinge_whitened(const Mat& A, const Vec& y, double beta);
// 1/2 ||F - Y||_F^2 + beta sum_j ||W_j||_2 on whitened A, one-hot Y
ClosedForm multiclass_whitened(const Mat& A, const Mat& Y, double beta);
// interpolating vector-output network with l1-regularized rows ||A^+(y_k)_+|| e_k
Network l1_vector_closed_form(const Mat& A, const Mat& Y);

// 1-D non-uniqueness example: two equality-constrained constructions and four
// regularized solutions with equal objective but different functions
struct FixtureSolution {
    std::string label;
    Mat Ae;        // (a u^T + 1 b^T)_+
    Network net;
    double objective = 0.0;
};

struct NonuniquenessFixture {
    Vec a, y;
    double beta = 1e-4;
    Vec v_star, v_hat;  // published dual vectors of the two equality constructions
    std::vector<FixtureSolution> equality;     // objective = ||w||_1
    std::vector<FixtureSolution> regularized;  // objective = beta ||w||_1 + 1/(2n) ||Ae w - y||^2
};

NonuniquenessFixture nonuniqueness_fixture();
Mat hinge_matrix_1d(const Vec& a, const Vec& u, const Vec& b);
double scaled_lasso_objective(const Mat& Ae, const Vec& w, const Vec& y, double beta);

}  // namespace cvxrelu

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

#include <cstdint>

#include <Eigen/QR>

#include "cvxrelu/linalg.hpp"
#include "cvxrelu/random.hpp"

namespace cvxrelu::testing {

// n x d with orthonormal rows
inline Mat whitened_matrix(Index n, Index d, std::uint64_t seed) {
    Rng rng(seed);
    Mat G = gaussian_matrix(d, n, rng);
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ() * Mat::Identity(d, n);
    return Q.transpose();
}

inline Mat one_hot(const std::vector<int>& labels, int o) {
    Mat Y = Mat::Zero(Index(labels.size()), o);
    for (size_t i = 0; i < labels.size(); ++i) Y(Index(i), labels[i]) = 1.0;
    return Y;
}

// class sizes -> label list, classes in blocks
inline std::vector<int> blocks(const std::vector<int>& sizes) {
    std::vector<int> out;
    for (size_t k = 0; k < sizes.size(); ++k)
        for (int i = 0; i < sizes[k]; ++i) out.push_back(int(k));
    return out;
}

inline Mat col(const Vec& a) {
    Mat A(a.size(), 1);
    A.col(0) = a;
    return A;
}

}  // namespace cvxrelu::testing

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

#include "cvxrelu/random.hpp"

namespace cvxrelu {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Mat gaussian_matrix(Index rows, Index cols, Rng& rng, double stddev) {
    std::normal_distribution<double> nd(0.0, stddev);
    Mat M(rows, cols);
    // fill row by row so the layout does not depend on storage order
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) M(i, j) = nd(rng);
    return M;
}

Vec gaussian_vector(Index n, Rng& rng, double stddev) {
    std::normal_distribution<double> nd(0.0, stddev);
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = nd(rng);
    return v;
}

Vec random_unit_vector(Index d, Rng& rng) {
    for (;;) {
        Vec v = gaussian_vector(d, rng);
        double nv = v.norm();
        if (nv > 1e-300) return v / nv;
    }
}

}  // namespace cvxrelu

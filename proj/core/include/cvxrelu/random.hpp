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
#include <random>

#include "cvxrelu/linalg.hpp"

namespace cvxrelu {

using Rng = std::mt19937_64;

// splitmix64 mix of (seed, index); stable per-item streams
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

Mat gaussian_matrix(Index rows, Index cols, Rng& rng, double stddev = 1.0);
Vec gaussian_vector(Index n, Rng& rng, double stddev = 1.0);
Vec random_unit_vector(Index d, Rng& rng);

}  // namespace cvxrelu

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
#include <optional>
#include <vector>

#include "cvxrelu/linalg.hpp"
#include "cvxrelu/network.hpp"
#include "cvxrelu/solvers.hpp"

namespace cvxrelu {

// nonconvex restart searches
struct SearchConfig {
    int restarts = 200;
    int max_iters = 200;
    std::uint64_t seed = 0;
};

enum class SpikeFreeStatus { certified_spike_free, certified_not_spike_free, inconclusive };
enum class SpikeFreeMethod { analytic_whitened, analytic_rank_one, analytic_diagonal, numeric_search };

const char* to_string(SpikeFreeStatus s);
const char* to_string(SpikeFreeMethod m);

struct SpikeFreeVerdict {
    SpikeFreeStatus status = SpikeFreeStatus::inconclusive;
    std::optional<Vec> witness_u;
    double max_ratio = 0.0;        // best ||A^+ (Au)_+|| found on the unit sphere
    SpikeFreeMethod method = SpikeFreeMethod::numeric_search;
    double range_violation = 0.0;  // best ||(I - A A^+)(Au)_+|| found (rank deficient A)
};

// ||A^+ (A u)_+||
double spike_free_ratio(const Mat& A, const Mat& A_pinv, const Vec& u);
SpikeFreeVerdict spike_free_check(const Mat& A, const SearchConfig& cfg = {});

// A A^T diagonal (rows mutually orthogonal), covers diagonal and Sigma V^T forms
bool has_orthogonal_rows(const Mat& A, double tol = 1e-10);

struct RankOneFactors {
    Vec c;  // n
    Vec a;  // d, unit norm
};
std::optional<RankOneFactors> rank_one_factors(const Mat& A);

// cheap analytic spike-free test (whitened, orthogonal rows, same-sign rank one)
bool analytically_spike_free(const Mat& A);

struct ReluMax {
    double value = 0.0;
    Vec u;
    double b = 0.0;
    bool exact = false;  // true when the value is the global supremum
    bool unbounded = false;
};

// sup over ||u|| <= 1 (and b when bias) of v^T (A u + b 1)_+
ReluMax maximize_relu(const Mat& A, const Vec& v, bool bias, const SearchConfig& cfg = {});
// sup of |v^T (A u + b 1)_+|; sign of the attaining side is stored in value's sign-free form, u/b attain it
struct AbsReluMax {
    ReluMax best;
    double sign = 1.0;  // +1: attained by v, -1: attained by -v
};
AbsReluMax maximize_abs_relu(const Mat& A, const Vec& v, bool bias, const SearchConfig& cfg = {});

// one local maximum per anchor row with bias (a single entry without), best first
std::vector<ReluMax> relu_candidates(const Mat& A, const Vec& v, bool bias, const SearchConfig& cfg = {});

std::vector<Vec> sample_rectified_ellipsoid(const Mat& A, int count, std::uint64_t seed);

struct PolarSample {
    std::vector<Vec> points;
    int skipped = 0;
};
// s(g) = max_{||u|| <= 1} g^T (A u)_+
double polar_support(const Mat& A, const Vec& g, const SearchConfig& cfg = {});
PolarSample sample_polar(const Mat& A, int count, std::uint64_t seed, const SearchConfig& cfg = {});

Neuron extreme_point_basis(const Mat& A, Index i, const SolverConfig& cfg = {});
Neuron extreme_point_direction(const Mat& A, const Vec& alpha, const std::vector<Index>& S,
                               const SolverConfig& cfg = {});

std::vector<Neuron> enumerate_extremes_1d(const Vec& a);
std::vector<Neuron> enumerate_extremes_rankone(const Vec& c, const Vec& a);

double hull_distance(const Mat& A, Index i, const SolverConfig& cfg = {});

// samples with a_i^T u + b >= -tol
std::vector<Index> activation_pattern(const Mat& A, const Neuron& nr, double tol = 1e-8);
// S active (>= -tol) and complement inactive (<= tol)
bool pattern_matches(const Mat& A, const Neuron& nr, const std::vector<Index>& S, double tol = 1e-8);

}  // namespace cvxrelu

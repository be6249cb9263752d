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

#include <benchmark/benchmark.h>

#include "cvxrelu/closed_form.hpp"
#include "cvxrelu/geometry.hpp"
#include "cvxrelu/random.hpp"
#include "cvxrelu/solvers.hpp"
#include "cvxrelu/training.hpp"

using namespace cvxrelu;

namespace {

Dataset gaussian_regression(Index n, Index d, std::uint64_t seed) {
    Rng rng(seed);
    Mat A = gaussian_matrix(n, d, rng);
    return make_regression(A, gaussian_vector(n, rng));
}

void BM_Lasso(benchmark::State& st) {
    Rng rng(1);
    const Index n = st.range(0);
    Mat B = gaussian_matrix(n, 4 * n, rng);
    Vec y = gaussian_vector(n, rng);
    for (auto _ : st) benchmark::DoNotOptimize(lasso(B, y, 0.1).report.objective);
}
BENCHMARK(BM_Lasso)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_BasisPursuit(benchmark::State& st) {
    Rng rng(2);
    const Index n = st.range(0);
    Mat B = gaussian_matrix(n, 3 * n, rng);
    Vec y = gaussian_vector(n, rng);
    for (auto _ : st) benchmark::DoNotOptimize(basis_pursuit(B, y).report.objective);
}
BENCHMARK(BM_BasisPursuit)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_ConeBall(benchmark::State& st) {
    Rng rng(3);
    const Index n = st.range(0);
    Mat A = gaussian_matrix(n, 2 * n, rng);
    Vec v = gaussian_vector(n, rng);
    for (auto _ : st) benchmark::DoNotOptimize(cone_ball_lp(A, v).value);
}
BENCHMARK(BM_ConeBall)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_MaximizeRelu(benchmark::State& st) {
    Rng rng(4);
    Mat A = gaussian_matrix(20, 10, rng);
    Vec v = gaussian_vector(20, rng);
    SearchConfig cfg;
    cfg.restarts = int(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(maximize_relu(A, v, false, cfg).value);
}
BENCHMARK(BM_MaximizeRelu)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_CuttingPlane(benchmark::State& st) {
    Dataset ds = gaussian_regression(st.range(0), 2 * st.range(0), 5);
    for (auto _ : st) benchmark::DoNotOptimize(cutting_plane_train(ds, false, 0.1, Loss::squared).report.gap);
}
BENCHMARK(BM_CuttingPlane)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ClosedFormWhitened(benchmark::State& st) {
    Dataset ds = gaussian_regression(st.range(0), 2 * st.range(0), 6);
    Mat W = whiten(ds).A_white;
    for (auto _ : st) benchmark::DoNotOptimize(regularized_whitened(W, ds.y, 0.1).objective);
}
BENCHMARK(BM_ClosedFormWhitened)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_HullDistance(benchmark::State& st) {
    Rng rng(7);
    Mat A = gaussian_matrix(st.range(0), 21, rng);
    for (auto _ : st) benchmark::DoNotOptimize(hull_distance(A, 0));
}
BENCHMARK(BM_HullDistance)->Arg(6)->Arg(30)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

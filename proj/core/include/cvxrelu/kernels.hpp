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

#include <functional>
#include <string>
#include <vector>

#include "cvxrelu/linalg.hpp"
#include "cvxrelu/network.hpp"
#include "cvxrelu/solvers.hpp"

namespace cvxrelu {

// K_ij = (a_i - a_j)_+
Mat adaptive_kernel_matrix(const Vec& a);

// kappa(u) = u kappa0(u) + kappa1(u)
double ntk_kappa(double u);
// |x||z| kappa(x z / (|x||z|)), zeros nudged to 1e-12
double ntk_kernel_1d(double x, double z);
// same kernel on vectors; with bias the inputs are (x, 1)
double ntk_kernel(const Vec& x, const Vec& z);
Mat ntk_kernel_matrix(const Vec& a);
Mat ntk_kernel_matrix_bias(const Vec& a);

enum class KernelKind { adaptive_relu_l1, ntk_l2 };
const char* to_string(KernelKind k);

struct KernelConfig {
    SolverConfig solver;
    // the plain 1D kernel has rank <= 2; the bias-augmented one is full rank on distinct points
    bool ntk_bias = true;
    double max_condition = 1e12;
};

struct KernelFit {
    KernelKind kind = KernelKind::adaptive_relu_l1;
    Vec train_points;
    Vec weights;          // ntk: one per train point; adaptive: one per dictionary atom
    Network net;          // adaptive fits: the equivalent ReLU network
    bool ntk_bias = true;
    double objective = 0.0;  // ||w||_1 (adaptive) or ||w||_2^2 (ntk)

    double predict(double x) const;
    Vec predict(const Vec& x) const;
};

KernelFit fit(KernelKind kind, const Vec& a, const Vec& y, const KernelConfig& cfg = {});

// uniform grid on [min a - 0.5, max a + 0.5]
Vec diagnostic_grid(const Vec& a, int points = 1000);

// max |f[x0,x1,x2]| over grid triples strictly inside (a_k, a_{k+1}) for consecutive sorted data points
double max_interior_second_difference(const std::function<double(double)>& f, const Vec& a, int points = 1000);

// piecewise-linear interpolant through (a, y), constant extension outside the data range
double linear_interpolant(const Vec& a, const Vec& y, double x);

}  // namespace cvxrelu

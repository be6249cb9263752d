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
#include <vector>

#include "cvxrelu/linalg.hpp"

namespace cvxrelu {

struct SolverConfig {
    int max_iters = 20000;
    double abs_tol = 1e-8;
    double rel_tol = 1e-6;
    double rho = 1.0;  // ADMM penalty, adapted on 10x residual imbalance
    std::uint64_t seed = 0;

    void validate() const;
};

struct SolveReport {
    double objective = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    double wall_time_ms = 0.0;
};

enum class Sense { max, min };
enum class Loss { squared, hinge };

const char* to_string(Loss l);
double loss_value(Loss loss, const Vec& f, const Vec& y);

// Column penalties: an empty vector means all ones; a zero entry marks an
// unpenalized column (used for the output intercept).

struct L1Result {
    Vec w;
    Vec dual;  // bp: v with |B^T v| <= p; lasso: residual y - Bw; l1_svm: v = y .* theta
    SolveReport report;
};

// min sum p_j |w_j|  s.t.  B w = y
L1Result basis_pursuit(const Mat& B, const Vec& y, const SolverConfig& cfg = {}, const Vec& penalty = Vec());

// min 1/2 ||B w - y||^2 + beta sum p_j |w_j|
L1Result lasso(const Mat& B, const Vec& y, double beta, const SolverConfig& cfg = {},
               const Vec& penalty = Vec());

// min sum_i max(0, 1 - y_i (Bw)_i) + beta sum p_j |w_j|
L1Result l1_svm(const Mat& B, const Vec& y, double beta, const SolverConfig& cfg = {},
                const Vec& penalty = Vec());

struct SimplexLsResult {
    Vec lambda;
    double distance = 0.0;  // ||G lambda - target||
    SolveReport report;
};

// min ||G lambda - target|| over the unit simplex
SimplexLsResult simplex_ls(const Mat& G, const Vec& target, const SolverConfig& cfg = {});

struct NnlsResult {
    Vec x;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// min ||M x - b||  s.t.  x >= 0   (Lawson-Hanson active set)
NnlsResult nnls(const Mat& M, const Vec& b, int max_iters = 0);

// Euclidean projection onto {u : M u >= 0}
Vec project_polyhedral_cone(const Mat& M, const Vec& x);

struct ConeBallResult {
    Vec u;
    double value = 0.0;
    SolveReport report;
};

// max c^T u  s.t.  M u >= 0, ||u|| <= 1
ConeBallResult cone_ball_max(const Mat& M, const Vec& c);

// max (or min) v^T A u  s.t.  A u >= 0, ||u|| <= 1
ConeBallResult cone_ball_lp(const Mat& A, const Vec& v, Sense sense = Sense::max,
                            const SolverConfig& cfg = {});

using Groups = std::vector<std::vector<Index>>;
Groups singleton_groups(Index k);

struct GroupResult {
    Mat W;     // k x o
    Mat dual;  // n x o: eq: V with ||B_g^T V|| <= p_g; regularized: residual Y - BW
    SolveReport report;
};

// min sum_g p_g ||W_g||_F  s.t.  B W = Y   (ADMM)
GroupResult group_lasso_eq(const Mat& B, const Mat& Y, const Groups& groups, const SolverConfig& cfg = {},
                           const Vec& penalty = Vec());

// min 1/2 ||B W - Y||_F^2 + beta sum_g p_g ||W_g||_F   (block coordinate descent)
GroupResult group_lasso(const Mat& B, const Mat& Y, const Groups& groups, double beta,
                        const SolverConfig& cfg = {}, const Vec& penalty = Vec());

struct SpikeFreeProgramResult {
    Vec w1, w2;
    SolveReport report;
};

// min loss(A(w1 - w2), y) + beta (||w1|| + ||w2||)  s.t.  A w1 >= 0, A w2 >= 0
SpikeFreeProgramResult spikefree_convex_train(const Mat& A, const Vec& y, double beta, Loss loss,
                                              const SolverConfig& cfg = {});

// min ||w1|| + ||w2||  s.t.  A(w1 - w2) = y, A w1 >= 0, A w2 >= 0
SpikeFreeProgramResult spikefree_convex_train_eq(const Mat& A, const Vec& y, const SolverConfig& cfg = {});

}  // namespace cvxrelu

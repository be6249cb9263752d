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

#include "cvxrelu/geometry.hpp"
#include "cvxrelu/linalg.hpp"
#include "cvxrelu/network.hpp"
#include "cvxrelu/solvers.hpp"

namespace cvxrelu {

struct TrainConfig {
    SolverConfig solver;
    SearchConfig search{50, 200, 0};
    int max_rounds = 50;
    double viol_tol = 1e-4;
    int max_new_per_round = 6;
    // output intercept column; defaults to the bias setting of the neurons
    std::optional<bool> fit_intercept;
};

struct DualCertificate {
    Vec v;                 // scaled, feasible dual vector (scalar output)
    Mat V;                 // vector output
    double max_constraint = 0.0;  // largest |v^T (Au+b)_+| found, before scaling
    int verified_neurons = 0;
    bool exact = false;    // verification maximizer was exact
    double dual_objective = 0.0;
};

struct TrainReport {
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0;
    int rounds = 0;
    int neurons_added = 0;
    bool converged = false;
    std::vector<std::pair<int, double>> history;  // (round, gap)
    std::vector<double> master_objectives;        // per round
    bool spike_free_warning = false;
    bool certificate_exact = false;
    std::string mode;
};

struct TrainResult {
    Network net;
    TrainReport report;
};

TrainResult cutting_plane_train(const Dataset& ds, bool use_bias, double beta, Loss loss, const TrainConfig& cfg = {});

TrainResult dictionary_train(const Dataset& ds, const std::vector<Neuron>& neurons, double beta, Loss loss,
                             const TrainConfig& cfg = {});

TrainResult spikefree_train(const Dataset& ds, double beta, Loss loss, const TrainConfig& cfg = {});

struct GapResult {
    DualCertificate cert;
    double primal = 0.0;
    double gap = 0.0;
};

GapResult duality_gap(const Dataset& ds, const Network& net, double beta, Loss loss, const TrainConfig& cfg = {});

enum class VectorVariant { group_l2, l1_per_class };

TrainResult vector_cutting_plane(const Dataset& ds, VectorVariant variant, double beta, const TrainConfig& cfg = {},
                                 bool use_bias = false);

// objective of a vector-output network under the given variant
double vector_objective(const Network& net, const Dataset& ds, VectorVariant variant, double beta);

struct GdConfig {
    int max_iters = 200000;
    double step = 1e-2;
    bool use_bias = true;
    Loss loss = Loss::squared;
    double stall_tol = 1e-13;  // relative objective change per 1000 iterations
};

// full-batch gradient descent on loss + beta/2 (||w||^2 + ||U||_F^2)
TrainResult reference_gd_train(const Dataset& ds, int m, double beta, double init_std, std::uint64_t seed,
                               const GdConfig& cfg = {});

struct GapSweepPoint {
    int m = 0;
    double primal = 0.0;
    double gap = 0.0;
};

// nested dictionaries (optimal support first); gap(m) = P_m - certified dual of the full dictionary
std::vector<GapSweepPoint> gap_sweep(const Dataset& ds, const std::vector<Neuron>& dictionary, double beta, Loss loss,
                                     int max_m, const TrainConfig& cfg = {});

std::string report_to_json(const TrainReport& r, int indent = 2);

}  // namespace cvxrelu

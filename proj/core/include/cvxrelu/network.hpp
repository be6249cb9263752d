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
#include "cvxrelu/solvers.hpp"

namespace cvxrelu {

enum class Provenance {
    unspecified,
    basis_direction,
    general_direction,
    one_dim,
    rank_one,
    closed_form,
    cutting_plane,
    dictionary,
    spike_free,
    gradient_descent,
    patch_filter,
};

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct Neuron {
    Vec u;
    std::optional<double> b;
    Provenance provenance = Provenance::unspecified;
    int source = -1;  // sample index / direction index that produced it, -1 if none
    // set when every bias in [lo, hi] gives the same objective
    std::optional<std::pair<double, double>> bias_interval;

    double bias() const { return b.value_or(0.0); }
};

struct Network {
    std::vector<Neuron> neurons;
    Vec w;      // scalar output weights (m)
    Mat W;      // vector output weights (m x o); used when W.cols() > 0
    bool has_bias = false;
    Vec intercept;  // optional output offset: empty, or length 1 / o

    bool vector_output() const { return W.cols() > 0; }
    Index m() const { return Index(neurons.size()); }
    Index outputs() const { return vector_output() ? W.cols() : 1; }

    // throws InvalidInput on inconsistent shapes
    void validate() const;

    Vec predict(const Mat& A) const;       // scalar networks
    Mat predict_all(const Mat& A) const;   // n x outputs()
    Vec predict_1d(const Vec& x) const;    // d == 1 convenience
};

// (A U + 1 b^T)_+ , n x m
Mat activations(const Mat& A, const std::vector<Neuron>& neurons);

// sum_j |w_j| ||u_j||  (or ||W_j|| ||u_j||)
double path_norm(const Network& net);
// 1/2 (||w||^2 + ||U||_F^2), biases excluded
double weight_decay(const Network& net);
// u_j <- a_j u_j, b_j <- a_j b_j, w_j <- w_j / a_j
Network rescale(const Network& net, const Vec& alpha);
// rescaling that minimizes weight_decay (it then equals path_norm)
Network balance(const Network& net);
// unit-norm hidden weights, same function
Network normalize_neurons(const Network& net);

// loss + beta * path_norm; multiclass uses the squared Frobenius loss
double regularized_objective(const Network& net, const Dataset& ds, double beta, Loss loss);

std::string network_to_json(const Network& net, int indent = 2);
Network network_from_json(const std::string& text);

}  // namespace cvxrelu

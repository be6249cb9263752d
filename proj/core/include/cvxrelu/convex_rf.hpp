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
#include <string>
#include <vector>

#include "cvxrelu/linalg.hpp"
#include "cvxrelu/network.hpp"
#include "cvxrelu/solvers.hpp"

namespace cvxrelu {

// grayscale images, one flattened (row-major h x w) image per row
struct ImageSet {
    Index h = 0;
    Index w = 0;
    Mat pixels;
    Index count() const { return pixels.rows(); }
    void validate() const;
};

struct PatchSet {
    Mat P;  // patches x patch_dim
    double epsilon_norm = 1e-5;
    bool whitened = false;
    std::optional<Mat> zca_map;
};

// per-row: subtract the mean, divide by sqrt(max(var, eps))
Mat normalize_patches(const Mat& P, double eps = 1e-5);

// all patch positions along one axis
std::vector<Index> patch_positions(Index size, int patch, int stride);

// `count` normalized patches; without replacement when enough positions exist
PatchSet extract_patches(const ImageSet& images, int patch, int stride, int count, std::uint64_t seed,
                         double eps_norm = 1e-5);

// P V (D + eps I)^{-1/2} V^T with V D V^T = P^T P / rows
PatchSet zca_whiten_patches(const PatchSet& ps, double eps = 0.1);

struct FilterReport {
    std::vector<Neuron> filters;
    int degenerate = 0;
};

// extreme point direction of each patch against its competitors (0 = all other patches)
FilterReport filters_from_patches(const PatchSet& ps, int competitors = 0, std::uint64_t seed = 0,
                                  const SolverConfig& cfg = {});

struct ConvexRfConfig {
    int patch = 3;
    int stride = 1;
    int pool = 2;  // pool x pool max-pooling cells over patch positions
    int count = 60;
    double beta = 1e-3;
    double norm_eps = 1e-5;
    double zca_eps = 0.1;
    bool zca = true;
    int competitors = 0;
    std::uint64_t seed = 0;
    SolverConfig solver;
    void validate() const;
};

struct ConvexRfModel {
    ConvexRfConfig cfg;
    Index h = 0, w = 0;
    Mat zca_map;   // patch_dim x patch_dim (identity without ZCA)
    Mat U;         // patch_dim x filters, unit columns
    Vec weights;   // filters * pool * pool
    double intercept = 0.0;
    int degenerate_patches = 0;
    SolveReport report;

    Vec decision(const ImageSet& images) const;
    Vec predict(const ImageSet& images) const;  // +-1
};

// max-pooled ReLU filter responses, images x (filters * pool^2)
Mat convex_rf_features(const ConvexRfModel& model, const ImageSet& images);

// labels are +-1
ConvexRfModel convex_rf_train(const ImageSet& images, const Vec& labels, const ConvexRfConfig& cfg = {});

double accuracy(const Vec& predicted, const Vec& labels);

std::string convex_rf_to_json(const ConvexRfModel& model, int indent = 2);
ConvexRfModel convex_rf_from_json(const std::string& text);

// class +1: bright top half, class -1: bright bottom half, Gaussian pixel noise
struct LabeledImages {
    ImageSet images;
    Vec labels;
};
LabeledImages synthetic_two_class_images(int n, Index h, Index w, std::uint64_t seed, double noise = 0.3);

}  // namespace cvxrelu

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

#include <Eigen/Dense>
#include <string>

namespace cvxrelu {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

// relative singular value cutoff used for every rank decision
inline constexpr double kRankTol = 1e-10;

enum class Task { regression, binary_hinge, multiclass };

const char* to_string(Task t);

struct Dataset {
    Mat A;  // n x d, rows are samples
    Vec y;  // scalar targets (regression, binary_hinge)
    Mat Y;  // n x o targets (multiclass)
    Task task = Task::regression;
    std::string name;

    Index n() const { return A.rows(); }
    Index d() const { return A.cols(); }
    Index outputs() const { return task == Task::multiclass ? Y.cols() : 1; }
    bool vector_output() const { return task == Task::multiclass; }

    // throws InvalidInput when an invariant is broken
    void validate() const;
};

Dataset make_regression(Mat A, Vec y, std::string name = {});
Dataset make_binary(Mat A, Vec y, std::string name = {});
Dataset make_multiclass(Mat A, Mat Y, std::string name = {});

struct SvdFactors {
    Mat U_left;             // n x r
    Vec singular_values;    // r, nonincreasing
    Mat V_right;            // d x r
    int rank = 0;
};

SvdFactors svd(const Mat& A);
int numerical_rank(const Mat& A);
Mat pseudo_inverse(const Mat& A);

struct WhitenedDataset {
    Dataset base;
    Mat A_white;      // n x d, A_white * A_white^T = I
    Mat forward_map;  // d x d, x_white = x * forward_map (row convention)
    int rank = 0;

    // maps rows of X (original feature space) to the whitened space
    Mat apply(const Mat& X) const { return X * forward_map; }
};

WhitenedDataset whiten(const Dataset& ds);

// ||A A^T - I||_F
double whiteness_residual(const Mat& A);
bool is_whitened(const Mat& A, double tol = 1e-6);

inline Vec relu(const Vec& x) { return x.cwiseMax(0.0); }
inline Mat relu(const Mat& x) { return x.cwiseMax(0.0); }

void require_finite(const Mat& A, const char* what);

}  // namespace cvxrelu

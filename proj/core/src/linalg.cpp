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

#include "cvxrelu/linalg.hpp"

#include <cmath>

#include "cvxrelu/errors.hpp"

namespace cvxrelu {

const char* to_string(Task t) {
    switch (t) {
        case Task::regression: return "regression";
        case Task::binary_hinge: return "binary-hinge";
        case Task::multiclass: return "multiclass";
    }
    return "?";
}

void require_finite(const Mat& A, const char* what) {
    if (!A.allFinite()) throw InvalidInput(std::string(what) + " has non-finite entries");
}

void Dataset::validate() const {
    if (A.rows() < 1 || A.cols() < 1) throw InvalidInput("dataset needs n >= 1 and d >= 1");
    require_finite(A, "A");
    if (task == Task::multiclass) {
        if (Y.rows() != A.rows()) throw InvalidInput("Y row count differs from n");
        for (Index i = 0; i < Y.rows(); ++i) {
            int ones = 0;
            for (Index j = 0; j < Y.cols(); ++j) {
                if (Y(i, j) == 1.0) ++ones;
                else if (Y(i, j) != 0.0) throw InvalidInput("Y is not one-hot at row " + std::to_string(i));
            }
            if (ones != 1) throw InvalidInput("Y is not one-hot at row " + std::to_string(i));
        }
        return;
    }
    if (y.size() != A.rows()) throw InvalidInput("y length differs from n");
    require_finite(y, "y");
    if (task == Task::binary_hinge) {
        for (Index i = 0; i < y.size(); ++i)
            if (y(i) != 1.0 && y(i) != -1.0) throw InvalidInput("hinge labels must be +1/-1");
    }
}

Dataset make_regression(Mat A, Vec y, std::string name) {
    Dataset ds{std::move(A), std::move(y), Mat(), Task::regression, std::move(name)};
    ds.validate();
    return ds;
}

Dataset make_binary(Mat A, Vec y, std::string name) {
    Dataset ds{std::move(A), std::move(y), Mat(), Task::binary_hinge, std::move(name)};
    ds.validate();
    return ds;
}

Dataset make_multiclass(Mat A, Mat Y, std::string name) {
    Dataset ds{std::move(A), Vec(), std::move(Y), Task::multiclass, std::move(name)};
    ds.validate();
    return ds;
}

SvdFactors svd(const Mat& A) {
    require_finite(A, "A");
    SvdFactors f;
    if (A.size() == 0) return f;
    Eigen::BDCSVD<Mat> s(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = s.singularValues();
    int r = 0;
    if (sv.size() > 0 && sv(0) > 0.0) {
        const double cut = kRankTol * sv(0);
        while (r < sv.size() && sv(r) > cut) ++r;
    }
    f.rank = r;
    f.singular_values = sv.head(r);
    f.U_left = s.matrixU().leftCols(r);
    f.V_right = s.matrixV().leftCols(r);
    return f;
}

int numerical_rank(const Mat& A) { return svd(A).rank; }

Mat pseudo_inverse(const Mat& A) {
    SvdFactors f = svd(A);
    if (f.rank == 0) return Mat::Zero(A.cols(), A.rows());
    return f.V_right * f.singular_values.cwiseInverse().asDiagonal() * f.U_left.transpose();
}

WhitenedDataset whiten(const Dataset& ds) {
    SvdFactors f = svd(ds.A);
    const Index n = ds.n(), d = ds.d();
    if (f.rank < n)
        throw NotWhitenable("rank " + std::to_string(f.rank) + " < n = " + std::to_string(n), f.rank);
    WhitenedDataset w;
    w.base = ds;
    w.rank = f.rank;
    // rank == n here, so A V S^-1 = U_left exactly; pad with zero columns to keep d features
    w.forward_map = Mat::Zero(d, d);
    w.forward_map.leftCols(n) = f.V_right * f.singular_values.cwiseInverse().asDiagonal();
    w.A_white = Mat::Zero(n, d);
    w.A_white.leftCols(n) = f.U_left;
    w.base.A = w.A_white;
    return w;
}

double whiteness_residual(const Mat& A) {
    return (A * A.transpose() - Mat::Identity(A.rows(), A.rows())).norm();
}

bool is_whitened(const Mat& A, double tol) {
    return A.rows() <= A.cols() && whiteness_residual(A) <= tol;
}

}  // namespace cvxrelu

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

#include "doctest.h"

#include "cvxrelu/errors.hpp"
#include "cvxrelu/linalg.hpp"
#include "support.hpp"

using namespace cvxrelu;

TEST_CASE("svd of the identity") {
    SvdFactors f = svd(Mat::Identity(3, 3));
    CHECK(f.rank == 3);
    CHECK((f.singular_values - Vec::Ones(3)).norm() < 1e-14);
}

TEST_CASE("svd drops zero singular values") {
    Mat A(2, 2);
    A << 3, 0, 0, 0;
    SvdFactors f = svd(A);
    CHECK(f.rank == 1);
    CHECK(f.singular_values(0) == doctest::Approx(3.0));
}

TEST_CASE("svd reconstructs a gaussian matrix") {
    Rng rng(11);
    Mat A = gaussian_matrix(5, 7, rng);
    SvdFactors f = svd(A);
    Mat R = f.U_left * f.singular_values.asDiagonal() * f.V_right.transpose();
    CHECK((A - R).norm() <= 1e-8 * A.norm());
    CHECK((f.U_left.transpose() * f.U_left - Mat::Identity(f.rank, f.rank)).norm() < 1e-10);
    CHECK((f.V_right.transpose() * f.V_right - Mat::Identity(f.rank, f.rank)).norm() < 1e-10);
}

TEST_CASE("svd rejects non-finite input") {
    Mat A = Mat::Ones(2, 2);
    A(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(svd(A), InvalidInput);
}

TEST_CASE("pseudo-inverse of a scaled identity") {
    Mat P = pseudo_inverse(2.0 * Mat::Identity(2, 2));
    CHECK((P - 0.5 * Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("pseudo-inverse of a wide full-row-rank matrix is a right inverse") {
    Rng rng(3);
    Mat A = gaussian_matrix(2, 4, rng);
    CHECK((A * pseudo_inverse(A) - Mat::Identity(2, 2)).norm() < 1e-8);
}

TEST_CASE("pseudo-inverse of a rank-one matrix") {
    Vec c(3), a(2);
    c << 1, -2, 0.5;
    a << 3, 4;
    Mat A = c * a.transpose();
    Mat expect = a * c.transpose() / (a.squaredNorm() * c.squaredNorm());
    CHECK((pseudo_inverse(A) - expect).norm() < 1e-8);
    CHECK((A * pseudo_inverse(A) * A - A).norm() < 1e-7 * A.norm());
}

TEST_CASE("double pseudo-inverse gives back a full-rank matrix") {
    Rng rng(5);
    Mat A = gaussian_matrix(4, 6, rng);
    CHECK((pseudo_inverse(pseudo_inverse(A)) - A).norm() < 1e-6 * A.norm());
}

TEST_CASE("whitening an orthonormal-row matrix keeps it white") {
    Mat A = testing::whitened_matrix(3, 5, 1);
    CHECK(whiteness_residual(A) < 1e-10);
    WhitenedDataset w = whiten(make_regression(A, Vec::Ones(3)));
    CHECK(whiteness_residual(w.A_white) < 1e-10);
    CHECK(std::abs(whiteness_residual(w.A_white) - whiteness_residual(A)) < 1e-10);
}

TEST_CASE("whitening a gaussian matrix") {
    Rng rng(9);
    Mat A = gaussian_matrix(4, 10, rng);
    WhitenedDataset w = whiten(make_regression(A, Vec::Ones(4)));
    CHECK((w.A_white * w.A_white.transpose() - Mat::Identity(4, 4)).norm() < 1e-8);
    CHECK(w.rank == 4);
    // out-of-sample map sends the training rows to the whitened rows
    CHECK((w.apply(A) - w.A_white).norm() < 1e-8);
}

TEST_CASE("tall data cannot be whitened") {
    Rng rng(2);
    Mat A = gaussian_matrix(5, 3, rng);
    try {
        whiten(make_regression(A, Vec::Ones(5)));
        FAIL("expected NotWhitenable");
    } catch (const NotWhitenable& e) {
        CHECK(e.rank() == 3);
    }
}

TEST_CASE("dataset invariants") {
    CHECK_THROWS_AS(make_regression(Mat(0, 2), Vec(0)), InvalidInput);
    CHECK_THROWS_AS(make_regression(Mat::Ones(2, 2), Vec::Ones(3)), InvalidInput);
    Vec y(2);
    y << 1, 0.5;
    CHECK_THROWS_AS(make_binary(Mat::Ones(2, 2), y), InvalidInput);
    Mat Y(2, 2);
    Y << 1, 1, 0, 1;
    CHECK_THROWS_AS(make_multiclass(Mat::Ones(2, 2), Y), InvalidInput);
    Dataset ok = make_multiclass(Mat::Ones(2, 2), testing::one_hot({0, 1}, 2));
    CHECK(ok.outputs() == 2);
}

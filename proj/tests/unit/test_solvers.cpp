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

#include <cmath>

#include "cvxrelu/closed_form.hpp"
#include "cvxrelu/errors.hpp"
#include "cvxrelu/lp.hpp"
#include "cvxrelu/solvers.hpp"
#include "support.hpp"

using namespace cvxrelu;

namespace {

void check_bp_certificate(const Mat& B, const Vec& y, const L1Result& r) {
    CHECK((B * r.w - y).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((B.transpose() * r.dual).cwiseAbs().maxCoeff() <= 1 + 1e-6);
    CHECK(std::abs(r.dual.dot(y) - r.w.cwiseAbs().sum()) <= 1e-6 * (1 + r.w.cwiseAbs().sum()));
}

}  // namespace

TEST_CASE("linprog on a two-variable problem") {
    // min -x1 - x2  s.t. x1 + 2 x2 + s1 = 4, 3 x1 + x2 + s2 = 6
    Mat A(2, 4);
    A << 1, 2, 1, 0, 3, 1, 0, 1;
    Vec b(2), c(4);
    b << 4, 6;
    c << -1, -1, 0, 0;
    LpResult r = linprog_standard(A, b, c);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(-2.8));
    CHECK(r.x(0) == doctest::Approx(1.6));
    CHECK(r.x(1) == doctest::Approx(1.2));
    // dual feasibility: c - A^T y >= 0
    CHECK((c - A.transpose() * r.y).minCoeff() >= -1e-9);
}

TEST_CASE("linprog detects infeasibility") {
    Mat A(1, 1);
    A << 1;
    Vec b(1), c(1);
    b << -1;
    c << 1;
    CHECK(linprog_standard(A, b, c).status == LpStatus::infeasible);
}

TEST_CASE("basis pursuit on the identity") {
    Vec y(2);
    y << 3, -4;
    L1Result r = basis_pursuit(Mat::Identity(2, 2), y);
    CHECK((r.w - y).norm() < 1e-10);
    CHECK(r.w.cwiseAbs().sum() == doctest::Approx(7.0));
    check_bp_certificate(Mat::Identity(2, 2), y, r);
}

TEST_CASE("basis pursuit on the 1-D hinge dictionary") {
    NonuniquenessFixture fx = nonuniqueness_fixture();
    for (const auto& s : fx.equality) {
        L1Result r = basis_pursuit(s.Ae, fx.y);
        CHECK(r.w.cwiseAbs().sum() == doctest::Approx(8.0).epsilon(1e-9));
        check_bp_certificate(s.Ae, fx.y, r);
    }
}

TEST_CASE("basis pursuit with duplicated columns") {
    // w = (t, 2 - t): |t| + |2 - t| >= 2
    Mat B = Mat::Ones(2, 2);
    Vec y = Vec::Constant(2, 2.0);
    L1Result r = basis_pursuit(B, y);
    CHECK(r.w.cwiseAbs().sum() == doctest::Approx(2.0));
    check_bp_certificate(B, y, r);
}

TEST_CASE("basis pursuit reports infeasibility with the least-squares residual") {
    Mat B(2, 1);
    B << 1, 1;
    Vec y(2);
    y << 1, -1;
    try {
        basis_pursuit(B, y);
        FAIL("expected Infeasible");
    } catch (const Infeasible& e) {
        CHECK(e.residual() == doctest::Approx(std::sqrt(2.0)));
    }
}

TEST_CASE("lasso limits") {
    Vec y(3);
    y << 1, -2, 0.5;
    L1Result r0 = lasso(Mat::Identity(3, 3), y, 0.0);
    CHECK((r0.w - y).norm() < 1e-10);
    Rng rng(4);
    Mat B = gaussian_matrix(6, 4, rng);
    Vec z = gaussian_vector(6, rng);
    double bmax = (B.transpose() * z).cwiseAbs().maxCoeff();
    L1Result big = lasso(B, z, bmax * 1.0001);
    CHECK(big.w.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lasso stationarity") {
    Rng rng(8);
    Mat B = gaussian_matrix(10, 15, rng);
    Vec y = gaussian_vector(10, rng);
    const double beta = 0.3;
    L1Result r = lasso(B, y, beta);
    Vec g = B.transpose() * (B * r.w - y);
    // distance of -g to beta * subdifferential of ||w||_1
    double worst = 0.0;
    for (Index j = 0; j < r.w.size(); ++j) {
        double res = r.w(j) != 0 ? std::abs(g(j) + beta * (r.w(j) > 0 ? 1.0 : -1.0)) : std::max(0.0, std::abs(g(j)) - beta);
        worst = std::max(worst, res);
    }
    CHECK(worst <= 1e-6 * (1 + (B.transpose() * y).cwiseAbs().maxCoeff()));
}

TEST_CASE("lasso on the regularized 1-D construction") {
    NonuniquenessFixture fx = nonuniqueness_fixture();
    const double n = double(fx.y.size());
    for (const auto& s : fx.regularized) {
        // 1/(2n) ||.||^2 + beta ||w||_1  ==  (1/n) (1/2 ||.||^2 + n beta ||w||_1)
        L1Result r = lasso(s.Ae, fx.y, n * fx.beta);
        CHECK(std::abs(r.report.objective / n - 1999.0 / 2500000.0) <= 1e-8);
    }
}

TEST_CASE("lasso approaches basis pursuit for tiny beta") {
    Rng rng(12);
    Mat B = gaussian_matrix(5, 9, rng);
    Vec y = gaussian_vector(5, rng);
    L1Result bp = basis_pursuit(B, y);
    L1Result la = lasso(B, y, 1e-10);
    CHECK((B * la.w - y).cwiseAbs().maxCoeff() <= 1e-4);
    CHECK(std::abs(la.w.cwiseAbs().sum() - bp.w.cwiseAbs().sum()) <= 1e-3);
}

TEST_CASE("simplex least squares") {
    Mat G(2, 2);
    G << 1, 0, 0, 1;
    Vec t(2);
    t << 2, 0;
    SimplexLsResult r = simplex_ls(G, t);
    CHECK(r.lambda(0) == doctest::Approx(1.0));
    CHECK(r.distance == doctest::Approx(1.0));

    Vec col = G.col(1);
    SimplexLsResult on = simplex_ls(G, col);
    CHECK(on.distance < 1e-9);
    CHECK(on.lambda(1) == doctest::Approx(1.0));

    Mat H(2, 3);
    H << 0, 2, 0, 0, 0, 2;
    Vec inside(2);
    inside << 0.5, 0.5;
    SimplexLsResult in = simplex_ls(H, inside);
    CHECK(in.distance < 1e-9);
    CHECK(std::abs(in.lambda.sum() - 1.0) < 1e-9);
    CHECK(in.lambda.minCoeff() >= -1e-12);
}

TEST_CASE("nonnegative least squares") {
    Mat M(3, 2);
    M << 1, 0, 0, 1, 1, 1;
    Vec b(3);
    b << 1, -1, 0;
    NnlsResult r = nnls(M, b);
    CHECK(r.x.minCoeff() >= 0);
    // optimum x = (0.5, 0)
    CHECK(r.x(0) == doctest::Approx(0.5));
    CHECK(r.x(1) == doctest::Approx(0.0));
}

TEST_CASE("cone-ball maximization on the identity") {
    Vec v = Vec::Ones(2);
    ConeBallResult r = cone_ball_lp(Mat::Identity(2, 2), v);
    CHECK(r.value == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.u(0) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(r.u(1) == doctest::Approx(1 / std::sqrt(2.0)));
    ConeBallResult neg = cone_ball_lp(Mat::Identity(2, 2), -v);
    CHECK(neg.value == doctest::Approx(0.0));
    CHECK(neg.u.norm() < 1e-12);
}

TEST_CASE("cone-ball maximization with a degenerate cone") {
    Mat A(2, 2);
    A << 1, 0, -1, 0;
    ConeBallResult r = cone_ball_lp(A, Vec::Ones(2));
    CHECK(r.value == doctest::Approx(0.0));
    CHECK((A * r.u).minCoeff() >= -1e-8);
}

TEST_CASE("cone-ball value dominates random feasible samples") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Rng rng(100 + seed);
        Index d = 2 + Index(seed % 2);
        Mat A = gaussian_matrix(3, d, rng);
        Vec v = gaussian_vector(3, rng);
        ConeBallResult r = cone_ball_lp(A, v);
        CHECK((A * r.u).minCoeff() >= -1e-8 * A.cwiseAbs().maxCoeff());
        CHECK(r.u.norm() <= 1 + 1e-9);
        double best = 0.0;
        for (int k = 0; k < 100000; ++k) {
            Vec u = random_unit_vector(d, rng);
            if ((A * u).minCoeff() < 0) continue;
            best = std::max(best, v.dot(A * u));
        }
        CHECK(r.value >= best - 1e-12);
        CHECK(r.value == doctest::Approx(v.dot(A * r.u)).epsilon(1e-9));
        // exact: the optimum is the normalized projection of A'v onto the span of some face
        Vec g = A.transpose() * v;
        double exact = 0.0;
        for (int mask = 0; mask < (1 << A.rows()); ++mask) {
            std::vector<Index> S;
            for (Index i = 0; i < A.rows(); ++i)
                if (mask & (1 << i)) S.push_back(i);
            Mat AS(Index(S.size()), d);
            for (size_t s = 0; s < S.size(); ++s) AS.row(Index(s)) = A.row(S[s]);
            Vec p = g;
            if (!S.empty()) {
                Eigen::FullPivLU<Mat> lu(AS);
                Mat N = lu.kernel();
                if (lu.rank() == d) continue;
                Mat Q = N.householderQr().householderQ() * Mat::Identity(d, N.cols());
                p = Q * (Q.transpose() * g);
            }
            if (p.norm() < 1e-12) continue;
            Vec u = p / p.norm();
            if ((A * u).minCoeff() < -1e-10) continue;
            exact = std::max(exact, g.dot(u));
        }
        CHECK(r.value == doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("cone-ball minimization") {
    Vec v = Vec::Ones(2);
    ConeBallResult r = cone_ball_lp(Mat::Identity(2, 2), -v, Sense::min);
    CHECK(r.value == doctest::Approx(-std::sqrt(2.0)));
}

TEST_CASE("group lasso equality on the identity") {
    GroupResult r = group_lasso_eq(Mat::Identity(3, 3), Mat::Identity(3, 3), singleton_groups(3));
    CHECK((r.W - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(r.report.objective == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("group lasso equality against a null-space line search") {
    Rng rng(21);
    Mat B = gaussian_matrix(3, 4, rng);
    Mat Y = gaussian_matrix(3, 2, rng);
    Groups g = {{0, 1}, {2, 3}};
    GroupResult r = group_lasso_eq(B, Y, g);
    CHECK((B * r.W - Y).cwiseAbs().maxCoeff() <= 1e-7);
    // W = W0 + z t^T with z spanning null(B) and t in R^2: minimize over a fine 2-d grid then refine
    Mat W0 = pseudo_inverse(B) * Y;
    Eigen::FullPivLU<Mat> lu(B);
    Vec z = lu.kernel().col(0);
    auto obj = [&](double t0, double t1) {
        Vec t(2);
        t << t0, t1;
        Mat W = W0 + z * t.transpose();
        return W.topRows(2).norm() + W.bottomRows(2).norm();
    };
    double best = 1e300, b0 = 0, b1 = 0;
    double span = 10 * (W0.norm() + 1), step = span / 200;
    for (int pass = 0; pass < 6; ++pass) {
        double c0 = b0, c1 = b1;
        for (int i = -200; i <= 200; ++i)
            for (int j = -200; j <= 200; ++j) {
                double o = obj(c0 + i * step, c1 + j * step);
                if (o < best) best = o, b0 = c0 + i * step, b1 = c1 + j * step;
            }
        step /= 50;
    }
    CHECK(r.report.objective == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("l1 svm") {
    Mat B(4, 1);
    B << 1, 2, -1, -3;
    Vec y(4);
    y << 1, 1, -1, -1;
    L1Result sep = l1_svm(B, y, 1e-3);
    CHECK(((B * sep.w).array() * y.array()).minCoeff() >= 1 - 1e-9);

    L1Result big = l1_svm(B, y, 1e6);
    CHECK(big.w.cwiseAbs().maxCoeff() == 0.0);
    CHECK(big.report.objective == doctest::Approx(4.0));
}

TEST_CASE("l1 svm against a breakpoint scan") {
    // one column: the objective is convex piecewise linear, minimized at a breakpoint
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        Vec b = gaussian_vector(8, rng);
        Vec y(8);
        for (Index i = 0; i < 8; ++i) y(i) = (i % 3 == 0) ? -1.0 : 1.0;
        Mat B = testing::col(b);
        const double beta = 0.7;
        auto f = [&](double w) {
            double s = beta * std::abs(w);
            for (Index i = 0; i < 8; ++i) s += std::max(0.0, 1 - y(i) * b(i) * w);
            return s;
        };
        double best = f(0.0);
        for (Index i = 0; i < 8; ++i) best = std::min(best, f(1.0 / (y(i) * b(i))));
        L1Result r = l1_svm(B, y, beta);
        CHECK(r.report.objective == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("spike-free convex program limits") {
    Rng rng(41);
    Mat A = gaussian_matrix(4, 6, rng);
    Vec u0 = Vec::Zero(6);
    // pick u0 in the cone A u >= 0
    u0 = cone_ball_lp(A, Vec::Ones(4)).u;
    Vec y = A * u0;
    SpikeFreeProgramResult r = spikefree_convex_train(A, y, 0.0, Loss::squared);
    CHECK(loss_value(Loss::squared, A * (r.w1 - r.w2), y) < 1e-10);
    CHECK((A * r.w1).minCoeff() >= -1e-8);
    CHECK((A * r.w2).minCoeff() >= -1e-8);

    SpikeFreeProgramResult z = spikefree_convex_train(A, y, 1e6, Loss::squared);
    CHECK(z.w1.norm() < 1e-9);
    CHECK(z.w2.norm() < 1e-9);
}

TEST_CASE("solver config validation") {
    SolverConfig bad;
    bad.max_iters = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    SolverConfig tol;
    tol.abs_tol = 0;
    CHECK_THROWS_AS(tol.validate(), InvalidInput);
}

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

#include "cvxrelu/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cvxrelu {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Tableau {
    RowMat T;                // m+1 rows; last row = reduced costs, last col = rhs
    std::vector<Index> basis;
    Index m = 0, cols = 0;   // cols excludes the rhs column

    void pivot(Index r, Index j) {
        T.row(r) /= T(r, j);
        for (Index i = 0; i <= m; ++i) {
            if (i == r) continue;
            double f = T(i, j);
            if (f != 0.0) T.row(i) -= f * T.row(r);
        }
        basis[r] = j;
    }

    void set_costs(const Vec& cost) {
        T.row(m).setZero();
        T.row(m).head(cols) = cost.transpose();
        for (Index i = 0; i < m; ++i) {
            double cb = cost(basis[i]);
            if (cb != 0.0) T.row(m) -= cb * T.row(i);
        }
    }

    // returns 0 optimal, 1 unbounded, 2 iteration limit
    int run(const std::vector<char>& allowed, double dtol, int max_iters, int& iters) {
        const double ptol = 1e-9;
        int degenerate_run = 0;
        while (iters < max_iters) {
            const bool bland = degenerate_run > 50;
            Index enter = -1;
            double best = -dtol;
            for (Index j = 0; j < cols; ++j) {
                if (!allowed[j]) continue;
                double r = T(m, j);
                if (r < best) {
                    enter = j;
                    if (bland) break;
                    best = r;
                }
            }
            if (enter < 0) return 0;
            Index leave = -1;
            double ratio = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < m; ++i) {
                double a = T(i, enter);
                if (a > ptol) {
                    double q = T(i, cols) / a;
                    if (q < ratio - 1e-12) {
                        ratio = q;
                        leave = i;
                    } else if (q <= ratio + 1e-12 && basis[i] < basis[leave]) {
                        ratio = std::min(ratio, q);
                        leave = i;
                    }
                }
            }
            if (leave < 0) return 1;
            degenerate_run = (ratio <= 1e-12) ? degenerate_run + 1 : 0;
            pivot(leave, enter);
            ++iters;
        }
        return 2;
    }
};

}  // namespace

LpResult linprog_standard(const Mat& A, const Vec& b, const Vec& c, int max_iters) {
    const Index m = A.rows(), N = A.cols();
    LpResult res;
    res.x = Vec::Zero(N);
    res.y = Vec::Zero(m);
    if (m == 0) {
        if ((c.array() < 0).any()) res.status = LpStatus::unbounded;
        else res.status = LpStatus::optimal;
        return res;
    }

    Vec sgn = Vec::Ones(m);
    for (Index i = 0; i < m; ++i)
        if (b(i) < 0) sgn(i) = -1.0;

    Tableau tb;
    tb.m = m;
    tb.cols = N + m;
    tb.T = RowMat::Zero(m + 1, N + m + 1);
    tb.T.topLeftCorner(m, N) = sgn.asDiagonal() * A;
    tb.T.block(0, N, m, m).setIdentity();
    tb.T.col(N + m).head(m) = sgn.cwiseProduct(b);
    tb.basis.resize(m);
    for (Index i = 0; i < m; ++i) tb.basis[i] = N + i;

    const double bscale = std::max(1.0, b.cwiseAbs().maxCoeff());
    const double ascale = std::max(1.0, A.size() ? A.cwiseAbs().maxCoeff() : 1.0);

    // phase one
    Vec c1 = Vec::Zero(N + m);
    c1.tail(m).setOnes();
    tb.set_costs(c1);
    std::vector<char> allowed(N + m, 1);
    int iters = 0;
    int st = tb.run(allowed, 1e-11 * ascale, max_iters, iters);
    res.iterations = iters;
    double infeas = 0.0;
    for (Index i = 0; i < m; ++i)
        if (tb.basis[i] >= N) infeas += std::abs(tb.T(i, N + m));
    res.infeasibility = infeas;
    if (st == 2) return res;
    if (infeas > 1e-9 * bscale) {
        res.status = LpStatus::infeasible;
        return res;
    }

    // push zero-level artificials out of the basis where possible
    for (Index i = 0; i < m; ++i) {
        if (tb.basis[i] < N) continue;
        Index best = -1;
        double bv = 1e-9;
        for (Index j = 0; j < N; ++j) {
            double a = std::abs(tb.T(i, j));
            if (a > bv) { bv = a; best = j; }
        }
        if (best >= 0) tb.pivot(i, best);
    }
    for (Index j = N; j < N + m; ++j) allowed[j] = 0;

    // phase two
    Vec c2 = Vec::Zero(N + m);
    c2.head(N) = c;
    tb.set_costs(c2);
    const double cscale = std::max(1.0, c.size() ? c.cwiseAbs().maxCoeff() : 1.0);
    st = tb.run(allowed, 1e-11 * cscale, max_iters, iters);
    res.iterations = iters;
    if (st == 1) {
        res.status = LpStatus::unbounded;
        return res;
    }
    if (st == 2) return res;

    // refactor the final basis for accurate x and y
    Mat Aaug(m, N + m);
    Aaug.leftCols(N) = sgn.asDiagonal() * A;
    Aaug.rightCols(m).setIdentity();
    Mat Bm(m, m);
    Vec cB(m);
    for (Index i = 0; i < m; ++i) {
        Bm.col(i) = Aaug.col(tb.basis[i]);
        cB(i) = c2(tb.basis[i]);
    }
    Eigen::PartialPivLU<Mat> lu(Bm);
    Vec xB = lu.solve(sgn.cwiseProduct(b));
    Vec yp = lu.transpose().solve(cB);
    bool sane = xB.allFinite() && yp.allFinite() &&
                (Bm * xB - sgn.cwiseProduct(b)).cwiseAbs().maxCoeff() <= 1e-8 * bscale;
    if (!sane) {
        // fall back to the tableau values
        for (Index i = 0; i < m; ++i) xB(i) = tb.T(i, N + m);
        yp = -tb.T.row(m).segment(N, m).transpose();
    }
    for (Index i = 0; i < m; ++i) {
        Index j = tb.basis[i];
        if (j < N) res.x(j) = std::max(0.0, xB(i));
    }
    res.y = sgn.cwiseProduct(yp);
    res.objective = c.dot(res.x);
    res.status = LpStatus::optimal;
    return res;
}

}  // namespace cvxrelu

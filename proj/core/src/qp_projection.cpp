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

#include "qp_projection.hpp"

#include <cmath>
#include <limits>

namespace cvxrelu::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct State {
    Index n;
    Mat J, R;
    Vec d, z, r, u;
    std::vector<Index> A;  // active ids: eq i -> -(i+1), ineq i -> i
    Index iq = 0;
    double r_norm = 1.0;

    explicit State(Index n_, Index m) : n(n_), J(Mat::Identity(n_, n_)), R(Mat::Zero(n_, n_)), d(n_), z(n_),
                                        r(Vec::Zero(n_ + 1)), u(Vec::Zero(m + 1)), A(size_t(m + 1), 0) {}

    void directions(const Vec& np) {
        d.noalias() = J.transpose() * np;
        z.noalias() = J.rightCols(n - iq) * d.tail(n - iq);
        for (Index i = iq - 1; i >= 0; --i) {
            double s = 0.0;
            for (Index j = i + 1; j < iq; ++j) s += R(i, j) * r(j);
            r(i) = (d(i) - s) / R(i, i);
        }
    }

    bool add() {
        for (Index j = n - 1; j >= iq + 1; --j) {
            double cc = d(j - 1), ss = d(j);
            double h = std::hypot(cc, ss);
            if (h == 0.0) continue;
            d(j) = 0.0;
            ss /= h;
            cc /= h;
            if (cc < 0) {
                cc = -cc;
                ss = -ss;
                d(j - 1) = -h;
            } else {
                d(j - 1) = h;
            }
            double xny = ss / (1.0 + cc);
            for (Index k = 0; k < n; ++k) {
                double t1 = J(k, j - 1), t2 = J(k, j);
                J(k, j - 1) = t1 * cc + t2 * ss;
                J(k, j) = xny * (t1 + J(k, j - 1)) - t2;
            }
        }
        ++iq;
        R.col(iq - 1).head(iq) = d.head(iq);
        if (std::abs(d(iq - 1)) <= std::numeric_limits<double>::epsilon() * r_norm) return false;
        r_norm = std::max(r_norm, std::abs(d(iq - 1)));
        return true;
    }

    void remove(Index id, Index first) {
        Index qq = -1;
        for (Index i = first; i < iq; ++i)
            if (A[size_t(i)] == id) {
                qq = i;
                break;
            }
        if (qq < 0) return;
        for (Index i = qq; i < iq - 1; ++i) {
            A[size_t(i)] = A[size_t(i + 1)];
            u(i) = u(i + 1);
            R.col(i) = R.col(i + 1);
        }
        A[size_t(iq - 1)] = A[size_t(iq)];
        u(iq - 1) = u(iq);
        A[size_t(iq)] = 0;
        u(iq) = 0.0;
        R.col(iq - 1).head(iq).setZero();
        --iq;
        if (iq == 0) return;
        for (Index j = qq; j < iq; ++j) {
            double cc = R(j, j), ss = R(j + 1, j);
            double h = std::hypot(cc, ss);
            if (h == 0.0) continue;
            cc /= h;
            ss /= h;
            R(j + 1, j) = 0.0;
            if (cc < 0) {
                R(j, j) = -h;
                cc = -cc;
                ss = -ss;
            } else {
                R(j, j) = h;
            }
            double xny = ss / (1.0 + cc);
            for (Index k = j + 1; k < iq; ++k) {
                double t1 = R(j, k), t2 = R(j + 1, k);
                R(j, k) = t1 * cc + t2 * ss;
                R(j + 1, k) = xny * (t1 + R(j, k)) - t2;
            }
            for (Index k = 0; k < n; ++k) {
                double t1 = J(k, j), t2 = J(k, j + 1);
                J(k, j) = t1 * cc + t2 * ss;
                J(k, j + 1) = xny * (J(k, j) + t1) - t2;
            }
        }
    }
};

}  // namespace

Projection project_polyhedron(const Vec& y, const Mat& CE, const Mat& CI, const Vec& ci0, int max_iters) {
    const Index n = y.size(), me = CE.cols(), mi = CI.cols();
    Projection out;
    out.u_eq = Vec::Zero(me);
    out.u_in = Vec::Zero(mi);
    State st(n, me + mi);
    Vec x = y;
    const double yscale = 1.0 + y.norm();

    // equalities: skip ones dependent on those already active
    Index neq = 0;
    for (Index i = 0; i < me; ++i) {
        Vec np = CE.col(i);
        double nn = np.norm();
        if (nn == 0.0) continue;
        st.directions(np);
        if (st.z.norm() <= 1e-12 * nn) {
            if (std::abs(np.dot(x)) > 1e-9 * nn * yscale) return out;  // inconsistent
            continue;
        }
        double t2 = -np.dot(x) / st.z.dot(np);
        x += t2 * st.z;
        st.u(st.iq) = t2;
        st.u.head(st.iq) -= t2 * st.r.head(st.iq);
        st.A[size_t(st.iq)] = -(i + 1);
        if (!st.add()) return out;
        ++neq;
    }

    std::vector<char> active(size_t(mi), 0);
    Vec cnorm(mi);
    for (Index i = 0; i < mi; ++i) cnorm(i) = CI.col(i).norm();

    int it = 0;
    for (; it < max_iters; ++it) {
        // most violated inactive constraint
        Index ip = -1;
        double worst = 0.0;
        for (Index i = 0; i < mi; ++i) {
            if (active[size_t(i)] || cnorm(i) == 0.0) continue;
            double s = (CI.col(i).dot(x) + ci0(i)) / cnorm(i);
            double tol = 1e-13 * (1.0 + std::abs(ci0(i)) / cnorm(i) + x.norm());
            if (s < -tol && s < worst) {
                worst = s;
                ip = i;
            }
        }
        if (ip < 0) {
            out.ok = true;
            break;
        }
        Vec np = CI.col(ip);
        double s_ip = np.dot(x) + ci0(ip);
        st.u(st.iq) = 0.0;
        st.A[size_t(st.iq)] = ip;

        for (;; ++it) {
            if (it >= max_iters) return out;
            st.directions(np);
            double t1 = kInf;
            Index l = -1;
            for (Index k = neq; k < st.iq; ++k)
                if (st.r(k) > 0.0 && st.u(k) / st.r(k) < t1) {
                    t1 = st.u(k) / st.r(k);
                    l = st.A[size_t(k)];
                }
            double t2 = kInf;
            if (st.z.norm() > 1e-12 * np.norm()) t2 = -s_ip / st.z.dot(np);
            double t = std::min(t1, t2);
            if (t == kInf) return out;  // infeasible
            if (t2 == kInf) {
                st.u.head(st.iq) -= t * st.r.head(st.iq);
                st.u(st.iq) += t;
                active[size_t(l)] = 0;
                st.remove(l, neq);
                continue;
            }
            x += t * st.z;
            st.u.head(st.iq) -= t * st.r.head(st.iq);
            st.u(st.iq) += t;
            if (t == t2) {
                if (!st.add()) return out;
                active[size_t(ip)] = 1;
                break;
            }
            active[size_t(l)] = 0;
            st.remove(l, neq);
            s_ip = np.dot(x) + ci0(ip);
        }
    }

    out.x = x;
    out.iterations = it;
    for (Index k = 0; k < st.iq; ++k) {
        Index id = st.A[size_t(k)];
        if (id < 0)
            out.u_eq(-id - 1) = st.u(k);
        else
            out.u_in(id) = st.u(k);
    }
    return out;
}

}  // namespace cvxrelu::detail

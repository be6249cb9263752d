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

#include "cvxrelu/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "cvxrelu/errors.hpp"
#include "cvxrelu/lp.hpp"
#include "qp_projection.hpp"

namespace cvxrelu {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Vec resolve_penalty(const Vec& penalty, Index k) {
    if (penalty.size() == 0) return Vec::Ones(k);
    if (penalty.size() != k) throw InvalidInput("penalty length differs from column count");
    if ((penalty.array() < 0).any()) throw InvalidInput("negative penalty");
    return penalty;
}

double soft(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

double ls_residual(const Mat& B, const Mat& Y) {
    if (B.cols() == 0) return Y.norm();
    Mat X = B.completeOrthogonalDecomposition().solve(Y);
    return (B * X - Y).norm();
}

}  // namespace

void SolverConfig::validate() const {
    if (max_iters < 1) throw InvalidInput("max_iters must be >= 1");
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw InvalidInput("tolerances must be positive");
    if (!(rho > 0)) throw InvalidInput("rho must be positive");
}

const char* to_string(Loss l) { return l == Loss::squared ? "squared" : "hinge"; }

double loss_value(Loss loss, const Vec& f, const Vec& y) {
    if (loss == Loss::squared) return 0.5 * (f - y).squaredNorm();
    double s = 0.0;
    for (Index i = 0; i < f.size(); ++i) s += std::max(0.0, 1.0 - y(i) * f(i));
    return s;
}

// ---------------------------------------------------------------- basis pursuit

L1Result basis_pursuit(const Mat& B, const Vec& y, const SolverConfig& cfg, const Vec& penalty) {
    cfg.validate();
    require_finite(B, "B");
    require_finite(y, "y");
    if (B.rows() != y.size()) throw InvalidInput("basis_pursuit: shape mismatch");
    auto t0 = Clock::now();
    const Index n = B.rows(), k = B.cols();
    const Vec p = resolve_penalty(penalty, k);

    Mat Alp(n, 2 * k);
    Alp << B, -B;
    Vec c(2 * k);
    c << p, p;
    LpResult lp = linprog_standard(Alp, y, c, std::max(cfg.max_iters, 200 * int(n + 2 * k)));
    if (lp.status == LpStatus::infeasible)
        throw Infeasible("basis_pursuit: y is not in the range of B", ls_residual(B, y));

    L1Result res;
    res.w = lp.x.head(k) - lp.x.tail(k);
    res.dual = lp.y;
    const double yscale = std::max(1.0, y.cwiseAbs().maxCoeff());

    // prefer the least-norm dual vector on the optimal face
    if (lp.status == LpStatus::optimal && k > 0) {
        const double wtol = 1e-10 * std::max(1.0, res.w.cwiseAbs().maxCoeff());
        std::vector<Index> S;
        for (Index j = 0; j < k; ++j)
            if (std::abs(res.w(j)) > wtol || p(j) == 0.0) S.push_back(j);
        if (!S.empty()) {
            Mat BS(S.size(), n);
            Vec rhs(S.size());
            for (size_t s = 0; s < S.size(); ++s) {
                BS.row(s) = B.col(S[s]).transpose();
                rhs(s) = p(S[s]) == 0.0 ? 0.0 : p(S[s]) * sign_of(res.w(S[s]));
            }
            Vec v = BS.completeOrthogonalDecomposition().solve(rhs);
            double eq = (BS * v - rhs).cwiseAbs().maxCoeff();
            double viol = ((B.transpose() * v).cwiseAbs() - p).maxCoeff();
            if (v.allFinite() && eq <= 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff()) && viol <= 1e-9) res.dual = v;
        }
    }

    SolveReport& r = res.report;
    r.iterations = lp.iterations;
    r.objective = p.dot(res.w.cwiseAbs());
    r.primal_residual = n ? (B * res.w - y).cwiseAbs().maxCoeff() : 0.0;
    r.dual_residual = k ? std::max(0.0, ((B.transpose() * res.dual).cwiseAbs() - p).maxCoeff()) : 0.0;
    double gap = std::abs(res.dual.dot(y) - r.objective);
    r.converged = lp.status == LpStatus::optimal && r.primal_residual <= cfg.abs_tol * yscale &&
                  r.dual_residual <= 1e-6 && gap <= cfg.rel_tol * (1.0 + std::abs(r.objective));
    r.wall_time_ms = ms_since(t0);
    return res;
}

// ---------------------------------------------------------------- lasso

L1Result lasso(const Mat& B, const Vec& y, double beta, const SolverConfig& cfg, const Vec& penalty) {
    cfg.validate();
    require_finite(B, "B");
    require_finite(y, "y");
    if (B.rows() != y.size()) throw InvalidInput("lasso: shape mismatch");
    if (!(beta >= 0)) throw InvalidInput("lasso: beta must be >= 0");
    auto t0 = Clock::now();
    const Index k = B.cols();
    const Vec p = resolve_penalty(penalty, k);
    const Vec thr = beta * p;
    const Vec colsq = B.colwise().squaredNorm().transpose();
    const double kkt_scale = 1.0 + (k ? (B.transpose() * y).cwiseAbs().maxCoeff() : 0.0);

    auto kkt = [&](const Vec& w) {
        Vec g = B.transpose() * (B * w - y);
        double worst = 0.0;
        for (Index j = 0; j < k; ++j) {
            double e = (w(j) != 0.0) ? std::abs(g(j) + thr(j) * sign_of(w(j)))
                                     : std::max(0.0, std::abs(g(j)) - thr(j));
            worst = std::max(worst, e);
        }
        return worst;
    };
    auto obj = [&](const Vec& w) { return 0.5 * (B * w - y).squaredNorm() + thr.dot(w.cwiseAbs()); };

    // exact route: the residual is the projection of y onto {r : |B_j' r| <= thr_j}
    {
        std::vector<Index> eq, in;
        for (Index j = 0; j < k; ++j) {
            if (colsq(j) <= 0.0) continue;
            (thr(j) > 0.0 ? in : eq).push_back(j);
        }
        const Index n = B.rows();
        Mat CE(n, Index(eq.size())), CI(n, 2 * Index(in.size()));
        Vec ci0(2 * Index(in.size()));
        for (size_t s = 0; s < eq.size(); ++s) CE.col(Index(s)) = B.col(eq[s]);
        for (size_t s = 0; s < in.size(); ++s) {
            CI.col(2 * Index(s)) = -B.col(in[s]);
            CI.col(2 * Index(s) + 1) = B.col(in[s]);
            ci0(2 * Index(s)) = ci0(2 * Index(s) + 1) = thr(in[s]);
        }
        detail::Projection pr = detail::project_polyhedron(y, CE, CI, ci0, std::max(cfg.max_iters, int(50 * (n + k))));
        if (pr.ok) {
            Vec w = Vec::Zero(k);
            for (size_t s = 0; s < eq.size(); ++s) w(eq[s]) = -pr.u_eq(Index(s));
            for (size_t s = 0; s < in.size(); ++s) w(in[s]) = pr.u_in(2 * Index(s)) - pr.u_in(2 * Index(s) + 1);
            if (w.allFinite() && kkt(w) <= 1e-8 * kkt_scale) {
                L1Result res;
                res.w = w;
                res.dual = y - B * w;
                SolveReport& rep = res.report;
                rep.iterations = pr.iterations;
                rep.objective = obj(w);
                rep.primal_residual = kkt(w);
                rep.dual_residual = 0.0;
                rep.converged = true;
                rep.wall_time_ms = ms_since(t0);
                return res;
            }
        }
    }

    // fallback: cyclic coordinate descent
    Vec w = Vec::Zero(k);
    Vec r = y;
    int it = 0;
    const double target = 1e-13 * kkt_scale;
    for (; it < cfg.max_iters; ++it) {
        double maxdelta = 0.0;
        for (Index j = 0; j < k; ++j) {
            if (colsq(j) <= 0.0) continue;
            double z = B.col(j).dot(r) + colsq(j) * w(j);
            double nw = soft(z, thr(j)) / colsq(j);
            double dlt = nw - w(j);
            if (dlt != 0.0) {
                r.noalias() -= dlt * B.col(j);
                w(j) = nw;
                maxdelta = std::max(maxdelta, std::abs(dlt) * std::sqrt(colsq(j)));
            }
        }
        if (maxdelta <= 1e-15 * (1.0 + y.norm())) break;
        if ((it % 25) == 24) {
            r = y - B * w;
            if (kkt(w) <= target) break;
        }
    }

    // polish: exact solve on the current support with fixed signs
    {
        std::vector<Index> S;
        for (Index j = 0; j < k; ++j)
            if (w(j) != 0.0) S.push_back(j);
        if (!S.empty()) {
            Mat BS(B.rows(), S.size());
            Vec rhs(S.size());
            for (size_t s = 0; s < S.size(); ++s) BS.col(s) = B.col(S[s]);
            Vec bty = BS.transpose() * y;
            for (size_t s = 0; s < S.size(); ++s) rhs(s) = bty(s) - thr(S[s]) * sign_of(w(S[s]));
            Mat G = BS.transpose() * BS;
            Eigen::LDLT<Mat> ldlt(G);
            if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
                Vec ws = ldlt.solve(rhs);
                bool ok = ws.allFinite();
                for (size_t s = 0; ok && s < S.size(); ++s)
                    if (thr(S[s]) > 0 && sign_of(ws(s)) != sign_of(w(S[s]))) ok = false;
                if (ok) {
                    Vec wc = w;
                    for (size_t s = 0; s < S.size(); ++s) wc(S[s]) = ws(s);
                    if (kkt(wc) <= kkt(w) && obj(wc) <= obj(w) + 1e-15 * (1.0 + obj(w))) w = wc;
                }
            }
        }
    }

    L1Result res;
    res.w = w;
    res.dual = y - B * w;
    SolveReport& rep = res.report;
    rep.iterations = it + 1;
    rep.objective = obj(w);
    rep.primal_residual = kkt(w);
    rep.dual_residual = 0.0;
    rep.converged = rep.primal_residual <= 1e-6 * kkt_scale;
    rep.wall_time_ms = ms_since(t0);
    return res;
}

// ---------------------------------------------------------------- l1 svm

L1Result l1_svm(const Mat& B, const Vec& y, double beta, const SolverConfig& cfg, const Vec& penalty) {
    cfg.validate();
    require_finite(B, "B");
    if (B.rows() != y.size()) throw InvalidInput("l1_svm: shape mismatch");
    if (!(beta >= 0)) throw InvalidInput("l1_svm: beta must be >= 0");
    for (Index i = 0; i < y.size(); ++i)
        if (y(i) != 1.0 && y(i) != -1.0) throw InvalidInput("l1_svm: labels must be +1/-1");
    auto t0 = Clock::now();
    const Index n = B.rows(), k = B.cols();
    const Vec p = resolve_penalty(penalty, k);
    const Mat DB = y.asDiagonal() * B;

    // vars: w+ (k), w- (k), xi (n), s (n)
    Mat Alp = Mat::Zero(n, 2 * k + 2 * n);
    Alp.leftCols(k) = DB;
    Alp.middleCols(k, k) = -DB;
    Alp.middleCols(2 * k, n).setIdentity();
    Alp.rightCols(n) = -Mat::Identity(n, n);
    Vec c = Vec::Zero(2 * k + 2 * n);
    c.head(k) = beta * p;
    c.segment(k, k) = beta * p;
    c.segment(2 * k, n).setOnes();
    LpResult lp = linprog_standard(Alp, Vec::Ones(n), c, std::max(cfg.max_iters, 200 * int(3 * n + 2 * k)));

    L1Result res;
    res.w = lp.x.head(k) - lp.x.segment(k, k);
    Vec theta = lp.y.cwiseMax(0.0).cwiseMin(1.0);
    res.dual = y.cwiseProduct(theta);
    SolveReport& r = res.report;
    r.iterations = lp.iterations;
    r.objective = loss_value(Loss::hinge, B * res.w, y) + beta * p.dot(res.w.cwiseAbs());
    r.primal_residual = std::abs(r.objective - theta.sum());
    r.dual_residual = k ? std::max(0.0, ((B.transpose() * res.dual).cwiseAbs() - beta * p).maxCoeff()) : 0.0;
    r.converged = lp.status == LpStatus::optimal && r.primal_residual <= 1e-5 * (1.0 + r.objective) &&
                  r.dual_residual <= 1e-6 * (1.0 + beta);
    r.wall_time_ms = ms_since(t0);
    return res;
}

// ---------------------------------------------------------------- simplex ls

SimplexLsResult simplex_ls(const Mat& G, const Vec& target, const SolverConfig& cfg) {
    cfg.validate();
    if (G.rows() != target.size()) throw InvalidInput("simplex_ls: shape mismatch");
    if (G.cols() < 1) throw InvalidInput("simplex_ls: need at least one column");
    auto t0 = Clock::now();
    const Index m = G.cols();

    auto project = [](const Vec& x) {
        // sort-based projection onto the unit simplex
        Vec s = x;
        std::sort(s.data(), s.data() + s.size(), std::greater<double>());
        double cum = 0.0, tau = 0.0;
        for (Index j = 0; j < s.size(); ++j) {
            cum += s(j);
            double t = (cum - 1.0) / double(j + 1);
            if (s(j) - t > 0) tau = t;
        }
        return Vec((x.array() - tau).cwiseMax(0.0));
    };
    auto fobj = [&](const Vec& l) { return 0.5 * (G * l - target).squaredNorm(); };
    auto fw_gap = [&](const Vec& l) {
        Vec g = G.transpose() * (G * l - target);
        return g.dot(l) - g.minCoeff();
    };

    SimplexLsResult res;
    Vec lam = Vec::Constant(m, 1.0 / double(m));
    int it = 0;
    if (m > 1) {
        const Mat H = G.transpose() * G;
        const Vec Gt = G.transpose() * target;
        double L = Eigen::SelfAdjointEigenSolver<Mat>(H, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
        L = std::max(L, 1e-300);
        const double scale = std::max(1.0, target.squaredNorm() + H.diagonal().maxCoeff());
        Vec yv = lam, prev = lam;
        double tk = 1.0;
        for (; it < cfg.max_iters; ++it) {
            Vec grad = H * yv - Gt;
            Vec nl = project(yv - grad / L);
            double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
            yv = nl + ((tk - 1.0) / tn) * (nl - prev);
            // restart when momentum points uphill
            if ((nl - prev).dot(H * nl - Gt) > 0) {
                yv = nl;
                tn = 1.0;
            }
            prev = nl;
            tk = tn;
            lam = nl;
            if ((it % 20) == 19 && fw_gap(lam) <= 1e-15 * scale) break;
        }
        // polish on the support: equality constrained least squares
        std::vector<Index> S;
        for (Index j = 0; j < m; ++j)
            if (lam(j) > 1e-12) S.push_back(j);
        if (!S.empty()) {
            const Index s = S.size();
            Mat K = Mat::Zero(s + 1, s + 1);
            Vec rhs(s + 1);
            for (Index a = 0; a < s; ++a) {
                for (Index b = 0; b < s; ++b) K(a, b) = H(S[a], S[b]);
                K(a, s) = 1.0;
                K(s, a) = 1.0;
                rhs(a) = Gt(S[a]);
            }
            rhs(s) = 1.0;
            Vec sol = K.completeOrthogonalDecomposition().solve(rhs);
            Vec cand = Vec::Zero(m);
            bool ok = sol.allFinite();
            for (Index a = 0; ok && a < s; ++a) {
                if (sol(a) < 0) ok = false;
                cand(S[a]) = sol(a);
            }
            if (ok && std::abs(cand.sum() - 1.0) < 1e-12 && fobj(cand) <= fobj(lam) + 1e-16 * scale)
                lam = cand;
        }
    } else {
        lam(0) = 1.0;
    }
    res.lambda = lam;
    res.distance = (G * lam - target).norm();
    SolveReport& r = res.report;
    r.iterations = it + 1;
    r.objective = res.distance;
    r.primal_residual = std::abs(lam.sum() - 1.0) + std::max(0.0, -lam.minCoeff());
    r.dual_residual = std::max(0.0, fw_gap(lam));
    const double sc = std::max(1.0, target.squaredNorm());
    r.converged = r.primal_residual <= 1e-9 && r.dual_residual <= std::max(cfg.abs_tol, cfg.rel_tol * sc);
    r.wall_time_ms = ms_since(t0);
    return res;
}

// ---------------------------------------------------------------- nnls / cones

NnlsResult nnls(const Mat& M, const Vec& b, int max_iters) {
    const Index q = M.cols();
    NnlsResult res;
    res.x = Vec::Zero(q);
    if (q == 0) {
        res.residual = b.norm();
        res.converged = true;
        return res;
    }
    if (max_iters <= 0) max_iters = int(30 * q + 100);
    const double tol = 1e-13 * std::max(1.0, M.cwiseAbs().maxCoeff()) * std::max(1.0, b.norm()) * double(q);
    std::vector<char> in(q, 0);
    Vec x = Vec::Zero(q);
    Vec wv = M.transpose() * b;

    auto solve_on = [&](Vec& z) {
        std::vector<Index> P;
        for (Index j = 0; j < q; ++j)
            if (in[j]) P.push_back(j);
        z = Vec::Zero(q);
        if (P.empty()) return;
        Mat MP(M.rows(), P.size());
        for (size_t s = 0; s < P.size(); ++s) MP.col(s) = M.col(P[s]);
        Vec zp = MP.colPivHouseholderQr().solve(b);
        for (size_t s = 0; s < P.size(); ++s) z(P[s]) = zp(s);
    };

    int it = 0;
    while (it < max_iters) {
        Index t = -1;
        double best = tol;
        for (Index j = 0; j < q; ++j)
            if (!in[j] && wv(j) > best) {
                best = wv(j);
                t = j;
            }
        if (t < 0) {
            res.converged = true;
            break;
        }
        in[t] = 1;
        Vec z;
        solve_on(z);
        int inner = 0;
        for (;;) {
            ++it;
            bool feasible = true;
            for (Index j = 0; j < q; ++j)
                if (in[j] && z(j) <= 0) feasible = false;
            if (feasible || inner++ > 3 * q) break;
            double alpha = 1.0;
            for (Index j = 0; j < q; ++j)
                if (in[j] && z(j) <= 0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
            x += alpha * (z - x);
            for (Index j = 0; j < q; ++j)
                if (in[j] && x(j) <= 1e-15 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
                    in[j] = 0;
                    x(j) = 0.0;
                }
            solve_on(z);
        }
        x = z.cwiseMax(0.0);
        wv = M.transpose() * (b - M * x);
        // an added column that cannot improve would loop forever
        if (!in[t]) wv(t) = 0.0;
    }
    res.x = x;
    res.iterations = it;
    res.residual = (M * x - b).norm();
    return res;
}

Vec project_polyhedral_cone(const Mat& M, const Vec& x) {
    if (M.rows() == 0) return x;
    // x = P_K(x) + P_polar(x), polar cone = {-M^T mu : mu >= 0}
    NnlsResult r = nnls(M.transpose(), -x);
    return x + M.transpose() * r.x;
}

ConeBallResult cone_ball_max(const Mat& M, const Vec& c) {
    auto t0 = Clock::now();
    ConeBallResult res;
    Vec pc = project_polyhedral_cone(M, c);
    double nv = pc.norm();
    const double cn = c.norm();
    if (nv <= 1e-13 * std::max(1.0, cn)) {
        res.u = Vec::Zero(c.size());
        res.value = 0.0;
    } else {
        res.u = pc / nv;
        res.value = c.dot(res.u);
    }
    SolveReport& r = res.report;
    r.objective = res.value;
    r.primal_residual = M.rows() ? std::max(0.0, -(M * res.u).minCoeff()) : 0.0;
    r.dual_residual = std::abs(res.value - nv * (nv > 1e-13 * std::max(1.0, cn) ? 1.0 : 0.0));
    r.iterations = 1;
    r.converged = r.primal_residual <= 1e-8 * std::max(1.0, M.rows() ? M.cwiseAbs().maxCoeff() : 1.0);
    r.wall_time_ms = ms_since(t0);
    return res;
}

ConeBallResult cone_ball_lp(const Mat& A, const Vec& v, Sense sense, const SolverConfig& cfg) {
    cfg.validate();
    if (A.rows() != v.size()) throw InvalidInput("cone_ball_lp: shape mismatch");
    Vec c = A.transpose() * v;
    if (sense == Sense::min) c = -c;
    ConeBallResult r = cone_ball_max(A, c);
    if (sense == Sense::min) {
        r.value = -r.value;
        r.report.objective = r.value;
    }
    return r;
}

// ---------------------------------------------------------------- group lasso

Groups singleton_groups(Index k) {
    Groups g(k);
    for (Index j = 0; j < k; ++j) g[j] = {j};
    return g;
}

namespace {

void check_groups(const Groups& groups, Index k) {
    std::vector<int> seen(k, 0);
    for (const auto& g : groups)
        for (Index j : g) {
            if (j < 0 || j >= k) throw InvalidInput("group index out of range");
            seen[j]++;
        }
    for (Index j = 0; j < k; ++j)
        if (seen[j] != 1) throw InvalidInput("groups must partition the columns");
}

double group_norm(const Mat& W, const std::vector<Index>& g) {
    double s = 0.0;
    for (Index j : g) s += W.row(j).squaredNorm();
    return std::sqrt(s);
}

}  // namespace

GroupResult group_lasso_eq(const Mat& B, const Mat& Y, const Groups& groups, const SolverConfig& cfg,
                           const Vec& penalty) {
    cfg.validate();
    require_finite(B, "B");
    require_finite(Y, "Y");
    if (B.rows() != Y.rows()) throw InvalidInput("group_lasso_eq: shape mismatch");
    auto t0 = Clock::now();
    const Index k = B.cols(), o = Y.cols();
    check_groups(groups, k);
    const Vec p = resolve_penalty(penalty, Index(groups.size()));
    const double yscale = std::max(1.0, Y.cwiseAbs().maxCoeff());

    const Mat Bp = pseudo_inverse(B);
    const Mat W0 = Bp * Y;
    const double infeas = (B * W0 - Y).cwiseAbs().maxCoeff();
    if (infeas > 1e-8 * yscale) throw Infeasible("group_lasso_eq: Y is not reachable", ls_residual(B, Y));
    const Mat P = Bp * B;  // projector onto the row space
    auto proj_aff = [&](const Mat& X) -> Mat { return X - P * X + W0; };

    Mat W = W0, Z = W0, U = Mat::Zero(k, o);
    double rho = cfg.rho;
    int it = 0;
    bool conv = false;
    double rp = 0, rd = 0;
    const double sq = std::sqrt(double(k * o));
    for (; it < cfg.max_iters; ++it) {
        W = proj_aff(Z - U);
        Mat Zold = Z;
        Mat X = W + U;
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            const auto& g = groups[gi];
            double nrm = group_norm(X, g);
            double t = p(gi) / rho;
            double f = nrm > t ? (1.0 - t / nrm) : 0.0;
            for (Index j : g) Z.row(j) = f * X.row(j);
        }
        U += W - Z;
        rp = (W - Z).norm();
        rd = rho * (Z - Zold).norm();
        double ep = cfg.abs_tol * sq + cfg.rel_tol * std::max(W.norm(), Z.norm());
        double ed = cfg.abs_tol * sq + cfg.rel_tol * rho * U.norm();
        if (rp <= ep && rd <= ed && it > 10) {
            conv = true;
            break;
        }
        if (rp > 10.0 * rd) {
            rho *= 2.0;
            U /= 2.0;
        } else if (rd > 10.0 * rp) {
            rho /= 2.0;
            U *= 2.0;
        }
    }
    GroupResult res;
    // keep the groups ADMM shrank to zero at zero when the support can still reach Y
    res.W = proj_aff(Z);
    {
        std::vector<Index> S;
        for (size_t gi = 0; gi < groups.size(); ++gi)
            if (group_norm(Z, groups[gi]) > 0.0)
                for (Index j : groups[gi]) S.push_back(j);
        if (!S.empty() && S.size() < size_t(k)) {
            Mat BS(B.rows(), S.size()), ZS(S.size(), o);
            for (size_t s = 0; s < S.size(); ++s) {
                BS.col(s) = B.col(S[s]);
                ZS.row(s) = Z.row(S[s]);
            }
            Mat WS = ZS + pseudo_inverse(BS) * (Y - BS * ZS);
            if ((BS * WS - Y).cwiseAbs().maxCoeff() <= 1e-10 * yscale) {
                res.W.setZero();
                for (size_t s = 0; s < S.size(); ++s) res.W.row(S[s]) = WS.row(s);
            }
        }
    }
    res.dual = Bp.transpose() * (rho * U);
    SolveReport& r = res.report;
    double objv = 0.0;
    for (size_t gi = 0; gi < groups.size(); ++gi) objv += p(gi) * group_norm(res.W, groups[gi]);
    r.objective = objv;
    r.iterations = it + 1;
    r.primal_residual = (B * res.W - Y).cwiseAbs().maxCoeff();
    double dv = 0.0;
    Mat BtV = B.transpose() * res.dual;
    for (size_t gi = 0; gi < groups.size(); ++gi) dv = std::max(dv, group_norm(BtV, groups[gi]) - p(gi));
    r.dual_residual = std::max(0.0, dv);
    r.converged = conv && r.primal_residual <= cfg.abs_tol * yscale;
    r.wall_time_ms = ms_since(t0);
    return res;
}

GroupResult group_lasso(const Mat& B, const Mat& Y, const Groups& groups, double beta, const SolverConfig& cfg,
                        const Vec& penalty) {
    cfg.validate();
    require_finite(B, "B");
    require_finite(Y, "Y");
    if (B.rows() != Y.rows()) throw InvalidInput("group_lasso: shape mismatch");
    if (!(beta >= 0)) throw InvalidInput("group_lasso: beta must be >= 0");
    auto t0 = Clock::now();
    const Index k = B.cols(), o = Y.cols();
    check_groups(groups, k);
    const Vec p = resolve_penalty(penalty, Index(groups.size()));

    std::vector<Mat> Bg(groups.size());
    std::vector<double> Lg(groups.size());
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        Bg[gi].resize(B.rows(), groups[gi].size());
        for (size_t s = 0; s < groups[gi].size(); ++s) Bg[gi].col(s) = B.col(groups[gi][s]);
        Lg[gi] = groups[gi].size() == 1 ? Bg[gi].squaredNorm()
                                        : Eigen::JacobiSVD<Mat>(Bg[gi]).singularValues()(0) *
                                              Eigen::JacobiSVD<Mat>(Bg[gi]).singularValues()(0);
    }

    Mat W = Mat::Zero(k, o);
    Mat R = Y;  // residual Y - BW
    auto objective = [&](const Mat& Wc) {
        double s = 0.5 * (B * Wc - Y).squaredNorm();
        for (size_t gi = 0; gi < groups.size(); ++gi) s += beta * p(gi) * group_norm(Wc, groups[gi]);
        return s;
    };
    auto kkt = [&](const Mat& Wc) {
        Mat G = B.transpose() * (Y - B * Wc);  // negative gradient
        double worst = 0.0;
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            const auto& g = groups[gi];
            Mat Gg(g.size(), o), Wg(g.size(), o);
            for (size_t s = 0; s < g.size(); ++s) {
                Gg.row(s) = G.row(g[s]);
                Wg.row(s) = Wc.row(g[s]);
            }
            double wn = Wg.norm();
            double e = wn > 0 ? (Gg - beta * p(gi) * Wg / wn).norm() : std::max(0.0, Gg.norm() - beta * p(gi));
            worst = std::max(worst, e);
        }
        return worst;
    };
    const double scale = 1.0 + (B.transpose() * Y).norm();
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        double maxdelta = 0.0;
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            const auto& g = groups[gi];
            if (Lg[gi] <= 0.0) continue;
            Mat Wg(g.size(), o);
            for (size_t s = 0; s < g.size(); ++s) Wg.row(s) = W.row(g[s]);
            const double t = beta * p(gi);
            Mat Wn;
            if (g.size() == 1) {
                Mat z = (Bg[gi].transpose() * R) + Lg[gi] * Wg;
                double zn = z.norm();
                Wn = (zn > t ? (1.0 - t / zn) : 0.0) * z / Lg[gi];
            } else {
                Wn = Wg;
                Mat Rl = R + Bg[gi] * Wg;  // residual without this block
                for (int inner = 0; inner < 50; ++inner) {
                    Mat z = Wn + Bg[gi].transpose() * (Rl - Bg[gi] * Wn) / Lg[gi];
                    double zn = z.norm();
                    Mat nxt = (zn > t / Lg[gi] ? (1.0 - t / (Lg[gi] * zn)) : 0.0) * z;
                    double ch = (nxt - Wn).norm();
                    Wn = nxt;
                    if (ch <= 1e-15 * (1.0 + Wn.norm())) break;
                }
            }
            Mat D = Wn - Wg;
            double dn = D.norm();
            if (dn > 0) {
                R -= Bg[gi] * D;
                for (size_t s = 0; s < g.size(); ++s) W.row(g[s]) = Wn.row(s);
                maxdelta = std::max(maxdelta, dn * std::sqrt(Lg[gi]));
            }
        }
        if (maxdelta <= 1e-15 * (1.0 + Y.norm())) break;
        if ((it % 25) == 24) {
            R = Y - B * W;
            if (kkt(W) <= 1e-12 * scale) break;
        }
    }
    GroupResult res;
    res.W = W;
    res.dual = Y - B * W;
    SolveReport& r = res.report;
    r.objective = objective(W);
    r.iterations = it + 1;
    r.primal_residual = kkt(W);
    r.dual_residual = 0.0;
    r.converged = r.primal_residual <= 1e-6 * scale;
    r.wall_time_ms = ms_since(t0);
    return res;
}

// ---------------------------------------------------------------- spike-free program

namespace {

SpikeFreeProgramResult spikefree_admm(const Mat& A, const Vec& y, double beta, Loss loss, bool equality,
                                      const SolverConfig& cfg) {
    cfg.validate();
    require_finite(A, "A");
    require_finite(y, "y");
    if (A.rows() != y.size()) throw InvalidInput("spikefree_convex_train: shape mismatch");
    if (!(beta >= 0)) throw InvalidInput("spikefree_convex_train: beta must be >= 0");
    auto t0 = Clock::now();
    const Index n = A.rows(), d = A.cols();
    const Mat AtA = A.transpose() * A;
    // M = [A 0; 0 A; I 0; 0 I; A -A]
    Mat MtM(2 * d, 2 * d);
    MtM.topLeftCorner(d, d) = 2.0 * AtA + Mat::Identity(d, d);
    MtM.bottomRightCorner(d, d) = 2.0 * AtA + Mat::Identity(d, d);
    MtM.topRightCorner(d, d) = -AtA;
    MtM.bottomLeftCorner(d, d) = -AtA;
    Eigen::LLT<Mat> llt(MtM);

    auto apply_M = [&](const Vec& w1, const Vec& w2, Vec& z1, Vec& z2, Vec& t1, Vec& t2, Vec& r) {
        z1 = A * w1;
        z2 = A * w2;
        t1 = w1;
        t2 = w2;
        r = z1 - z2;
    };

    Vec w1 = Vec::Zero(d), w2 = Vec::Zero(d);
    Vec z1 = Vec::Zero(n), z2 = Vec::Zero(n), t1 = Vec::Zero(d), t2 = Vec::Zero(d), r = Vec::Zero(n);
    Vec u1 = z1, u2 = z2, s1 = t1, s2 = t2, ur = r;  // scaled duals
    double rho = cfg.rho;
    const double pen = equality ? 1.0 : beta;
    int it = 0;
    bool conv = false;
    const double sqdim = std::sqrt(double(3 * n + 2 * d));

    auto group_shrink = [](const Vec& x, double t) {
        double nx = x.norm();
        if (nx > t) return Vec((1.0 - t / nx) * x);
        return Vec(Vec::Zero(x.size()));
    };

    for (; it < cfg.max_iters; ++it) {
        // x-update
        Vec q1 = z1 - u1, q2 = z2 - u2, qt1 = t1 - s1, qt2 = t2 - s2, qr = r - ur;
        Vec rhs(2 * d);
        rhs.head(d) = A.transpose() * q1 + qt1 + A.transpose() * qr;
        rhs.tail(d) = A.transpose() * q2 + qt2 - A.transpose() * qr;
        Vec x = llt.solve(rhs);
        w1 = x.head(d);
        w2 = x.tail(d);
        Vec Mz1, Mz2, Mt1, Mt2, Mr;
        apply_M(w1, w2, Mz1, Mz2, Mt1, Mt2, Mr);

        Vec oz1 = z1, oz2 = z2, ot1 = t1, ot2 = t2, orr = r;
        z1 = (Mz1 + u1).cwiseMax(0.0);
        z2 = (Mz2 + u2).cwiseMax(0.0);
        t1 = group_shrink(Mt1 + s1, pen / rho);
        t2 = group_shrink(Mt2 + s2, pen / rho);
        Vec qq = Mr + ur;
        if (equality) {
            r = y;
        } else if (loss == Loss::squared) {
            r = (y + rho * qq) / (1.0 + rho);
        } else {
            for (Index i = 0; i < n; ++i) {
                double zz = y(i) * qq(i);
                double s;
                if (zz >= 1.0) s = zz;
                else if (zz <= 1.0 - 1.0 / rho) s = zz + 1.0 / rho;
                else s = 1.0;
                r(i) = y(i) * s;
            }
        }
        u1 += Mz1 - z1;
        u2 += Mz2 - z2;
        s1 += Mt1 - t1;
        s2 += Mt2 - t2;
        ur += Mr - r;

        double rp = std::sqrt((Mz1 - z1).squaredNorm() + (Mz2 - z2).squaredNorm() + (Mt1 - t1).squaredNorm() +
                              (Mt2 - t2).squaredNorm() + (Mr - r).squaredNorm());
        Vec dz1 = z1 - oz1, dz2 = z2 - oz2, dt1 = t1 - ot1, dt2 = t2 - ot2, dr = r - orr;
        Vec g1 = A.transpose() * dz1 + dt1 + A.transpose() * dr;
        Vec g2 = A.transpose() * dz2 + dt2 - A.transpose() * dr;
        double rd = rho * std::sqrt(g1.squaredNorm() + g2.squaredNorm());
        double mx = std::sqrt(Mz1.squaredNorm() + Mz2.squaredNorm() + Mt1.squaredNorm() + Mt2.squaredNorm() +
                              Mr.squaredNorm());
        double zx = std::sqrt(z1.squaredNorm() + z2.squaredNorm() + t1.squaredNorm() + t2.squaredNorm() +
                              r.squaredNorm());
        Vec h1 = A.transpose() * u1 + s1 + A.transpose() * ur;
        Vec h2 = A.transpose() * u2 + s2 - A.transpose() * ur;
        double ux = rho * std::sqrt(h1.squaredNorm() + h2.squaredNorm());
        double ep = cfg.abs_tol * sqdim + cfg.rel_tol * std::max(mx, zx);
        double ed = cfg.abs_tol * sqdim + cfg.rel_tol * ux;
        if (rp <= ep && rd <= ed && it > 10) {
            conv = true;
            break;
        }
        if (rp > 10.0 * rd) {
            rho *= 2.0;
            u1 /= 2.0; u2 /= 2.0; s1 /= 2.0; s2 /= 2.0; ur /= 2.0;
        } else if (rd > 10.0 * rp) {
            rho /= 2.0;
            u1 *= 2.0; u2 *= 2.0; s1 *= 2.0; s2 *= 2.0; ur *= 2.0;
        }
    }

    SpikeFreeProgramResult res;
    // the shrunk copies carry exact zeros; project them onto the cone for exact feasibility
    res.w1 = project_polyhedral_cone(A, t1);
    res.w2 = project_polyhedral_cone(A, t2);
    Vec f = A * (res.w1 - res.w2);
    SolveReport& rep = res.report;
    if (equality) {
        rep.objective = res.w1.norm() + res.w2.norm();
        rep.primal_residual = (f - y).cwiseAbs().maxCoeff();
    } else {
        rep.objective = loss_value(loss, f, y) + beta * (res.w1.norm() + res.w2.norm());
        rep.primal_residual = std::max(0.0, -std::min((A * res.w1).minCoeff(), (A * res.w2).minCoeff()));
    }
    rep.dual_residual = 0.0;
    rep.iterations = it + 1;
    rep.converged = conv;
    rep.wall_time_ms = ms_since(t0);
    return res;
}

}  // namespace

SpikeFreeProgramResult spikefree_convex_train(const Mat& A, const Vec& y, double beta, Loss loss,
                                              const SolverConfig& cfg) {
    return spikefree_admm(A, y, beta, loss, false, cfg);
}

SpikeFreeProgramResult spikefree_convex_train_eq(const Mat& A, const Vec& y, const SolverConfig& cfg) {
    return spikefree_admm(A, y, 0.0, Loss::squared, true, cfg);
}

}  // namespace cvxrelu

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

#include "cvxrelu/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "cvxrelu/errors.hpp"
#include "cvxrelu/parallel.hpp"
#include "cvxrelu/random.hpp"

namespace cvxrelu {

const char* to_string(SpikeFreeStatus s) {
    switch (s) {
        case SpikeFreeStatus::certified_spike_free: return "certified-spike-free";
        case SpikeFreeStatus::certified_not_spike_free: return "certified-not-spike-free";
        case SpikeFreeStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(SpikeFreeMethod m) {
    switch (m) {
        case SpikeFreeMethod::analytic_whitened: return "analytic-whitened";
        case SpikeFreeMethod::analytic_rank_one: return "analytic-rank-one";
        case SpikeFreeMethod::analytic_diagonal: return "analytic-diagonal";
        case SpikeFreeMethod::numeric_search: return "numeric-search";
    }
    return "?";
}

double spike_free_ratio(const Mat& A, const Mat& A_pinv, const Vec& u) {
    return (A_pinv * relu(Vec(A * u))).norm();
}

bool has_orthogonal_rows(const Mat& A, double tol) {
    Mat G = A * A.transpose();
    for (Index i = 0; i < G.rows(); ++i)
        for (Index j = i + 1; j < G.cols(); ++j)
            if (std::abs(G(i, j)) > tol * std::sqrt(G(i, i) * G(j, j)) + 1e-300) return false;
    return true;
}

std::optional<RankOneFactors> rank_one_factors(const Mat& A) {
    if (A.size() == 0) return std::nullopt;
    SvdFactors f = svd(A);
    if (f.rank != 1) return std::nullopt;
    RankOneFactors r;
    r.c = f.U_left.col(0) * f.singular_values(0);
    r.a = f.V_right.col(0);
    return r;
}

namespace {

bool same_sign(const Vec& c) {
    const double tol = 1e-12 * c.cwiseAbs().maxCoeff();
    return (c.array() >= -tol).all() || (c.array() <= tol).all();
}

}  // namespace

bool analytically_spike_free(const Mat& A) {
    if (A.rows() <= A.cols() && whiteness_residual(A) <= 1e-6) return true;
    if (has_orthogonal_rows(A)) return true;
    auto r1 = rank_one_factors(A);
    return r1 && same_sign(r1->c);
}

// ---------------------------------------------------------------- spike-free check

SpikeFreeVerdict spike_free_check(const Mat& A, const SearchConfig& cfg) {
    require_finite(A, "A");
    SpikeFreeVerdict out;
    const Index n = A.rows(), d = A.cols();
    if (n <= d && whiteness_residual(A) <= 1e-6) {
        out.status = SpikeFreeStatus::certified_spike_free;
        out.method = SpikeFreeMethod::analytic_whitened;
        out.max_ratio = 1.0;
        return out;
    }
    if (has_orthogonal_rows(A)) {
        out.status = SpikeFreeStatus::certified_spike_free;
        out.method = SpikeFreeMethod::analytic_diagonal;
        out.max_ratio = 1.0;
        return out;
    }
    if (auto r1 = rank_one_factors(A); r1 && same_sign(r1->c)) {
        out.status = SpikeFreeStatus::certified_spike_free;
        out.method = SpikeFreeMethod::analytic_rank_one;
        out.max_ratio = 1.0;
        return out;
    }

    out.method = SpikeFreeMethod::numeric_search;
    const Mat Ap = pseudo_inverse(A);
    const Mat Gm = Ap.transpose() * Ap;  // (A A^T)^+
    const Mat P = A * Ap;                // projector onto range(A)
    const int rank = numerical_rank(A);
    const bool full_row = rank == n;

    auto h2 = [&](const Vec& u) {
        Vec z = relu(Vec(A * u));
        return z.dot(Gm * z);
    };
    auto ascend = [&](Vec u) {
        double un = u.norm();
        if (un <= 0) return std::make_pair(0.0, u);
        u /= un;
        double val = h2(u);
        double eta = 1.0;
        for (int it = 0; it < cfg.max_iters && eta > 1e-12; ++it) {
            Vec z = A * u;
            Vec zp = relu(z);
            Vec g = Gm * zp;
            for (Index i = 0; i < n; ++i)
                if (z(i) <= 0) g(i) = 0.0;
            Vec grad = A.transpose() * g;
            // tangent component only
            grad -= grad.dot(u) * u;
            if (grad.norm() <= 1e-14 * (1.0 + std::sqrt(val))) break;
            for (;;) {
                Vec cand = u + eta * grad;
                cand /= cand.norm();
                double cv = h2(cand);
                if (cv > val) {
                    u = cand;
                    val = cv;
                    eta *= 2.0;
                    break;
                }
                eta *= 0.5;
                if (eta <= 1e-12) break;
            }
        }
        return std::make_pair(val, u);
    };

    std::vector<Vec> starts;
    if (full_row) {
        const Mat G = Gm;
        std::vector<std::tuple<double, Index, Index>> pairs;
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (i != j && G(i, j) > 0) pairs.emplace_back(G(i, j) / std::sqrt(G(i, i) * G(j, j)), i, j);
        std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });
        if (pairs.size() > size_t(4 * n)) pairs.resize(4 * n);
        for (auto& [rho, i, j] : pairs) {
            Vec e = Vec::Zero(n);
            e(i) = 1.0;
            e(j) = -G(i, j) / G(j, j);
            starts.push_back(A.transpose() * (G * e));
        }
    }
    for (Index i = 0; i < n; ++i) starts.push_back(A.row(i).transpose());
    const size_t det = starts.size();
    const size_t total = det + size_t(std::max(0, cfg.restarts));

    std::vector<std::pair<double, Vec>> found(total);
    std::vector<double> rangev(total, 0.0);
    parallel_for(total, [&](size_t r) {
        Vec u0;
        if (r < det) {
            u0 = starts[r];
        } else {
            Rng rng(derive_seed(cfg.seed, r - det));
            u0 = random_unit_vector(d, rng);
        }
        found[r] = ascend(u0);
        if (!full_row && found[r].second.size() == d) {
            Vec z = relu(Vec(A * found[r].second));
            rangev[r] = (z - P * z).norm();
        }
    });

    double best = -1.0;
    Vec bu = Vec::Zero(d);
    for (size_t r = 0; r < total; ++r) {
        if (found[r].first > best) {
            best = found[r].first;
            bu = found[r].second;
        }
        out.range_violation = std::max(out.range_violation, rangev[r]);
    }
    out.max_ratio = std::sqrt(std::max(0.0, best));
    // direct re-evaluation guards the witness
    double direct = bu.norm() > 0 ? spike_free_ratio(A, Ap, bu / bu.norm()) : 0.0;
    if (direct > 1.0 + 1e-6) {
        out.status = SpikeFreeStatus::certified_not_spike_free;
        out.witness_u = bu / bu.norm();
        out.max_ratio = direct;
    } else {
        out.status = SpikeFreeStatus::inconclusive;
    }
    return out;
}

// ---------------------------------------------------------------- relu correlation maximizer

namespace {

ReluMax local_search(const Mat& A, const Vec& v, Vec u, int max_iters) {
    ReluMax res;
    res.u = Vec::Zero(A.cols());
    double un = u.norm();
    if (!(un > 0)) return res;
    u /= un;
    auto phi = [&](const Vec& x) { return v.dot(relu(Vec(A * x))); };
    double val = phi(u);
    const double btol = 1e-10 * std::max(1.0, A.cwiseAbs().maxCoeff());
    for (int it = 0; it < max_iters; ++it) {
        Vec z = A * u;
        Mat M(A.rows(), A.cols());
        Vec c = Vec::Zero(A.cols());
        for (Index i = 0; i < A.rows(); ++i) {
            bool act = z(i) > btol || (z(i) >= -btol && v(i) > 0);
            if (act) {
                M.row(i) = A.row(i);
                c += v(i) * A.row(i).transpose();
            } else {
                M.row(i) = -A.row(i);
            }
        }
        ConeBallResult cb = cone_ball_max(M, c);
        if (cb.value > val + 1e-13 * (1.0 + std::abs(val)) && cb.u.norm() > 0) {
            u = cb.u;
            val = phi(u);
        } else {
            break;
        }
    }
    res.u = u;
    res.value = val;
    return res;
}

ReluMax nobias_max(const Mat& A, const Vec& v, const SearchConfig& cfg, bool spike_free_hint,
                   const std::optional<RankOneFactors>& r1) {
    const Index d = A.cols();
    ReluMax best;
    best.u = Vec::Zero(d);
    best.exact = false;
    if (A.cwiseAbs().maxCoeff() == 0.0 || v.cwiseAbs().maxCoeff() == 0.0) {
        best.exact = true;
        if (d > 0) best.u(0) = 1.0;
        return best;
    }
    if (r1) {
        double vp = v.dot(relu(r1->c)), vm = v.dot(relu(Vec(-r1->c)));
        best.exact = true;
        if (vp >= vm && vp > 0) {
            best.value = vp;
            best.u = r1->a;
        } else if (vm > 0) {
            best.value = vm;
            best.u = -r1->a;
        } else {
            best.value = 0.0;
            best.u = r1->a;
        }
        return best;
    }
    ConeBallResult cb = cone_ball_lp(A, v, Sense::max);
    if (spike_free_hint) {
        best.exact = true;
        best.value = std::max(0.0, v.dot(relu(Vec(A * cb.u))));
        best.u = cb.u.norm() > 0 ? cb.u : Vec(Vec::Unit(d, 0));
        return best;
    }
    std::vector<Vec> starts;
    if (cb.u.norm() > 0) starts.push_back(cb.u);
    {
        Vec s = A.transpose() * relu(v);
        if (s.norm() > 0) starts.push_back(s);
    }
    for (Index i = 0; i < A.rows(); ++i)
        if (v(i) > 0 && A.row(i).norm() > 0) starts.push_back(A.row(i).transpose());
    const size_t det = starts.size();
    const size_t total = det + size_t(std::max(0, cfg.restarts));
    std::vector<ReluMax> runs(total);
    parallel_for(total, [&](size_t r) {
        Vec u0;
        if (r < det) {
            u0 = starts[r];
        } else {
            Rng rng(derive_seed(cfg.seed, r - det));
            u0 = random_unit_vector(d, rng);
        }
        runs[r] = local_search(A, v, u0, cfg.max_iters);
    });
    best.value = 0.0;
    best.u = Vec::Unit(d, 0);
    for (const auto& r : runs)
        if (r.value > best.value) {
            best.value = r.value;
            best.u = r.u;
        }
    return best;
}

struct BiasContext {
    std::vector<Index> anchors;             // unique rows
    std::vector<Mat> centered;              // A - 1 a_k^T
    std::vector<std::optional<RankOneFactors>> r1;
    std::vector<char> sf;
};

BiasContext make_bias_context(const Mat& A) {
    BiasContext ctx;
    for (Index k = 0; k < A.rows(); ++k) {
        bool dup = false;
        for (Index kk : ctx.anchors)
            if ((A.row(kk) - A.row(k)).cwiseAbs().maxCoeff() == 0.0) dup = true;
        if (dup) continue;
        ctx.anchors.push_back(k);
        Mat C = A.rowwise() - A.row(k);
        ctx.r1.push_back(rank_one_factors(C));
        ctx.sf.push_back(ctx.r1.back() ? 0 : char(analytically_spike_free(C)));
        ctx.centered.push_back(std::move(C));
    }
    return ctx;
}

ReluMax bias_max(const Mat& A, const Vec& v, const SearchConfig& cfg, const BiasContext& ctx) {
    ReluMax best;
    best.u = Vec::Unit(A.cols(), 0);
    const double s = v.sum();
    if (s > 1e-9 * std::max(v.cwiseAbs().sum(), 1e-300)) {
        best.unbounded = true;
        best.value = std::numeric_limits<double>::infinity();
        best.exact = true;
        best.b = 0.0;
        return best;
    }
    best.exact = true;
    best.value = 0.0;
    best.b = -A.row(0).dot(best.u) - 1.0;  // everything inactive
    best.b = std::min(best.b, ((-A * best.u).array()).minCoeff() - 1.0);
    for (size_t t = 0; t < ctx.anchors.size(); ++t) {
        SearchConfig sub = cfg;
        sub.seed = derive_seed(cfg.seed, 1000003 + t);
        ReluMax r = nobias_max(ctx.centered[t], v, sub, ctx.sf[t], ctx.r1[t]);
        best.exact = best.exact && r.exact;
        if (r.value > best.value) {
            best.value = r.value;
            best.u = r.u;
            best.b = -A.row(ctx.anchors[t]).dot(r.u);
        }
    }
    return best;
}

}  // namespace

ReluMax maximize_relu(const Mat& A, const Vec& v, bool bias, const SearchConfig& cfg) {
    require_finite(A, "A");
    if (A.rows() != v.size()) throw InvalidInput("maximize_relu: shape mismatch");
    if (bias) return bias_max(A, v, cfg, make_bias_context(A));
    auto r1 = rank_one_factors(A);
    return nobias_max(A, v, cfg, !r1 && analytically_spike_free(A), r1);
}

std::vector<ReluMax> relu_candidates(const Mat& A, const Vec& v, bool bias, const SearchConfig& cfg) {
    require_finite(A, "A");
    if (A.rows() != v.size()) throw InvalidInput("relu_candidates: shape mismatch");
    std::vector<ReluMax> out;
    if (!bias) {
        out.push_back(maximize_relu(A, v, false, cfg));
        return out;
    }
    BiasContext ctx = make_bias_context(A);
    ReluMax top = bias_max(A, v, cfg, BiasContext{});
    if (top.unbounded) {
        out.push_back(top);
        return out;
    }
    for (size_t t = 0; t < ctx.anchors.size(); ++t) {
        SearchConfig sub = cfg;
        sub.seed = derive_seed(cfg.seed, 1000003 + t);
        ReluMax r = nobias_max(ctx.centered[t], v, sub, ctx.sf[t], ctx.r1[t]);
        r.b = -A.row(ctx.anchors[t]).dot(r.u);
        out.push_back(r);
    }
    std::stable_sort(out.begin(), out.end(), [](const ReluMax& x, const ReluMax& y) { return x.value > y.value; });
    return out;
}

AbsReluMax maximize_abs_relu(const Mat& A, const Vec& v, bool bias, const SearchConfig& cfg) {
    require_finite(A, "A");
    if (A.rows() != v.size()) throw InvalidInput("maximize_abs_relu: shape mismatch");
    AbsReluMax out;
    ReluMax p, m;
    if (bias) {
        BiasContext ctx = make_bias_context(A);
        p = bias_max(A, v, cfg, ctx);
        m = bias_max(A, -v, cfg, ctx);
    } else {
        auto r1 = rank_one_factors(A);
        bool sf = !r1 && analytically_spike_free(A);
        p = nobias_max(A, v, cfg, sf, r1);
        m = nobias_max(A, -v, cfg, sf, r1);
    }
    if (m.value > p.value) {
        out.best = m;
        out.sign = -1.0;
    } else {
        out.best = p;
        out.sign = 1.0;
    }
    out.best.exact = p.exact && m.exact;
    return out;
}

std::vector<Vec> sample_rectified_ellipsoid(const Mat& A, int count, std::uint64_t seed) {
    require_finite(A, "A");
    Rng rng(seed);
    std::vector<Vec> pts;
    pts.reserve(std::max(0, count));
    for (int i = 0; i < count; ++i) pts.push_back(relu(Vec(A * random_unit_vector(A.cols(), rng))));
    return pts;
}

double polar_support(const Mat& A, const Vec& g, const SearchConfig& cfg) {
    return maximize_relu(A, g, false, cfg).value;
}

PolarSample sample_polar(const Mat& A, int count, std::uint64_t seed, const SearchConfig& cfg) {
    require_finite(A, "A");
    Rng rng(seed);
    PolarSample out;
    auto r1 = rank_one_factors(A);
    bool sf = !r1 && analytically_spike_free(A);
    for (int i = 0; i < count; ++i) {
        Vec g = random_unit_vector(A.rows(), rng);
        SearchConfig sub = cfg;
        sub.seed = derive_seed(seed, i);
        double s = nobias_max(A, g, sub, sf, r1).value;
        if (s <= 1e-12) {
            out.skipped++;
            continue;
        }
        out.points.push_back(g / s);
    }
    return out;
}

// ---------------------------------------------------------------- extreme points

Neuron extreme_point_basis(const Mat& A, Index i, const SolverConfig& cfg) {
    require_finite(A, "A");
    const Index n = A.rows(), d = A.cols();
    if (n < 2) throw InvalidInput("extreme_point_basis needs n >= 2");
    if (i < 0 || i >= n) throw InvalidInput("sample index out of range");
    Mat G(d, n - 1);
    for (Index j = 0, c = 0; j < n; ++j)
        if (j != i) G.col(c++) = A.row(j).transpose();
    const Vec ai = A.row(i).transpose();
    SolverConfig sc = cfg;
    sc.max_iters = std::max(cfg.max_iters, 20000);
    SimplexLsResult sl = simplex_ls(G, ai, sc);
    Vec r = ai - G * sl.lambda;
    double rn = r.norm();
    if (rn <= 1e-8) throw DegenerateExtreme("sample " + std::to_string(i) + " lies in the hull of the others");
    Neuron nr;
    nr.u = r / rn;
    double b = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < n; ++j)
        if (j != i) b = std::min(b, -A.row(j).dot(nr.u));
    nr.b = b;
    nr.provenance = Provenance::basis_direction;
    nr.source = int(i);
    if (!(ai.dot(nr.u) + b > 0)) throw DegenerateExtreme("sample " + std::to_string(i) + " is not separable");
    return nr;
}

namespace {

// some nonzero element of {u : M u >= 0}, or empty
std::optional<Vec> cone_element(const Mat& M) {
    const Index d = M.cols();
    for (Index j = 0; j < d; ++j)
        for (double s : {1.0, -1.0}) {
            ConeBallResult r = cone_ball_max(M, s * Vec::Unit(d, j));
            if (r.value > 1e-10) return r.u;
        }
    return std::nullopt;
}

}  // namespace

Neuron extreme_point_direction(const Mat& A, const Vec& alpha, const std::vector<Index>& S, const SolverConfig& cfg) {
    (void)cfg;
    require_finite(A, "A");
    const Index n = A.rows(), d = A.cols();
    if (alpha.size() != n) throw InvalidInput("alpha length differs from n");
    std::vector<char> inS(n, 0);
    for (Index i : S) {
        if (i < 0 || i >= n) throw InvalidInput("pattern index out of range");
        inS[i] = 1;
    }
    double sumS = 0.0;
    for (Index i = 0; i < n; ++i)
        if (inS[i]) sumS += alpha(i);
    const bool has_S = !S.empty();
    bool has_Sc = false;
    for (Index i = 0; i < n; ++i)
        if (!inS[i]) has_Sc = true;
    const double stol = 1e-12 * std::max(1.0, alpha.cwiseAbs().sum());

    // b from u by the endpoint rule
    auto bias_for = [&](const Vec& u) {
        double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < n; ++i) {
            double t = -A.row(i).dot(u);
            if (inS[i]) lo = std::max(lo, t);
            else hi = std::min(hi, t);
        }
        double b;
        if (!has_S) b = hi;
        else if (!has_Sc) b = lo;
        else b = (sumS > stol) ? hi : lo;
        return std::make_tuple(b, lo, hi);
    };

    double best_val = -std::numeric_limits<double>::infinity();
    Vec best_u;
    Index best_k = -1;
    for (Index k = 0; k < n; ++k) {
        // the anchor sits on the boundary; it must be allowed on that side
        if (!has_Sc && !inS[k]) continue;
        Mat M(n, d);
        Vec c = Vec::Zero(d);
        for (Index i = 0; i < n; ++i) {
            Vec ci = (A.row(i) - A.row(k)).transpose();
            if (inS[i]) {
                M.row(i) = ci.transpose();
                c += alpha(i) * ci;
            } else {
                M.row(i) = -ci.transpose();
            }
        }
        ConeBallResult r = cone_ball_max(M, c);
        Vec u = r.u;
        if (!(u.norm() > 0)) {
            auto e = cone_element(M);
            if (!e) continue;
            u = *e;
        }
        auto [b, lo, hi] = bias_for(u);
        if (has_S && has_Sc && lo > hi + 1e-9) continue;
        Vec z = (A * u).array() + b;
        double val = 0.0;
        for (Index i = 0; i < n; ++i) val += alpha(i) * std::max(0.0, z(i));
        if (val > best_val + 1e-14) {
            best_val = val;
            best_u = u;
            best_k = k;
        }
    }
    if (best_k < 0) {
        if (!has_S) {
            // everything off: any direction with the bias below all samples
            Neuron nr;
            nr.u = Vec::Unit(d, 0);
            nr.b = (-A * nr.u).minCoeff();
            nr.provenance = Provenance::general_direction;
            return nr;
        }
        throw PatternInfeasible("no (u, b) realizes the requested activation pattern");
    }
    Neuron nr;
    nr.u = best_u / best_u.norm();
    auto [b, lo, hi] = bias_for(nr.u);
    nr.b = b;
    if (has_S && has_Sc && std::abs(sumS) <= stol) nr.bias_interval = std::make_pair(lo, hi);
    nr.provenance = Provenance::general_direction;
    nr.source = int(best_k);
    if (!pattern_matches(A, nr, S)) throw PatternInfeasible("activation pattern could not be matched");
    return nr;
}

std::vector<Neuron> enumerate_extremes_1d(const Vec& a) {
    require_finite(a, "a");
    std::vector<double> vals(a.data(), a.data() + a.size());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<Neuron> out;
    for (double s : {1.0, -1.0})
        for (double ai : vals) {
            Neuron nr;
            nr.u = Vec::Constant(1, s);
            nr.b = -s * ai;
            nr.provenance = Provenance::one_dim;
            for (Index i = 0; i < a.size(); ++i)
                if (a(i) == ai) {
                    nr.source = int(i);
                    break;
                }
            out.push_back(nr);
        }
    return out;
}

std::vector<Neuron> enumerate_extremes_rankone(const Vec& c, const Vec& a) {
    require_finite(c, "c");
    require_finite(a, "a");
    const double an = a.norm();
    if (!(an > 0)) throw InvalidInput("rank-one direction a must be nonzero");
    std::vector<double> vals(c.data(), c.data() + c.size());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<Neuron> out;
    for (double s : {1.0, -1.0})
        for (double ci : vals) {
            Neuron nr;
            nr.u = s * a / an;
            nr.b = -s * ci * an;
            nr.provenance = Provenance::rank_one;
            for (Index i = 0; i < c.size(); ++i)
                if (c(i) == ci) {
                    nr.source = int(i);
                    break;
                }
            out.push_back(nr);
        }
    return out;
}

double hull_distance(const Mat& A, Index i, const SolverConfig& cfg) {
    const Index n = A.rows(), d = A.cols();
    if (n < 2) throw InvalidInput("hull_distance needs n >= 2");
    if (i < 0 || i >= n) throw InvalidInput("sample index out of range");
    Mat G(d, n - 1);
    for (Index j = 0, c = 0; j < n; ++j)
        if (j != i) G.col(c++) = A.row(j).transpose();
    SolverConfig sc = cfg;
    sc.max_iters = std::max(cfg.max_iters, 20000);
    return std::max(0.0, simplex_ls(G, A.row(i).transpose(), sc).distance);
}

std::vector<Index> activation_pattern(const Mat& A, const Neuron& nr, double tol) {
    Vec z = (A * nr.u).array() + nr.bias();
    std::vector<Index> S;
    for (Index i = 0; i < z.size(); ++i)
        if (z(i) >= -tol) S.push_back(i);
    return S;
}

bool pattern_matches(const Mat& A, const Neuron& nr, const std::vector<Index>& S, double tol) {
    Vec z = (A * nr.u).array() + nr.bias();
    std::vector<char> inS(A.rows(), 0);
    for (Index i : S) inS[i] = 1;
    for (Index i = 0; i < z.size(); ++i) {
        if (inS[i] && z(i) < -tol) return false;
        if (!inS[i] && z(i) > tol) return false;
    }
    return true;
}

}  // namespace cvxrelu

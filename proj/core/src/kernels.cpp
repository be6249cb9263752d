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

#include "cvxrelu/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cvxrelu/errors.hpp"
#include "cvxrelu/geometry.hpp"

namespace cvxrelu {

Mat adaptive_kernel_matrix(const Vec& a) {
    const Index n = a.size();
    Mat K(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) K(i, j) = std::max(a(i) - a(j), 0.0);
    return K;
}

double ntk_kappa(double u) {
    u = std::clamp(u, -1.0, 1.0);
    const double pi = std::numbers::pi;
    const double ac = std::acos(u);
    const double k0 = (pi - ac) / pi;
    const double k1 = (u * (pi - ac) + std::sqrt(std::max(0.0, 1.0 - u * u))) / pi;
    return u * k0 + k1;
}

namespace {
double nudge(double x) { return x == 0.0 ? 1e-12 : x; }
}  // namespace

double ntk_kernel_1d(double x, double z) {
    x = nudge(x);
    z = nudge(z);
    const double nx = std::abs(x), nz = std::abs(z);
    return nx * nz * ntk_kappa(x * z / (nx * nz));
}

double ntk_kernel(const Vec& x, const Vec& z) {
    if (x.size() != z.size()) throw InvalidInput("ntk_kernel: dimension mismatch");
    double nx = x.norm(), nz = z.norm();
    if (nx == 0.0 || nz == 0.0) return 0.0;
    return nx * nz * ntk_kappa(x.dot(z) / (nx * nz));
}

Mat ntk_kernel_matrix(const Vec& a) {
    const Index n = a.size();
    Mat K(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j <= i; ++j) K(i, j) = K(j, i) = ntk_kernel_1d(a(i), a(j));
    return K;
}

Mat ntk_kernel_matrix_bias(const Vec& a) {
    const Index n = a.size();
    Mat K(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j <= i; ++j) {
            Vec x(2), z(2);
            x << a(i), 1.0;
            z << a(j), 1.0;
            K(i, j) = K(j, i) = ntk_kernel(x, z);
        }
    return K;
}

const char* to_string(KernelKind k) { return k == KernelKind::adaptive_relu_l1 ? "adaptive-relu-l1" : "ntk-l2"; }

double KernelFit::predict(double x) const {
    if (kind == KernelKind::adaptive_relu_l1) {
        Vec xs = Vec::Constant(1, x);
        return net.predict_1d(xs)(0);
    }
    double s = 0.0;
    for (Index j = 0; j < train_points.size(); ++j) {
        double k;
        if (ntk_bias) {
            Vec p(2), q(2);
            p << x, 1.0;
            q << train_points(j), 1.0;
            k = ntk_kernel(p, q);
        } else {
            k = ntk_kernel_1d(x, train_points(j));
        }
        s += weights(j) * k;
    }
    return s;
}

Vec KernelFit::predict(const Vec& x) const {
    if (kind == KernelKind::adaptive_relu_l1) return net.predict_1d(x);
    Vec out(x.size());
    for (Index i = 0; i < x.size(); ++i) out(i) = predict(x(i));
    return out;
}

KernelFit fit(KernelKind kind, const Vec& a, const Vec& y, const KernelConfig& cfg) {
    if (a.size() == 0 || a.size() != y.size()) throw InvalidInput("kernel fit: a and y must be nonempty and equal length");
    require_finite(a, "a");
    require_finite(y, "y");
    KernelFit f;
    f.kind = kind;
    f.train_points = a;
    f.ntk_bias = cfg.ntk_bias;
    if (kind == KernelKind::ntk_l2) {
        Mat K = cfg.ntk_bias ? ntk_kernel_matrix_bias(a) : ntk_kernel_matrix(a);
        Eigen::JacobiSVD<Mat> svd(K);
        const auto& s = svd.singularValues();
        double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
        if (!(cond <= cfg.max_condition)) throw SingularKernel("NTK kernel matrix is singular on the training points");
        // min ||w||_2 s.t. K w = y has the unique solution K^{-1} y
        f.weights = K.partialPivLu().solve(y);
        f.objective = f.weights.squaredNorm();
        return f;
    }
    std::vector<Neuron> dict = enumerate_extremes_1d(a);
    Mat A(a.size(), 1);
    A.col(0) = a;
    Mat H = activations(A, dict);
    Mat B(H.rows(), H.cols() + 1);
    B.leftCols(H.cols()) = H;
    B.col(H.cols()).setOnes();
    Vec pen = Vec::Ones(B.cols());
    pen(H.cols()) = 0.0;
    L1Result r = basis_pursuit(B, y, cfg.solver, pen);
    f.weights = r.w.head(H.cols());
    f.objective = f.weights.cwiseAbs().sum();
    f.net.has_bias = true;
    f.net.neurons = dict;
    f.net.w = f.weights;
    f.net.intercept = Vec::Constant(1, r.w(H.cols()));
    return f;
}

Vec diagnostic_grid(const Vec& a, int points) {
    if (points < 2 || a.size() == 0) throw InvalidInput("diagnostic_grid: need >= 2 points and data");
    return Vec::LinSpaced(points, a.minCoeff() - 0.5, a.maxCoeff() + 0.5);
}

double max_interior_second_difference(const std::function<double(double)>& f, const Vec& a, int points) {
    Vec g = diagnostic_grid(a, points);
    std::vector<double> s(a.data(), a.data() + a.size());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    Vec fg(g.size());
    for (Index i = 0; i < g.size(); ++i) fg(i) = f(g(i));
    double worst = 0.0;
    for (Index i = 1; i + 1 < g.size(); ++i) {
        auto it = std::upper_bound(s.begin(), s.end(), g(i - 1));
        if (it == s.begin() || it == s.end()) continue;  // outside the data range
        if (!(g(i + 1) < *it) || !(g(i - 1) > *(it - 1))) continue;
        double h1 = g(i) - g(i - 1), h2 = g(i + 1) - g(i);
        double dd = ((fg(i + 1) - fg(i)) / h2 - (fg(i) - fg(i - 1)) / h1) / (h1 + h2);
        worst = std::max(worst, std::abs(dd));
    }
    return worst;
}

double linear_interpolant(const Vec& a, const Vec& y, double x) {
    std::vector<Index> idx(static_cast<size_t>(a.size()));
    for (Index i = 0; i < a.size(); ++i) idx[size_t(i)] = i;
    std::sort(idx.begin(), idx.end(), [&](Index p, Index q) { return a(p) < a(q); });
    if (x <= a(idx.front())) return y(idx.front());
    if (x >= a(idx.back())) return y(idx.back());
    for (size_t k = 0; k + 1 < idx.size(); ++k) {
        double x0 = a(idx[k]), x1 = a(idx[k + 1]);
        if (x >= x0 && x <= x1) {
            if (x1 == x0) return y(idx[k]);
            double t = (x - x0) / (x1 - x0);
            return (1 - t) * y(idx[k]) + t * y(idx[k + 1]);
        }
    }
    return y(idx.back());
}

}  // namespace cvxrelu

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

#include "cvxrelu/closed_form.hpp"

#include <cmath>

#include "cvxrelu/errors.hpp"

namespace cvxrelu {

namespace {

void require_whitened(const Mat& A) {
    double r = whiteness_residual(A);
    if (A.rows() > A.cols() || r > 1e-6) throw NotWhitened("A A^T differs from I by " + std::to_string(r), r);
}

Neuron cf_neuron(const Vec& dir) {
    Neuron nr;
    nr.u = dir / dir.norm();
    nr.provenance = Provenance::closed_form;
    return nr;
}

std::string branch_label(bool pos, bool neg) {
    if (pos && neg) return "both-active";
    if (pos) return "positive-only";
    if (neg) return "negative-only";
    return "zero";
}

}  // namespace

Network l0_closed_form(const Mat& A, const Vec& y) {
    require_finite(A, "A");
    if (A.rows() != y.size()) throw InvalidInput("l0_closed_form: shape mismatch");
    if (A.rows() > A.cols() || numerical_rank(A) < A.rows()) throw RankError("A must have full row rank with n <= d");
    const Mat Ap = pseudo_inverse(A);
    Network net;
    std::vector<double> ws;
    const Vec yp = relu(y), ym = relu(Vec(-y));
    if (yp.norm() > 0) {
        Vec z = Ap * yp;
        net.neurons.push_back(cf_neuron(z));
        ws.push_back(z.norm());
    }
    if (ym.norm() > 0) {
        Vec z = Ap * ym;
        net.neurons.push_back(cf_neuron(z));
        ws.push_back(-z.norm());
    }
    net.w = Eigen::Map<Vec>(ws.data(), Index(ws.size()));
    return net;
}

ClosedForm regularized_whitened(const Mat& A, const Vec& y, double beta) {
    require_whitened(A);
    if (A.rows() != y.size()) throw InvalidInput("regularized_whitened: shape mismatch");
    if (!(beta >= 0)) throw InvalidInput("beta must be >= 0");
    const Mat Ap = pseudo_inverse(A);
    const Vec yp = relu(y), ym = relu(Vec(-y));
    const double p = yp.norm(), q = ym.norm();
    // on whitened data ||A^+ z|| = ||z|| for every z
    const double pa = (Ap * yp).norm(), qa = (Ap * ym).norm();
    if (std::abs(pa - p) > 1e-6 * std::max(1.0, p) || std::abs(qa - q) > 1e-6 * std::max(1.0, q))
        throw NotWhitened("threshold norms disagree", std::max(std::abs(pa - p), std::abs(qa - q)));

    ClosedForm out;
    const bool pos = p > 0 && beta <= p;
    const bool neg = q > 0 && beta <= q;
    std::vector<double> ws;
    if (pos) {
        out.net.neurons.push_back(cf_neuron(Ap * yp));
        ws.push_back(p - beta);
    }
    if (neg) {
        out.net.neurons.push_back(cf_neuron(Ap * ym));
        ws.push_back(-(q - beta));
    }
    out.net.w = Eigen::Map<Vec>(ws.data(), Index(ws.size()));
    out.path.beta = beta;
    out.path.active_neuron_count = int(ws.size());
    out.path.case_label = branch_label(pos, neg);
    out.objective = regularized_objective(out.net, make_regression(A, y), beta, Loss::squared);
    return out;
}

ClosedForm hinge_whitened(const Mat& A, const Vec& y, double beta) {
    require_whitened(A);
    Dataset ds = make_binary(A, y);
    if (!(beta >= 0)) throw InvalidInput("beta must be >= 0");
    const Mat Ap = pseudo_inverse(A);
    const Vec yp = relu(y), ym = relu(Vec(-y));
    const double sp = std::sqrt(yp.sum()), sm = std::sqrt(ym.sum());
    ClosedForm out;
    const bool pos = sp > 0 && beta <= sp;
    const bool neg = sm > 0 && beta <= sm;
    std::vector<double> ws;
    if (pos) {
        out.net.neurons.push_back(cf_neuron(Ap * yp));
        ws.push_back(sp);
        if (beta == sp) out.path.weight_interval = std::make_pair(0.0, sp);
    }
    if (neg) {
        out.net.neurons.push_back(cf_neuron(Ap * ym));
        ws.push_back(-sm);
        if (beta == sm) out.path.weight_interval = std::make_pair(-sm, 0.0);
    }
    out.net.w = Eigen::Map<Vec>(ws.data(), Index(ws.size()));
    out.path.beta = beta;
    out.path.active_neuron_count = int(ws.size());
    out.path.case_label = branch_label(pos, neg);
    out.objective = regularized_objective(out.net, ds, beta, Loss::hinge);
    return out;
}

ClosedForm multiclass_whitened(const Mat& A, const Mat& Y, double beta) {
    require_whitened(A);
    Dataset ds = make_multiclass(A, Y);
    if (!(beta >= 0)) throw InvalidInput("beta must be >= 0");
    const Mat Ap = pseudo_inverse(A);
    const Index o = Y.cols();
    ClosedForm out;
    std::vector<Index> active;
    for (Index j = 0; j < o; ++j) {
        double nj = Y.col(j).sum();
        if (nj <= 0) throw EmptyClass("class " + std::to_string(j) + " has no samples");
        if (beta <= std::sqrt(nj)) active.push_back(j);
    }
    out.net.W = Mat::Zero(Index(active.size()), o);
    std::string label = "classes:";
    for (size_t s = 0; s < active.size(); ++s) {
        Index j = active[s];
        out.net.neurons.push_back(cf_neuron(Ap * Y.col(j)));
        out.net.W(Index(s), j) = std::sqrt(Y.col(j).sum()) - beta;
        label += (s ? "," : "") + std::to_string(j);
    }
    if (active.empty()) label = "zero";
    out.path.beta = beta;
    out.path.active_neuron_count = int(active.size());
    out.path.case_label = label;
    out.objective = regularized_objective(out.net, ds, beta, Loss::squared);
    return out;
}

Network l1_vector_closed_form(const Mat& A, const Mat& Y) {
    require_finite(A, "A");
    if (A.rows() != Y.rows()) throw InvalidInput("l1_vector_closed_form: shape mismatch");
    if (A.rows() > A.cols() || numerical_rank(A) < A.rows()) throw RankError("A must have full row rank with n <= d");
    if ((Y.array() < 0).any()) throw InvalidInput("Y must be nonnegative");
    const Mat Ap = pseudo_inverse(A);
    Network net;
    std::vector<Index> cols;
    for (Index k = 0; k < Y.cols(); ++k)
        if (Y.col(k).norm() > 0) cols.push_back(k);
    net.W = Mat::Zero(Index(cols.size()), Y.cols());
    for (size_t s = 0; s < cols.size(); ++s) {
        Vec z = Ap * Y.col(cols[s]);
        net.neurons.push_back(cf_neuron(z));
        net.W(Index(s), cols[s]) = z.norm();
    }
    return net;
}

// ---------------------------------------------------------------- non-uniqueness example

Mat hinge_matrix_1d(const Vec& a, const Vec& u, const Vec& b) {
    Mat M = a * u.transpose();
    M.rowwise() += b.transpose();
    return M.cwiseMax(0.0);
}

double scaled_lasso_objective(const Mat& Ae, const Vec& w, const Vec& y, double beta) {
    const double n = double(y.size());
    return beta * w.lpNorm<1>() + (Ae * w - y).squaredNorm() / (2.0 * n);
}

namespace {

Network network_1d(const Vec& u, const Vec& b, const Vec& w) {
    Network net;
    net.has_bias = true;
    for (Index j = 0; j < u.size(); ++j) {
        Neuron nr;
        nr.u = Vec::Constant(1, u(j));
        nr.b = b(j);
        nr.provenance = Provenance::one_dim;
        net.neurons.push_back(nr);
    }
    net.w = w;
    return net;
}

Vec vec(std::initializer_list<double> xs) {
    Vec v(Index(xs.size()));
    Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

}  // namespace

NonuniquenessFixture nonuniqueness_fixture() {
    NonuniquenessFixture fx;
    fx.a = vec({-2, -1, 0, 1, 2});
    fx.y = vec({1, -1, 1, 1, -1});
    fx.v_star = vec({1, -3, 2, 1, -1});
    fx.v_hat = vec({1, -11.0 / 4, 5.0 / 4, 7.0 / 4, -5.0 / 4});

    const Vec u8 = vec({1, 1, 1, 1, -1, -1, -1, -1});
    const Vec b_star = vec({2, 1, 0, -1, -1, 0, 1, 2});
    const Vec b_hat = vec({2, 1, 0, -0.5, -1, 0, 0.5, 2});
    const Vec w_star = vec({0, 6419.0 / 5000, -3919.0 / 2500, -8581.0 / 5000, 13581.0 / 5000, -1081.0 / 2500,
                            -1419.0 / 5000, 0});
    const Vec w_hat = vec({0, 4.0 / 3, 0, -10.0 / 3, 8.0 / 3, 0, -2.0 / 3, 0});

    for (auto [label, b, w] : {std::make_tuple("equality-star", b_star, w_star),
                               std::make_tuple("equality-hat", b_hat, w_hat)}) {
        FixtureSolution s;
        s.label = label;
        s.Ae = hinge_matrix_1d(fx.a, u8, b);
        s.net = network_1d(u8, b, w);
        s.objective = w.lpNorm<1>();
        fx.equality.push_back(std::move(s));
    }

    const Vec u10 = vec({1, 1, 1, 1, 1, -1, -1, -1, -1, -1});
    // bias family [2, 1, 0, -c, -1, -1, 0, c, 1, 2]
    auto bias = [](double c) { return vec({2, 1, 0, -c, -1, -1, 0, c, 1, 2}); };
    const Vec w1 = vec({0, 3197.0 / 2400, -2497.0 / 1500, 0, -19997.0 / 12000, 31961.0 / 12000, -997.0 / 3000, 0,
                        -3997.0 / 12000, 0});
    const Vec w2 = vec({0, 191823.0 / 140000, -990613.0 / 840000, -471683.0 / 420000, -128017.0 / 120000,
                        367547.0 / 140000, -127357.0 / 840000, -87827.0 / 420000, -31993.0 / 120000, 0});
    const Vec w3 = vec({0, 323691.0 / 248000, -7349999.0 / 5208000, -1039627.0 / 1041600, -4660169.0 / 5208000,
                        667193.0 / 248000, -1810997.0 / 5208000, -199753.0 / 1041600, -795707.0 / 5208000, 0});
    const Vec w4 = vec({0, 167847.0 / 116000, -1248409.0 / 1218000, -1058987.0 / 974400, -6500131.0 / 4872000,
                        295631.0 / 116000, -25387.0 / 1218000, -99563.0 / 974400, -2082883.0 / 4872000, 0});
    // the published weights of the c = 0.2 / c = 0.8 solutions belong to offsets 0.8 / 0.2
    const std::tuple<const char*, double, Vec> regs[] = {
        {"solution1", 0.5, w1}, {"solution2", 0.5, w2}, {"solution3", 0.8, w3}, {"solution4", 0.2, w4}};
    for (const auto& [label, c, w] : regs) {
        FixtureSolution s;
        s.label = label;
        Vec b = bias(c);
        s.Ae = hinge_matrix_1d(fx.a, u10, b);
        s.net = network_1d(u10, b, w);
        s.objective = scaled_lasso_objective(s.Ae, w, fx.y, fx.beta);
        fx.regularized.push_back(std::move(s));
    }
    return fx;
}

}  // namespace cvxrelu

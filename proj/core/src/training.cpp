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

#include "cvxrelu/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "cvxrelu/errors.hpp"
#include "cvxrelu/random.hpp"

namespace cvxrelu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double kappa_of(double beta) { return beta > 0.0 ? beta : 1.0; }

bool is_equality(double beta, Loss loss) { return loss == Loss::squared && beta == 0.0; }

void check_problem(double beta, Loss loss) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidInput("beta must be finite and >= 0");
    if (loss == Loss::hinge && beta <= 0.0) throw InvalidInput("hinge training needs beta > 0");
}

// unit-norm copy; nullopt for a zero direction
std::optional<Neuron> unit_neuron(const Neuron& nr) {
    double s = nr.u.norm();
    if (!(s > 0.0)) return std::nullopt;
    Neuron out = nr;
    out.u = nr.u / s;
    if (nr.b) out.b = *nr.b / s;
    if (nr.bias_interval) out.bias_interval = std::make_pair(nr.bias_interval->first / s, nr.bias_interval->second / s);
    return out;
}

Mat with_intercept(const Mat& H, bool intercept) {
    if (!intercept) return H;
    Mat B(H.rows(), H.cols() + 1);
    B.leftCols(H.cols()) = H;
    B.col(H.cols()).setOnes();
    return B;
}

Vec column_penalty(Index k, bool intercept) {
    Vec p = Vec::Ones(k + (intercept ? 1 : 0));
    if (intercept) p(k) = 0.0;
    return p;
}

struct Master {
    Vec w;
    double c0 = 0.0;
    Vec v;
    double objective = 0.0;
    bool feasible = true;
};

Master solve_master(const Mat& H, const Vec& y, double beta, Loss loss, bool intercept, const SolverConfig& sc) {
    const Index k = H.cols();
    Mat B = with_intercept(H, intercept);
    Vec pen = column_penalty(k, intercept);
    Master m;
    m.w = Vec::Zero(k);
    if (B.cols() == 0) {
        m.v = y;
        if (is_equality(beta, loss)) {
            m.feasible = y.cwiseAbs().maxCoeff() == 0.0;
            m.objective = m.feasible ? 0.0 : kInf;
        } else {
            m.objective = loss_value(loss, Vec::Zero(y.size()), y);
        }
        return m;
    }
    Vec x;
    if (is_equality(beta, loss)) {
        try {
            L1Result r = basis_pursuit(B, y, sc, pen);
            x = r.w;
            m.v = r.dual;
            m.objective = pen.dot(x.cwiseAbs());
        } catch (const Infeasible&) {
            m.feasible = false;
            x = pseudo_inverse(B) * y;
            m.v = y - B * x;
            m.objective = kInf;
        }
    } else if (loss == Loss::squared) {
        L1Result r = lasso(B, y, beta, sc, pen);
        x = r.w;
        m.v = r.dual;
        m.objective = r.report.objective;
    } else {
        L1Result r = l1_svm(B, y, beta, sc, pen);
        x = r.w;
        m.v = r.dual;
        m.objective = r.report.objective;
    }
    m.w = x.head(k);
    if (intercept) m.c0 = x(k);
    return m;
}

// hinge duals live in the box 0 <= y_i v_i <= 1; bias mode also needs 1^T v = 0
void prepare_dual(Vec& v, const Vec& y, Loss loss, bool bias) {
    const Index n = v.size();
    if (loss == Loss::hinge) {
        for (int pass = 0; pass < 200; ++pass) {
            double moved = 0.0;
            for (Index i = 0; i < n; ++i) {
                double t = std::clamp(y(i) * v(i), 0.0, 1.0);
                moved = std::max(moved, std::abs(t - y(i) * v(i)));
                v(i) = y(i) * t;
            }
            if (!bias) break;
            double mean = v.mean();
            if (std::abs(mean) <= 1e-15 && moved <= 1e-15) break;
            v.array() -= mean;
        }
        for (Index i = 0; i < n; ++i) v(i) = y(i) * std::clamp(y(i) * v(i), 0.0, 1.0);
    } else if (bias) {
        v.array() -= v.mean();
    }
}

// largest feasible rescaling of v; returns the dual objective
double scaled_dual(Vec& v, const Vec& y, double beta, Loss loss, double M) {
    const double kappa = kappa_of(beta);
    double tmax = !std::isfinite(M) ? 0.0 : (M > kappa ? kappa / M : 1.0);
    double t = 0.0, D = 0.0;
    const double vy = v.dot(y);
    if (loss == Loss::squared && beta > 0.0) {
        double vv = v.squaredNorm();
        t = vv > 0.0 ? std::clamp(vy / vv, 0.0, tmax) : 0.0;
        D = t * vy - 0.5 * t * t * vv;
    } else if (loss == Loss::squared) {
        t = vy > 0.0 ? tmax : 0.0;
        D = t * vy;
    } else {
        t = tmax;
        D = t * vy;
    }
    v *= t;
    return D;
}

double known_constraint(const Mat& A, const Vec& v, const std::vector<Neuron>& known) {
    double M = 0.0;
    for (const auto& nr : known) {
        double s = nr.u.norm();
        if (!(s > 0.0)) continue;
        Vec z = relu(Vec((A * nr.u).array() + nr.bias()));
        M = std::max(M, std::abs(v.dot(z)) / s);
    }
    return M;
}

DualCertificate certify(const Mat& A, const Vec& y, Vec v, double beta, Loss loss, bool bias,
                        const std::vector<Neuron>& known, const SearchConfig& search) {
    prepare_dual(v, y, loss, bias);
    DualCertificate c;
    AbsReluMax am = maximize_abs_relu(A, v, bias, search);
    c.exact = am.best.exact;
    c.max_constraint = std::max(am.best.value, known_constraint(A, v, known));
    c.verified_neurons = int(known.size());
    c.dual_objective = scaled_dual(v, y, beta, loss, c.max_constraint);
    c.v = v;
    return c;
}

Network assemble(const std::vector<Neuron>& atoms, const Vec& w, bool bias, bool intercept, double c0) {
    Network net;
    net.has_bias = bias;
    std::vector<double> ws;
    for (size_t j = 0; j < atoms.size(); ++j) {
        if (w(Index(j)) == 0.0) continue;
        net.neurons.push_back(atoms[j]);
        ws.push_back(w(Index(j)));
    }
    net.w = Eigen::Map<Vec>(ws.data(), Index(ws.size()));
    if (intercept) net.intercept = Vec::Constant(1, c0);
    return net;
}

bool duplicate_column(const Mat& H, const Vec& h) {
    const double scale = std::max(h.norm(), 1e-300);
    for (Index j = 0; j < H.cols(); ++j)
        if ((H.col(j) - h).norm() <= 1e-12 * scale) return true;
    return false;
}

void append_column(Mat& H, const Vec& h) {
    H.conservativeResize(Eigen::NoChange, H.cols() + 1);
    H.col(H.cols() - 1) = h;
}

double primal_of(const Network& net, const Dataset& ds, double beta, Loss loss) {
    if (is_equality(beta, loss)) return path_norm(net);
    return regularized_objective(net, ds, beta, loss);
}

// ---------------------------------------------------------------- vector outputs

struct VecMaster {
    Mat W;
    Vec c0;
    Mat V;
    double objective = 0.0;
    bool feasible = true;
};

double group_penalty(const Mat& W, VectorVariant variant) {
    double s = 0.0;
    for (Index j = 0; j < W.rows(); ++j)
        s += variant == VectorVariant::group_l2 ? W.row(j).norm() : W.row(j).cwiseAbs().sum();
    return s;
}

VecMaster solve_vec_master(const Mat& H, const Mat& Y, double beta, VectorVariant variant, bool intercept,
                           const SolverConfig& sc) {
    const Index k = H.cols(), o = Y.cols();
    VecMaster m;
    m.W = Mat::Zero(k, o);
    m.c0 = Vec::Zero(o);
    m.V = Mat::Zero(Y.rows(), o);
    if (variant == VectorVariant::l1_per_class) {
        m.objective = 0.0;
        for (Index c = 0; c < o; ++c) {
            Master s = solve_master(H, Y.col(c), beta, Loss::squared, intercept, sc);
            m.W.col(c) = s.w;
            m.c0(c) = s.c0;
            m.V.col(c) = s.v;
            m.feasible = m.feasible && s.feasible;
            m.objective += s.objective;
        }
        return m;
    }
    Mat B = with_intercept(H, intercept);
    if (B.cols() == 0) {
        m.V = Y;
        m.feasible = beta > 0.0 || Y.cwiseAbs().maxCoeff() == 0.0;
        m.objective = beta > 0.0 ? 0.5 * Y.squaredNorm() : (m.feasible ? 0.0 : kInf);
        return m;
    }
    Vec pen = column_penalty(k, intercept);
    Mat X;
    if (beta == 0.0) {
        try {
            GroupResult r = group_lasso_eq(B, Y, singleton_groups(B.cols()), sc, pen);
            X = r.W;
            m.V = r.dual;
        } catch (const Infeasible&) {
            m.feasible = false;
            X = pseudo_inverse(B) * Y;
            m.V = Y - B * X;
        }
    } else {
        GroupResult r = group_lasso(B, Y, singleton_groups(B.cols()), beta, sc, pen);
        X = r.W;
        m.V = r.dual;
    }
    m.W = X.topRows(k);
    if (intercept) m.c0 = X.row(k).transpose();
    if (!m.feasible)
        m.objective = kInf;
    else if (beta == 0.0)
        m.objective = group_penalty(m.W, variant);
    else
        m.objective = 0.5 * (B * X - Y).squaredNorm() + beta * group_penalty(m.W, variant);
    return m;
}

struct GroupCandidate {
    double value = 0.0;
    Neuron nr;
};

// max over unit u of ||V^T (Au+b)_+||, by alternating g <- V^T z / ||V^T z|| and u <- argmax (Vg)^T (Au+b)_+
std::vector<GroupCandidate> group_oracle(const Mat& A, const Mat& V, bool bias, const SearchConfig& search) {
    const Index o = V.cols();
    std::vector<Vec> starts;
    for (Index c = 0; c < o; ++c) {
        starts.push_back(Vec::Unit(o, c));
        starts.push_back(-Vec::Unit(o, c));
    }
    Rng rng(derive_seed(search.seed, 77));
    for (int r = 0; r < 2 && o > 1; ++r) starts.push_back(random_unit_vector(o, rng));
    std::vector<GroupCandidate> out;
    for (size_t s = 0; s < starts.size(); ++s) {
        Vec g = starts[s];
        GroupCandidate best;
        for (int it = 0; it < 6; ++it) {
            SearchConfig sub = search;
            sub.seed = derive_seed(search.seed, 100 * s + it);
            ReluMax r = maximize_relu(A, V * g, bias, sub);
            if (r.unbounded) {
                best.value = kInf;
                best.nr.u = r.u;
                best.nr.b = bias ? std::optional<double>(r.b) : std::nullopt;
                break;
            }
            Vec z = relu(Vec((A * r.u).array() + (bias ? r.b : 0.0)));
            Vec q = V.transpose() * z;
            double val = q.norm();
            if (val <= best.value * (1.0 + 1e-12)) break;
            best.value = val;
            best.nr.u = r.u;
            best.nr.b = bias ? std::optional<double>(r.b) : std::nullopt;
            g = q / val;
        }
        if (best.value > 0.0) out.push_back(best);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const GroupCandidate& a, const GroupCandidate& b) { return a.value > b.value; });
    return out;
}

struct VecCert {
    Mat V;
    double M = 0.0;
    double D = 0.0;
};

VecCert certify_vec(const Mat& A, const Mat& Y, Mat V, double beta, VectorVariant variant, bool bias,
                    const std::vector<Neuron>& known, const SearchConfig& search) {
    if (bias) V.rowwise() -= V.colwise().mean();
    VecCert c;
    const double kappa = kappa_of(beta);
    if (variant == VectorVariant::l1_per_class) {
        for (Index k = 0; k < V.cols(); ++k) {
            Vec v = V.col(k);
            AbsReluMax am = maximize_abs_relu(A, v, bias, search);
            double Mk = std::max(am.best.value, known_constraint(A, v, known));
            c.M = std::max(c.M, Mk);
            c.D += scaled_dual(v, Y.col(k), beta, Loss::squared, Mk);
            V.col(k) = v;
        }
        c.V = V;
        return c;
    }
    auto cands = group_oracle(A, V, bias, search);
    c.M = cands.empty() ? 0.0 : cands.front().value;
    for (const auto& nr : known) {
        double s = nr.u.norm();
        if (!(s > 0.0)) continue;
        Vec z = relu(Vec((A * nr.u).array() + nr.bias()));
        c.M = std::max(c.M, (V.transpose() * z).norm() / s);
    }
    double tmax = !std::isfinite(c.M) ? 0.0 : (c.M > kappa ? kappa / c.M : 1.0);
    const double vy = (V.array() * Y.array()).sum();
    const double vv = V.squaredNorm();
    double t;
    if (beta > 0.0) {
        t = vv > 0.0 ? std::clamp(vy / vv, 0.0, tmax) : 0.0;
        c.D = t * vy - 0.5 * t * t * vv;
    } else {
        t = vy > 0.0 ? tmax : 0.0;
        c.D = t * vy;
    }
    c.V = t * V;
    return c;
}

Network assemble_vec(const std::vector<Neuron>& atoms, const Mat& W, bool bias, bool intercept, const Vec& c0) {
    Network net;
    net.has_bias = bias;
    std::vector<Index> keep;
    for (Index j = 0; j < W.rows(); ++j)
        if (W.row(j).cwiseAbs().maxCoeff() > 0.0) keep.push_back(j);
    net.W.resize(Index(keep.size()), W.cols());
    for (size_t r = 0; r < keep.size(); ++r) {
        net.neurons.push_back(atoms[size_t(keep[r])]);
        net.W.row(Index(r)) = W.row(keep[r]);
    }
    if (net.W.cols() == 0) net.W.resize(0, 1);
    if (intercept) net.intercept = c0;
    return net;
}

Mat targets_of(const Dataset& ds) {
    if (ds.vector_output()) return ds.Y;
    Mat Y = ds.y;
    return Y;
}

}  // namespace

// ---------------------------------------------------------------- certificates

GapResult duality_gap(const Dataset& ds, const Network& net, double beta, Loss loss, const TrainConfig& cfg) {
    ds.validate();
    net.validate();
    check_problem(beta, loss);
    const bool bias = net.has_bias;
    const bool intercept = bias || net.intercept.size() > 0;
    std::vector<Neuron> atoms;
    for (const auto& nr : net.neurons)
        if (auto u = unit_neuron(nr)) atoms.push_back(*u);
    Mat H = activations(ds.A, atoms);
    GapResult g;
    if (ds.vector_output()) {
        const VectorVariant variant = VectorVariant::group_l2;
        g.primal = vector_objective(net, ds, variant, beta);
        Mat V;
        if (beta > 0.0)
            V = ds.Y - net.predict_all(ds.A);
        else
            V = solve_vec_master(H, ds.Y, beta, variant, intercept, cfg.solver).V;
        VecCert c = certify_vec(ds.A, ds.Y, V, beta, variant, bias, atoms, cfg.search);
        g.cert.V = c.V;
        g.cert.max_constraint = c.M;
        g.cert.dual_objective = c.D;
        g.cert.verified_neurons = int(atoms.size());
        g.gap = g.primal - c.D;
        return g;
    }
    g.primal = primal_of(net, ds, beta, loss);
    Vec v;
    if (loss == Loss::squared && beta > 0.0)
        v = ds.y - net.predict(ds.A);
    else
        v = solve_master(H, ds.y, beta, loss, intercept, cfg.solver).v;
    g.cert = certify(ds.A, ds.y, v, beta, loss, bias, atoms, cfg.search);
    g.gap = g.primal - g.cert.dual_objective;
    return g;
}

double vector_objective(const Network& net, const Dataset& ds, VectorVariant variant, double beta) {
    double pen = 0.0;
    for (Index j = 0; j < net.m(); ++j) {
        double un = net.neurons[size_t(j)].u.norm();
        pen += un * (variant == VectorVariant::group_l2 ? net.W.row(j).norm() : net.W.row(j).cwiseAbs().sum());
    }
    if (beta == 0.0) return pen;
    return 0.5 * (net.predict_all(ds.A) - ds.Y).squaredNorm() + beta * pen;
}

// ---------------------------------------------------------------- cutting plane

TrainResult cutting_plane_train(const Dataset& ds, bool use_bias, double beta, Loss loss, const TrainConfig& cfg) {
    ds.validate();
    if (ds.vector_output()) return vector_cutting_plane(ds, VectorVariant::group_l2, beta, cfg, use_bias);
    check_problem(beta, loss);
    cfg.solver.validate();
    if (cfg.max_rounds < 1) throw InvalidInput("max_rounds must be >= 1");
    if (use_bias && cfg.fit_intercept && !*cfg.fit_intercept)
        throw InvalidInput("training with bias requires the output intercept");
    const bool intercept = cfg.fit_intercept.value_or(use_bias);
    const Mat& A = ds.A;
    const Vec& y = ds.y;
    const Index n = A.rows();
    const double kappa = kappa_of(beta);

    TrainResult res;
    TrainReport& rep = res.report;
    rep.mode = use_bias ? "cutting-plane-bias" : "cutting-plane";
    std::vector<Neuron> atoms;
    Mat H(n, 0);
    Master ms = solve_master(H, y, beta, loss, intercept, cfg.solver);
    rep.master_objectives.push_back(ms.objective);

    for (int round = 1; round <= cfg.max_rounds; ++round) {
        Vec v = ms.v;
        prepare_dual(v, y, loss, use_bias);
        struct Cand {
            double value;
            Neuron nr;
        };
        std::vector<Cand> cands;
        bool exact = true;
        for (int s = 0; s < 2; ++s) {
            SearchConfig sc = cfg.search;
            sc.seed = derive_seed(cfg.search.seed, std::uint64_t(2 * round + s));
            Vec vs = s == 0 ? v : Vec(-v);
            for (const ReluMax& r : relu_candidates(A, vs, use_bias, sc)) {
                exact = exact && r.exact;
                Neuron nr;
                nr.u = r.u;
                if (use_bias) nr.b = r.b;
                nr.provenance = Provenance::cutting_plane;
                cands.push_back({r.value, nr});
            }
        }
        std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.value > b.value; });
        const double M = cands.empty() ? 0.0 : cands.front().value;
        if (ms.feasible) {
            Vec vc = v;
            double D = scaled_dual(vc, y, beta, loss, M);
            rep.history.emplace_back(round - 1, ms.objective - D);
            if (M <= kappa * (1.0 + cfg.viol_tol)) {
                rep.converged = true;
                rep.certificate_exact = exact;
                break;
            }
        } else if (!(M > 1e-12 * std::max(v.norm(), 1e-300))) {
            throw Infeasible("cutting_plane_train: targets are not reachable by the network", v.norm());
        }
        int added = 0;
        for (const auto& c : cands) {
            if (added >= cfg.max_new_per_round) break;
            if (ms.feasible && !(c.value > kappa * (1.0 + cfg.viol_tol))) break;
            if (!(c.value > 0.0) || !std::isfinite(c.value)) continue;
            auto u = unit_neuron(c.nr);
            if (!u) continue;
            Vec h = relu(Vec((A * u->u).array() + u->bias()));
            if (duplicate_column(H, h)) continue;
            append_column(H, h);
            atoms.push_back(*u);
            ++added;
        }
        rep.rounds = round;
        if (added == 0) break;
        ms = solve_master(H, y, beta, loss, intercept, cfg.solver);
        rep.master_objectives.push_back(ms.objective);
    }
    if (!ms.feasible) throw Infeasible("cutting_plane_train: master problem still infeasible", ms.v.norm());

    res.net = assemble(atoms, ms.w, use_bias, intercept, ms.c0);
    rep.neurons_added = int(atoms.size());
    rep.primal_objective = primal_of(res.net, ds, beta, loss);
    DualCertificate c = certify(A, y, ms.v, beta, loss, use_bias, atoms, cfg.search);
    rep.dual_objective = c.dual_objective;
    rep.gap = rep.primal_objective - rep.dual_objective;
    rep.certificate_exact = c.exact;
    return res;
}

TrainResult dictionary_train(const Dataset& ds, const std::vector<Neuron>& neurons, double beta, Loss loss,
                             const TrainConfig& cfg) {
    ds.validate();
    check_problem(beta, loss);
    bool bias = false;
    std::vector<Neuron> atoms;
    for (const auto& nr : neurons) {
        if (nr.u.size() != ds.d()) throw InvalidInput("dictionary neuron has the wrong dimension");
        bias = bias || nr.b.has_value();
        if (auto u = unit_neuron(nr)) atoms.push_back(*u);
    }
    if (atoms.empty()) throw InvalidInput("dictionary_train: empty dictionary");
    const bool intercept = cfg.fit_intercept.value_or(bias);
    Mat H = activations(ds.A, atoms);
    TrainResult res;
    res.report.mode = "dictionary";
    res.report.rounds = 1;
    res.report.neurons_added = int(atoms.size());
    if (ds.vector_output()) {
        VecMaster vm = solve_vec_master(H, ds.Y, beta, VectorVariant::group_l2, intercept, cfg.solver);
        if (!vm.feasible) throw Infeasible("dictionary_train: targets not reachable by the dictionary", 0.0);
        res.net = assemble_vec(atoms, vm.W, bias, intercept, vm.c0);
        res.report.master_objectives.push_back(vm.objective);
    } else {
        Master ms = solve_master(H, ds.y, beta, loss, intercept, cfg.solver);
        if (!ms.feasible)
            throw Infeasible("dictionary_train: targets not reachable by the dictionary", ms.v.norm());
        res.net = assemble(atoms, ms.w, bias, intercept, ms.c0);
        res.report.master_objectives.push_back(ms.objective);
    }
    GapResult g = duality_gap(ds, res.net, beta, loss, cfg);
    res.report.primal_objective = g.primal;
    res.report.dual_objective = g.cert.dual_objective;
    res.report.gap = g.gap;
    res.report.certificate_exact = g.cert.exact;
    res.report.converged = true;
    res.report.history.emplace_back(1, g.gap);
    return res;
}

TrainResult spikefree_train(const Dataset& ds, double beta, Loss loss, const TrainConfig& cfg) {
    ds.validate();
    if (ds.vector_output()) throw InvalidInput("spikefree_train: scalar targets only");
    check_problem(beta, loss);
    TrainResult res;
    SpikeFreeVerdict verdict = spike_free_check(ds.A, cfg.search);
    res.report.spike_free_warning = verdict.status != SpikeFreeStatus::certified_spike_free;
    res.report.mode = "spike-free";
    SpikeFreeProgramResult p = is_equality(beta, loss) ? spikefree_convex_train_eq(ds.A, ds.y, cfg.solver)
                                                       : spikefree_convex_train(ds.A, ds.y, beta, loss, cfg.solver);
    std::vector<double> ws;
    const double zero = 1e-10 * std::max(1.0, std::max(p.w1.norm(), p.w2.norm()));
    for (int s = 0; s < 2; ++s) {
        const Vec& w = s == 0 ? p.w1 : p.w2;
        double nrm = w.norm();
        if (!(nrm > zero)) continue;
        Neuron nr;
        nr.u = w / nrm;
        nr.provenance = Provenance::spike_free;
        res.net.neurons.push_back(nr);
        ws.push_back(s == 0 ? nrm : -nrm);
    }
    res.net.w = Eigen::Map<Vec>(ws.data(), Index(ws.size()));
    res.report.rounds = 1;
    res.report.neurons_added = int(ws.size());
    res.report.converged = p.report.converged;
    res.report.master_objectives.push_back(p.report.objective);
    GapResult g = duality_gap(ds, res.net, beta, loss, cfg);
    res.report.primal_objective = g.primal;
    res.report.dual_objective = g.cert.dual_objective;
    res.report.gap = g.gap;
    res.report.certificate_exact = g.cert.exact;
    res.report.history.emplace_back(1, g.gap);
    return res;
}

// ---------------------------------------------------------------- vector outputs

TrainResult vector_cutting_plane(const Dataset& ds, VectorVariant variant, double beta, const TrainConfig& cfg,
                                 bool use_bias) {
    ds.validate();
    check_problem(beta, Loss::squared);
    if (cfg.max_rounds < 1) throw InvalidInput("max_rounds must be >= 1");
    const bool intercept = cfg.fit_intercept.value_or(use_bias);
    if (use_bias && !intercept) throw InvalidInput("training with bias requires the output intercept");
    const Mat& A = ds.A;
    const Mat Y = targets_of(ds);
    const Index n = A.rows();
    const double kappa = kappa_of(beta);

    TrainResult res;
    TrainReport& rep = res.report;
    rep.mode = variant == VectorVariant::group_l2 ? "vector-group-l2" : "vector-l1";
    std::vector<Neuron> atoms;
    Mat H(n, 0);
    VecMaster ms = solve_vec_master(H, Y, beta, variant, intercept, cfg.solver);
    rep.master_objectives.push_back(ms.objective);

    for (int round = 1; round <= cfg.max_rounds; ++round) {
        Mat V = ms.V;
        if (use_bias) V.rowwise() -= V.colwise().mean();
        struct Cand {
            double value;
            Neuron nr;
        };
        std::vector<Cand> cands;
        SearchConfig sc = cfg.search;
        sc.seed = derive_seed(cfg.search.seed, std::uint64_t(round));
        if (variant == VectorVariant::group_l2) {
            for (auto& gc : group_oracle(A, V, use_bias, sc)) cands.push_back({gc.value, gc.nr});
        } else {
            for (Index k = 0; k < V.cols(); ++k)
                for (int s = 0; s < 2; ++s) {
                    SearchConfig sk = sc;
                    sk.seed = derive_seed(sc.seed, std::uint64_t(2 * k + s));
                    Vec vs = s == 0 ? Vec(V.col(k)) : Vec(-V.col(k));
                    for (const ReluMax& r : relu_candidates(A, vs, use_bias, sk)) {
                        Neuron nr;
                        nr.u = r.u;
                        if (use_bias) nr.b = r.b;
                        cands.push_back({r.value, nr});
                    }
                }
        }
        std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.value > b.value; });
        const double M = cands.empty() ? 0.0 : cands.front().value;
        if (ms.feasible) {
            rep.history.emplace_back(round - 1, ms.objective);
            if (M <= kappa * (1.0 + cfg.viol_tol)) {
                rep.converged = true;
                break;
            }
        } else if (!(M > 1e-12 * std::max(V.norm(), 1e-300))) {
            throw Infeasible("vector_cutting_plane: targets are not reachable by the network", V.norm());
        }
        int added = 0;
        for (const auto& c : cands) {
            if (added >= cfg.max_new_per_round * int(Y.cols())) break;
            if (ms.feasible && !(c.value > kappa * (1.0 + cfg.viol_tol))) break;
            if (!(c.value > 0.0) || !std::isfinite(c.value)) continue;
            auto u = unit_neuron(c.nr);
            if (!u) continue;
            u->provenance = Provenance::cutting_plane;
            Vec h = relu(Vec((A * u->u).array() + u->bias()));
            if (duplicate_column(H, h)) continue;
            append_column(H, h);
            atoms.push_back(*u);
            ++added;
        }
        rep.rounds = round;
        if (added == 0) break;
        ms = solve_vec_master(H, Y, beta, variant, intercept, cfg.solver);
        rep.master_objectives.push_back(ms.objective);
    }
    if (!ms.feasible) throw Infeasible("vector_cutting_plane: master problem still infeasible", ms.V.norm());
    res.net = assemble_vec(atoms, ms.W, use_bias, intercept, ms.c0);
    rep.neurons_added = int(atoms.size());
    Dataset dv = ds;
    if (!dv.vector_output()) dv.Y = Y;
    rep.primal_objective = vector_objective(res.net, dv, variant, beta);
    VecCert c = certify_vec(A, Y, ms.V, beta, variant, use_bias, atoms, cfg.search);
    rep.dual_objective = c.D;
    rep.gap = rep.primal_objective - c.D;
    // replace objective-only history entries with gaps against the final certificate
    for (auto& h : rep.history) h.second -= c.D;
    return res;
}

// ---------------------------------------------------------------- gradient descent baseline

TrainResult reference_gd_train(const Dataset& ds, int m, double beta, double init_std, std::uint64_t seed,
                               const GdConfig& cfg) {
    ds.validate();
    if (m < 1) throw InvalidInput("reference_gd_train: m must be >= 1");
    if (!(init_std > 0.0)) throw InvalidInput("reference_gd_train: init_std must be > 0");
    if (!(beta >= 0.0)) throw InvalidInput("reference_gd_train: beta must be >= 0");
    if (!(cfg.step > 0.0) || cfg.max_iters < 1) throw InvalidInput("reference_gd_train: bad step or iteration count");
    const bool hinge = cfg.loss == Loss::hinge;
    if (hinge && ds.vector_output()) throw InvalidInput("reference_gd_train: hinge needs scalar targets");
    const Mat& A = ds.A;
    const Mat Y = targets_of(ds);
    const Index n = A.rows(), d = A.cols(), o = Y.cols();
    Rng rng(seed);
    Mat U = gaussian_matrix(d, m, rng, init_std);
    Vec b = cfg.use_bias ? gaussian_vector(m, rng, init_std) : Vec(Vec::Zero(m));
    Mat W = gaussian_matrix(m, o, rng, init_std);

    auto objective = [&](const Mat& U_, const Vec& b_, const Mat& W_) {
        Mat Z = (A * U_).rowwise() + b_.transpose();
        Mat F = relu(Z) * W_;
        double l;
        if (hinge)
            l = loss_value(Loss::hinge, F.col(0), Y.col(0));
        else
            l = 0.5 * (F - Y).squaredNorm();
        return l + 0.5 * beta * (W_.squaredNorm() + U_.squaredNorm());
    };

    double eta = cfg.step;
    double obj = objective(U, b, W);
    double checkpoint = obj;
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        Mat Z = (A * U).rowwise() + b.transpose();
        Mat Hh = relu(Z);
        Mat F = Hh * W;
        Mat dF(n, o);
        if (hinge) {
            for (Index i = 0; i < n; ++i) dF(i, 0) = 1.0 - Y(i, 0) * F(i, 0) > 0.0 ? -Y(i, 0) : 0.0;
        } else {
            dF = F - Y;
        }
        Mat gW = Hh.transpose() * dF + beta * W;
        Mat dZ = ((dF * W.transpose()).array() * (Z.array() > 0.0).cast<double>()).matrix();
        Mat gU = A.transpose() * dZ + beta * U;
        Vec gb = cfg.use_bias ? Vec(dZ.colwise().sum().transpose()) : Vec(Vec::Zero(m));
        double gnorm = std::sqrt(gW.squaredNorm() + gU.squaredNorm() + gb.squaredNorm());
        if (!(gnorm > 1e-14)) break;
        bool accepted = false;
        for (int h = 0; h < 60; ++h) {
            Mat U1 = U - eta * gU;
            Vec b1 = b - eta * gb;
            Mat W1 = W - eta * gW;
            double o1 = objective(U1, b1, W1);
            if (std::isfinite(o1) && o1 <= obj) {
                U = std::move(U1);
                b = std::move(b1);
                W = std::move(W1);
                obj = o1;
                accepted = true;
                eta = std::min(1.25 * eta, 1e3 * cfg.step);
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break;
        if ((it + 1) % 1000 == 0) {
            if (checkpoint - obj <= cfg.stall_tol * std::max(1.0, std::abs(obj))) break;
            checkpoint = obj;
        }
    }

    TrainResult res;
    Network& net = res.net;
    net.has_bias = cfg.use_bias;
    for (Index j = 0; j < m; ++j) {
        Neuron nr;
        nr.u = U.col(j);
        if (cfg.use_bias) nr.b = b(j);
        nr.provenance = Provenance::gradient_descent;
        nr.source = int(j);
        net.neurons.push_back(nr);
    }
    if (ds.vector_output())
        net.W = W;
    else
        net.w = W.col(0);
    res.report.mode = "gradient-descent";
    res.report.rounds = it;
    res.report.neurons_added = m;
    res.report.converged = it < cfg.max_iters;
    res.report.master_objectives.push_back(obj);
    if (ds.vector_output())
        res.report.primal_objective = vector_objective(net, ds, VectorVariant::group_l2, beta) +
                                      (beta == 0.0 ? 0.5 * (net.predict_all(A) - ds.Y).squaredNorm() : 0.0);
    else
        res.report.primal_objective = loss_value(cfg.loss, net.predict(A), ds.y) + beta * path_norm(net);
    res.report.dual_objective = std::numeric_limits<double>::quiet_NaN();
    res.report.gap = std::numeric_limits<double>::quiet_NaN();
    return res;
}

// ---------------------------------------------------------------- gap sweep

std::vector<GapSweepPoint> gap_sweep(const Dataset& ds, const std::vector<Neuron>& dictionary, double beta, Loss loss,
                                     int max_m, const TrainConfig& cfg) {
    ds.validate();
    if (ds.vector_output()) throw InvalidInput("gap_sweep: scalar targets only");
    check_problem(beta, loss);
    bool bias = false;
    std::vector<Neuron> atoms;
    for (const auto& nr : dictionary) {
        bias = bias || nr.b.has_value();
        if (auto u = unit_neuron(nr)) atoms.push_back(*u);
    }
    if (atoms.empty()) throw InvalidInput("gap_sweep: empty dictionary");
    const bool intercept = cfg.fit_intercept.value_or(bias);
    Mat H = activations(ds.A, atoms);
    Master full = solve_master(H, ds.y, beta, loss, intercept, cfg.solver);
    if (!full.feasible) throw Infeasible("gap_sweep: full dictionary cannot fit the targets", full.v.norm());
    const double Dstar = certify(ds.A, ds.y, full.v, beta, loss, bias, atoms, cfg.search).dual_objective;

    const Index K = H.cols();
    std::vector<Index> order(static_cast<size_t>(K));
    for (Index j = 0; j < K; ++j) order[size_t(j)] = j;
    const double wmax = full.w.size() ? full.w.cwiseAbs().maxCoeff() : 0.0;
    auto active = [&](Index j) { return std::abs(full.w(j)) > 1e-10 * wmax; };
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        bool aa = active(a), bb = active(b);
        if (aa != bb) return aa;
        if (aa) return std::abs(full.w(a)) > std::abs(full.w(b));
        return false;
    });
    std::vector<GapSweepPoint> out;
    const Index top = std::min<Index>(K, max_m > 0 ? max_m : K);
    for (Index mm = 1; mm <= top; ++mm) {
        Mat Hm(ds.n(), mm);
        for (Index j = 0; j < mm; ++j) Hm.col(j) = H.col(order[size_t(j)]);
        Master r = solve_master(Hm, ds.y, beta, loss, intercept, cfg.solver);
        GapSweepPoint p;
        p.m = int(mm);
        p.primal = r.objective;
        p.gap = r.objective - Dstar;
        out.push_back(p);
    }
    return out;
}

std::string report_to_json(const TrainReport& r, int indent) {
    using nlohmann::json;
    auto num = [](double x) -> json {
        if (std::isfinite(x)) return x;
        return nullptr;
    };
    json j;
    j["mode"] = r.mode;
    j["objective"] = num(r.primal_objective);
    j["dual"] = num(r.dual_objective);
    j["gap"] = num(r.gap);
    j["rounds"] = r.rounds;
    j["neurons_added"] = r.neurons_added;
    j["converged"] = r.converged;
    j["certificate_exact"] = r.certificate_exact;
    j["spike_free_warning"] = r.spike_free_warning;
    json h = json::array();
    for (const auto& [round, gap] : r.history) h.push_back(json::array({round, num(gap)}));
    j["history"] = h;
    json mo = json::array();
    for (double x : r.master_objectives) mo.push_back(num(x));
    j["master_objectives"] = mo;
    return j.dump(indent);
}

}  // namespace cvxrelu

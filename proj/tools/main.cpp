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

// cvxrelu command line front end.
//
// exit codes: 0 ok, 1 malformed input, 2 infeasible / not whitenable / not whitened,
// 3 solver did not converge (artifacts still written), 4 other numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvxrelu/closed_form.hpp"
#include "cvxrelu/convex_rf.hpp"
#include "cvxrelu/errors.hpp"
#include "cvxrelu/geometry.hpp"
#include "cvxrelu/io.hpp"
#include "cvxrelu/kernels.hpp"
#include "cvxrelu/random.hpp"
#include "cvxrelu/training.hpp"
#include "experiment.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cvxrelu;
using cvxrelu::cli::ExperimentSpec;

namespace {

constexpr int kOk = 0, kBadInput = 1, kInfeasible = 2, kNotConverged = 3, kFailure = 4;

std::string out_path(const ExperimentSpec& s, const std::string& name) {
    return (fs::path(s.output_dir) / name).string();
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_json(const ExperimentSpec& s, const std::string& name, const json& j) {
    write_text(out_path(s, name), j.dump(2) + "\n");
}

Loss parse_loss(const std::string& l) {
    if (l == "squared") return Loss::squared;
    if (l == "hinge") return Loss::hinge;
    throw InvalidInput("unknown loss '" + l + "'");
}

Dataset load(const ExperimentSpec& s) {
    if (s.input.empty()) throw InvalidInput("--input is required");
    std::optional<Task> task;
    if (s.loss == "hinge") task = Task::binary_hinge;
    if (s.mode == "vector") task = Task::multiclass;
    return read_dataset(s.input, task);
}

bool use_bias(const ExperimentSpec& s, const Dataset& ds) { return s.bias.value_or(ds.d() == 1); }

SolverConfig solver_cfg(const ExperimentSpec& s) {
    SolverConfig c;
    if (s.tol) c.abs_tol = *s.tol;
    return c;
}

SearchConfig search_cfg(const ExperimentSpec& s) {
    SearchConfig c;
    c.restarts = s.restarts;
    c.seed = s.seed;
    return c;
}

TrainConfig train_cfg(const ExperimentSpec& s) {
    TrainConfig c;
    c.solver = solver_cfg(s);
    c.search = search_cfg(s);
    c.max_rounds = s.max_rounds;
    return c;
}

// 1-D: every breakpoint neuron; rank one: its finite extreme set; else one basis extreme per sample
std::vector<Neuron> default_dictionary(const Dataset& ds, bool bias, const SolverConfig& cfg) {
    if (ds.d() == 1 && bias) return enumerate_extremes_1d(ds.A.col(0));
    if (bias)
        if (auto f = rank_one_factors(ds.A)) return enumerate_extremes_rankone(f->c, f->a);
    std::vector<Neuron> out;
    for (Index i = 0; i < ds.n(); ++i) {
        try {
            out.push_back(extreme_point_basis(ds.A, i, cfg));
        } catch (const DegenerateExtreme&) {
        }
    }
    return out;
}

Table network_table(const std::vector<Neuron>& neurons, Index d) {
    Table t;
    t.header = {"source", "b"};
    for (Index k = 0; k < d; ++k) t.header.push_back("u" + std::to_string(k));
    t.data.resize(Index(neurons.size()), d + 2);
    for (size_t j = 0; j < neurons.size(); ++j) {
        t.data(Index(j), 0) = neurons[j].source;
        t.data(Index(j), 1) = neurons[j].b.value_or(0.0);
        t.data.row(Index(j)).tail(d) = neurons[j].u.transpose();
    }
    return t;
}

int finish_train(const ExperimentSpec& s, const Network& net, json report) {
    report["command"] = "train";
    write_text(out_path(s, "model.json"), network_to_json(net) + "\n");
    write_json(s, "report.json", report);
    if (report.contains("history") && !report["history"].empty()) {
        Table h;
        h.header = {"round", "gap"};
        h.data.resize(Index(report["history"].size()), 2);
        for (size_t k = 0; k < report["history"].size(); ++k) {
            h.data(Index(k), 0) = report["history"][k][0].get<double>();
            const auto& g = report["history"][k][1];
            h.data(Index(k), 1) = g.is_null() ? std::nan("") : g.get<double>();
        }
        write_table(out_path(s, "history.csv"), h);
    }
    return report.value("converged", true) ? kOk : kNotConverged;
}

json train_json(const TrainReport& r) { return json::parse(report_to_json(r)); }

// ---------------------------------------------------------------- commands

int cmd_whiten(const ExperimentSpec& s) {
    Dataset ds = load(s);
    WhitenedDataset w = whiten(ds);
    Dataset out = ds;
    out.A = w.A_white;
    write_dataset(out_path(s, "whitened.csv"), out);
    write_json(s, "whiten.json",
               {{"command", "whiten"}, {"rank", w.rank}, {"residual", whiteness_residual(w.A_white)}});
    return kOk;
}

int train_convex_rf(const ExperimentSpec& s) {
    ImageFile f = read_images(s.input);
    if (f.labels.size() == 0) throw InvalidInput("convex-rf needs a label column");
    ConvexRfConfig cfg;
    cfg.seed = s.seed;
    if (s.beta > 0) cfg.beta = s.beta;
    cfg.solver = solver_cfg(s);
    ConvexRfModel m = convex_rf_train(f.images, f.labels, cfg);
    TrainReport r;
    r.mode = "convex-rf";
    r.primal_objective = m.report.objective;
    r.dual_objective = std::nan("");
    r.gap = std::nan("");
    r.converged = m.report.converged;
    r.neurons_added = int(m.U.cols());
    json j = train_json(r);
    j["train_accuracy"] = accuracy(m.predict(f.images), f.labels);
    j["degenerate_patches"] = m.degenerate_patches;
    if (!s.test_input.empty()) {
        ImageFile t = read_images(s.test_input);
        if (t.labels.size() == 0) throw InvalidInput("test images need a label column");
        j["test_accuracy"] = accuracy(m.predict(t.images), t.labels);
    }
    j["command"] = "train";
    write_text(out_path(s, "model.json"), convex_rf_to_json(m) + "\n");
    write_json(s, "report.json", j);
    return r.converged ? kOk : kNotConverged;
}

int cmd_train(const ExperimentSpec& s) {
    if (s.mode == "convex-rf") return train_convex_rf(s);
    Dataset ds = load(s);
    const Loss loss = parse_loss(s.loss);
    const TrainConfig cfg = train_cfg(s);
    const bool bias = use_bias(s, ds);

    if (s.mode == "cutting-plane") {
        TrainResult r = cutting_plane_train(ds, bias, s.beta, loss, cfg);
        return finish_train(s, r.net, train_json(r.report));
    }
    if (s.mode == "spikefree") {
        TrainResult r = spikefree_train(ds, s.beta, loss, cfg);
        return finish_train(s, r.net, train_json(r.report));
    }
    if (s.mode == "dictionary") {
        TrainResult r = dictionary_train(ds, default_dictionary(ds, bias, cfg.solver), s.beta, loss, cfg);
        return finish_train(s, r.net, train_json(r.report));
    }
    if (s.mode == "vector") {
        VectorVariant v = VectorVariant::group_l2;
        TrainResult r = vector_cutting_plane(ds, v, s.beta, cfg, bias);
        return finish_train(s, r.net, train_json(r.report));
    }
    if (s.mode == "gd") {
        GdConfig g;
        g.use_bias = bias;
        g.loss = loss;
        int m = s.width > 0 ? s.width : int(ds.n());
        TrainResult r = reference_gd_train(ds, m, s.beta, 0.5, s.seed, g);
        return finish_train(s, r.net, train_json(r.report));
    }
    if (s.mode == "closed-form") {
        if (!is_whitened(ds.A)) throw NotWhitened("closed-form training needs whitened data (A A^T = I)", whiteness_residual(ds.A));
        ClosedForm cf;
        if (ds.task == Task::multiclass) cf = multiclass_whitened(ds.A, ds.Y, s.beta);
        else if (loss == Loss::hinge) cf = hinge_whitened(ds.A, ds.y, s.beta);
        else if (s.beta == 0.0) {
            cf.net = l0_closed_form(ds.A, ds.y);
            cf.objective = path_norm(cf.net);
            cf.path.active_neuron_count = int(cf.net.m());
            cf.path.case_label = "equality";
        } else {
            cf = regularized_whitened(ds.A, ds.y, s.beta);
        }
        TrainReport r;
        r.mode = "closed-form";
        r.primal_objective = cf.objective;
        r.dual_objective = std::nan("");
        r.gap = std::nan("");
        r.converged = true;
        r.neurons_added = int(cf.net.m());
        json j = train_json(r);
        j["case_label"] = cf.path.case_label;
        j["active_neurons"] = cf.path.active_neuron_count;
        return finish_train(s, cf.net, j);
    }
    throw InvalidInput("unknown train mode '" + s.mode + "'");
}

int cmd_extremes(const ExperimentSpec& s) {
    Dataset ds = load(s);
    std::vector<Neuron> ext = default_dictionary(ds, use_bias(s, ds), solver_cfg(s));
    write_table(out_path(s, "extremes.csv"), network_table(ext, ds.d()));
    write_json(s, "extremes.json", {{"command", "extremes"}, {"count", ext.size()}, {"bias", use_bias(s, ds)}});
    return kOk;
}

int cmd_spikefree(const ExperimentSpec& s) {
    Dataset ds = load(s);
    SpikeFreeVerdict v = spike_free_check(ds.A, search_cfg(s));
    json j = {{"command", "spikefree"},
              {"status", to_string(v.status)},
              {"method", to_string(v.method)},
              {"max_ratio", num(v.max_ratio)},
              {"range_violation", num(v.range_violation)}};
    if (v.witness_u) j["witness_u"] = std::vector<double>(v.witness_u->data(), v.witness_u->data() + v.witness_u->size());
    write_json(s, "spikefree.json", j);
    return kOk;
}

int cmd_gap_sweep(const ExperimentSpec& s) {
    Dataset ds = load(s);
    const Loss loss = parse_loss(s.loss);
    std::vector<Neuron> dict = default_dictionary(ds, use_bias(s, ds), solver_cfg(s));
    int max_m = s.max_m > 0 ? s.max_m : int(ds.n()) + 2;
    max_m = std::min<int>(max_m, int(dict.size()));
    std::vector<GapSweepPoint> sw = gap_sweep(ds, dict, s.beta, loss, max_m, train_cfg(s));
    Table t;
    t.header = {"m", "primal", "gap"};
    t.data.resize(Index(sw.size()), 3);
    for (size_t k = 0; k < sw.size(); ++k) t.data.row(Index(k)) << sw[k].m, sw[k].primal, sw[k].gap;
    write_table(out_path(s, "gap_sweep.csv"), t);
    write_json(s, "gap_sweep.json",
               {{"command", "gap-sweep"}, {"dictionary_size", dict.size()}, {"points", sw.size()}});
    return kOk;
}

int cmd_kernel_compare(const ExperimentSpec& s) {
    Dataset ds = load(s);
    if (ds.d() != 1) throw InvalidInput("kernel-compare needs 1-D inputs (single f0 column)");
    Vec a = ds.A.col(0);
    KernelConfig kc;
    kc.solver = solver_cfg(s);
    KernelFit ad = fit(KernelKind::adaptive_relu_l1, a, ds.y, kc);
    KernelFit nt = fit(KernelKind::ntk_l2, a, ds.y, kc);
    Vec grid = diagnostic_grid(a);
    Table t;
    t.header = {"x", "adaptive", "ntk", "linear"};
    t.data.resize(grid.size(), 4);
    for (Index k = 0; k < grid.size(); ++k)
        t.data.row(k) << grid(k), ad.predict(grid(k)), nt.predict(grid(k)), linear_interpolant(a, ds.y, grid(k));
    write_table(out_path(s, "kernel_compare.csv"), t);
    auto fa = [&](double x) { return ad.predict(x); };
    auto fn = [&](double x) { return nt.predict(x); };
    write_json(s, "kernel_compare.json",
               {{"command", "kernel-compare"},
                {"adaptive_residual", (ad.predict(a) - ds.y).cwiseAbs().maxCoeff()},
                {"ntk_residual", (nt.predict(a) - ds.y).cwiseAbs().maxCoeff()},
                {"adaptive_second_difference", max_interior_second_difference(fa, a)},
                {"ntk_second_difference", max_interior_second_difference(fn, a)},
                {"adaptive_objective", ad.objective},
                {"ntk_objective", nt.objective}});
    return kOk;
}

int cmd_sample_geometry(const ExperimentSpec& s) {
    Dataset ds = load(s);
    const Index n = ds.n();
    auto points_table = [&](const std::vector<Vec>& pts) {
        Table t;
        for (Index i = 0; i < n; ++i) t.header.push_back("q" + std::to_string(i));
        t.data.resize(Index(pts.size()), n);
        for (size_t k = 0; k < pts.size(); ++k) t.data.row(Index(k)) = pts[k].transpose();
        return t;
    };
    write_table(out_path(s, "rectified.csv"), points_table(sample_rectified_ellipsoid(ds.A, s.count, s.seed)));
    PolarSample pol = sample_polar(ds.A, s.count, derive_seed(s.seed, 1), search_cfg(s));
    write_table(out_path(s, "polar.csv"), points_table(pol.points));
    Table h;
    h.header = {"index", "hull_distance"};
    h.data.resize(n, 2);
    int vertices = 0;
    for (Index i = 0; i < n; ++i) {
        double dist = hull_distance(ds.A, i, solver_cfg(s));
        h.data.row(i) << double(i), dist;
        vertices += dist > 1e-8;
    }
    write_table(out_path(s, "hull.csv"), h);
    write_json(s, "geometry.json",
               {{"command", "sample-geometry"}, {"polar_skipped", pol.skipped}, {"vertices", vertices}, {"n", n}});
    return kOk;
}

// ---------------------------------------------------------------- generators

int cmd_gen(const ExperimentSpec& s) {
    if (s.n < 1 || s.d < 1) throw InvalidInput("--n and --d must be >= 1");
    Rng rng(s.seed);
    const Index n = s.n, d = s.d;
    const std::string path = out_path(s, s.mode == "images" ? "images.csv" : "data.csv");
    if (s.mode == "regression-1d") {
        Vec a(n);
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        for (Index i = 0; i < n; ++i) a(i) = U(rng);
        std::sort(a.data(), a.data() + n);
        write_dataset(path, make_regression(Mat(a), gaussian_vector(n, rng)));
    } else if (s.mode == "hinge-mixture") {
        // component means -2..2 with std 0.25; label +1 for means {-1, 0, 2}
        const double mu[5] = {-2, -1, 0, 1, 2};
        const double lab[5] = {-1, 1, 1, -1, 1};
        std::uniform_int_distribution<int> pick(0, 4);
        std::normal_distribution<double> noise(0.0, 0.25);
        Vec a(n), y(n);
        for (Index i = 0; i < n; ++i) {
            int c = pick(rng);
            a(i) = mu[c] + noise(rng);
            y(i) = lab[c];
        }
        write_dataset(path, make_binary(Mat(a), y));
    } else if (s.mode == "gaussian") {
        Mat A = gaussian_matrix(n, d, rng);
        write_dataset(path, make_regression(A, gaussian_vector(n, rng)));
    } else if (s.mode == "rank-one") {
        Vec c = gaussian_vector(n, rng), a = gaussian_vector(d, rng);
        write_dataset(path, make_regression(c * a.transpose(), gaussian_vector(n, rng)));
    } else if (s.mode == "whitened") {
        if (n > d) throw InvalidInput("whitened data needs n <= d");
        Mat G = gaussian_matrix(d, n, rng);
        Mat Q = G.householderQr().householderQ() * Mat::Identity(d, n);
        write_dataset(path, make_regression(Q.transpose(), gaussian_vector(n, rng)));
    } else if (s.mode == "multiclass") {
        if (s.classes < 2) throw InvalidInput("--classes must be >= 2");
        Mat means = gaussian_matrix(s.classes, d, rng, 2.0);
        Mat A(n, d), Y = Mat::Zero(n, s.classes);
        for (Index i = 0; i < n; ++i) {
            Index c = i % s.classes;
            A.row(i) = means.row(c) + gaussian_vector(d, rng).transpose();
            Y(i, c) = 1.0;
        }
        write_dataset(path, make_multiclass(A, Y));
    } else if (s.mode == "images") {
        LabeledImages li = synthetic_two_class_images(s.n, 8, 8, s.seed);
        write_images(path, li.images, li.labels);
    } else {
        throw InvalidInput("unknown generator '" + s.mode + "'");
    }
    return kOk;
}

int dispatch(const ExperimentSpec& s) {
    if (s.command == "whiten") return cmd_whiten(s);
    if (s.command == "train") return cmd_train(s);
    if (s.command == "extremes") return cmd_extremes(s);
    if (s.command == "spikefree") return cmd_spikefree(s);
    if (s.command == "gap-sweep") return cmd_gap_sweep(s);
    if (s.command == "kernel-compare") return cmd_kernel_compare(s);
    if (s.command == "sample-geometry") return cmd_sample_geometry(s);
    if (s.command == "gen") return cmd_gen(s);
    throw InvalidInput("unknown command '" + s.command + "'");
}

void common_flags(CLI::App* c, ExperimentSpec& s) {
    c->add_option("--input", s.input, "dataset CSV (f0..f{d-1}, y or y0..)");
    c->add_option("--output-dir", s.output_dir, "directory for artifacts")->capture_default_str();
    c->add_option("--beta", s.beta, "regularization weight (0 = equality mode)")->capture_default_str();
    c->add_option("--seed", s.seed, "random seed")->capture_default_str();
    c->add_flag_callback("--bias", [&s] { s.bias = true; }, "neurons carry a bias");
    c->add_flag_callback("--no-bias", [&s] { s.bias = false; }, "neurons without bias");
    c->add_option("--loss", s.loss, "squared | hinge")->check(CLI::IsMember({"squared", "hinge"}))->capture_default_str();
    c->add_option("--tol", s.tol, "absolute solver tolerance");
    c->add_option("--restarts", s.restarts, "random restarts of nonconvex searches")->capture_default_str();
    c->add_option("--max-rounds", s.max_rounds, "cutting-plane round limit")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cvxrelu: convex training and analysis of two-layer ReLU networks"};
    app.require_subcommand(1);
    ExperimentSpec s;

    auto* whiten_c = app.add_subcommand("whiten", "whiten a dataset (A A^T = I)");
    common_flags(whiten_c, s);

    auto* train_c = app.add_subcommand("train", "train a network");
    common_flags(train_c, s);
    train_c->add_option("--mode", s.mode, "training mode")
        ->required()
        ->check(CLI::IsMember({"cutting-plane", "closed-form", "spikefree", "dictionary", "vector", "gd", "convex-rf"}));
    train_c->add_option("--width", s.width, "gd hidden units (default n)");
    train_c->add_option("--test-input", s.test_input, "held-out image CSV (convex-rf)");

    auto* ext_c = app.add_subcommand("extremes", "extreme-point neurons of the data");
    common_flags(ext_c, s);
    auto* sf_c = app.add_subcommand("spikefree", "spike-free certification of the data matrix");
    common_flags(sf_c, s);
    auto* gap_c = app.add_subcommand("gap-sweep", "duality gap versus dictionary size");
    common_flags(gap_c, s);
    gap_c->add_option("--max-m", s.max_m, "largest dictionary size (default n + 2)");
    auto* ker_c = app.add_subcommand("kernel-compare", "adaptive ReLU fit versus NTK fit on 1-D data");
    common_flags(ker_c, s);
    auto* geo_c = app.add_subcommand("sample-geometry", "sample rectified ellipsoid, polar set and hull distances");
    common_flags(geo_c, s);
    geo_c->add_option("--count", s.count, "samples per set")->capture_default_str();

    auto* gen_c = app.add_subcommand("gen", "generate a synthetic dataset");
    common_flags(gen_c, s);
    s.mode = "";
    gen_c->add_option("--kind", s.mode, "regression-1d | hinge-mixture | gaussian | rank-one | whitened | multiclass | images")
        ->check(CLI::IsMember({"regression-1d", "hinge-mixture", "gaussian", "rank-one", "whitened", "multiclass", "images"}));
    gen_c->add_flag_callback("--hinge-mixture", [&s] { s.mode = "hinge-mixture"; }, "shorthand for --kind hinge-mixture");
    gen_c->add_option("--n", s.n, "samples")->capture_default_str();
    gen_c->add_option("--d", s.d, "features")->capture_default_str();
    gen_c->add_option("--classes", s.classes, "classes (multiclass)")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    s.command = app.get_subcommands().front()->get_name();
    if (s.command == "gen" && s.mode.empty()) s.mode = "regression-1d";

    try {
        fs::create_directories(s.output_dir);
        write_text(out_path(s, "experiment.json"), cli::spec_to_json(s) + "\n");
        return dispatch(s);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const Infeasible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasible;
    } catch (const NotWhitenable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasible;
    } catch (const NotWhitened& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
}

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

#include "cvxrelu/convex_rf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "json.hpp"

#include "cvxrelu/errors.hpp"
#include "cvxrelu/geometry.hpp"
#include "cvxrelu/parallel.hpp"
#include "cvxrelu/random.hpp"

namespace cvxrelu {

void ImageSet::validate() const {
    if (h <= 0 || w <= 0) throw InvalidInput("image shape must be positive");
    if (pixels.cols() != h * w) throw InvalidInput("pixel rows must have h*w entries");
    require_finite(pixels, "pixels");
}

void ConvexRfConfig::validate() const {
    if (patch < 1 || stride < 1 || pool < 1 || count < 1) throw InvalidInput("convex-rf: patch, stride, pool, count must be >= 1");
    if (!(beta >= 0.0) || !(norm_eps > 0.0) || !(zca_eps > 0.0)) throw InvalidInput("convex-rf: bad regularization constants");
    if (competitors < 0) throw InvalidInput("convex-rf: competitors must be >= 0");
    solver.validate();
}

Mat normalize_patches(const Mat& P, double eps) {
    if (!(eps > 0.0)) throw InvalidInput("normalize_patches: eps must be > 0");
    Mat out = P;
    const double p = double(P.cols());
    for (Index i = 0; i < P.rows(); ++i) {
        double m = P.row(i).mean();
        out.row(i).array() -= m;
        double var = out.row(i).squaredNorm() / p;
        out.row(i) /= std::sqrt(std::max(var, eps));
    }
    return out;
}

std::vector<Index> patch_positions(Index size, int patch, int stride) {
    std::vector<Index> pos;
    for (Index r = 0; r + patch <= size; r += stride) pos.push_back(r);
    return pos;
}

namespace {

Vec patch_at(const ImageSet& im, Index img, Index r, Index c, int patch) {
    Vec out(Index(patch) * patch);
    for (int i = 0; i < patch; ++i)
        for (int j = 0; j < patch; ++j) out(Index(i) * patch + j) = im.pixels(img, (r + i) * im.w + (c + j));
    return out;
}

}  // namespace

PatchSet extract_patches(const ImageSet& images, int patch, int stride, int count, std::uint64_t seed,
                         double eps_norm) {
    images.validate();
    if (patch < 1 || stride < 1 || count < 1) throw InvalidInput("extract_patches: patch, stride, count must be >= 1");
    if (patch > std::min(images.h, images.w)) throw InvalidInput("extract_patches: patch larger than the image");
    auto rows = patch_positions(images.h, patch, stride);
    auto cols = patch_positions(images.w, patch, stride);
    const std::size_t per = rows.size() * cols.size();
    const std::size_t total = per * std::size_t(images.count());
    if (total == 0) throw InvalidInput("extract_patches: no images");
    Rng rng(seed);
    std::vector<std::size_t> pick;
    if (std::size_t(count) <= total) {
        std::vector<std::size_t> all(total);
        std::iota(all.begin(), all.end(), std::size_t(0));
        // partial Fisher-Yates, explicit so the draw is identical across standard libraries
        for (std::size_t k = 0; k < std::size_t(count); ++k) {
            std::size_t j = k + std::size_t(rng() % (total - k));
            std::swap(all[k], all[j]);
        }
        pick.assign(all.begin(), all.begin() + count);
    } else {
        for (int k = 0; k < count; ++k) pick.push_back(std::size_t(rng() % total));
    }
    Mat P(count, Index(patch) * patch);
    for (int k = 0; k < count; ++k) {
        std::size_t idx = pick[std::size_t(k)];
        Index img = Index(idx / per);
        std::size_t rem = idx % per;
        P.row(k) = patch_at(images, img, rows[rem / cols.size()], cols[rem % cols.size()], patch).transpose();
    }
    PatchSet ps;
    ps.epsilon_norm = eps_norm;
    ps.P = normalize_patches(P, eps_norm);
    return ps;
}

PatchSet zca_whiten_patches(const PatchSet& ps, double eps) {
    if (!(eps > 0.0)) throw InvalidInput("zca_whiten_patches: eps must be > 0");
    if (ps.P.rows() == 0) throw InvalidInput("zca_whiten_patches: empty patch set");
    Mat C = ps.P.transpose() * ps.P / double(ps.P.rows());
    Eigen::SelfAdjointEigenSolver<Mat> es(C);
    Vec D = es.eigenvalues().cwiseMax(0.0);
    Vec s = (D.array() + eps).rsqrt();
    Mat Z = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
    Z = 0.5 * (Z + Z.transpose());
    PatchSet out = ps;
    out.P = ps.P * Z;
    out.whitened = true;
    out.zca_map = Z;
    return out;
}

FilterReport filters_from_patches(const PatchSet& ps, int competitors, std::uint64_t seed, const SolverConfig& cfg) {
    const Index N = ps.P.rows();
    if (N < 2) throw InvalidInput("filters_from_patches: need >= 2 patches");
    if (competitors < 0) throw InvalidInput("filters_from_patches: competitors must be >= 0");
    std::vector<std::optional<Neuron>> slot(static_cast<std::size_t>(N));
    parallel_for(std::size_t(N), [&](std::size_t i) {
        Mat sub;
        Index self = Index(i);
        if (competitors == 0 || competitors >= N - 1) {
            sub = ps.P;
        } else {
            Rng rng(derive_seed(seed, i));
            std::vector<Index> others;
            for (Index j = 0; j < N; ++j)
                if (j != Index(i)) others.push_back(j);
            for (int k = 0; k < competitors; ++k) {
                std::size_t j = std::size_t(k) + std::size_t(rng() % (others.size() - std::size_t(k)));
                std::swap(others[std::size_t(k)], others[j]);
            }
            sub.resize(competitors + 1, ps.P.cols());
            sub.row(0) = ps.P.row(Index(i));
            for (int k = 0; k < competitors; ++k) sub.row(k + 1) = ps.P.row(others[std::size_t(k)]);
            self = 0;
        }
        try {
            Neuron nr = extreme_point_basis(sub, self, cfg);
            nr.provenance = Provenance::patch_filter;
            nr.source = int(i);
            slot[i] = nr;
        } catch (const DegenerateExtreme&) {
        }
    });
    FilterReport rep;
    for (auto& s : slot) {
        if (s)
            rep.filters.push_back(*s);
        else
            ++rep.degenerate;
    }
    return rep;
}

namespace {

// patch responses for one image: positions x patch_dim, normalized and mapped
Mat image_patches(const ConvexRfModel& m, const ImageSet& im, Index img, std::size_t& nr, std::size_t& nc) {
    auto rows = patch_positions(m.h, m.cfg.patch, m.cfg.stride);
    auto cols = patch_positions(m.w, m.cfg.patch, m.cfg.stride);
    nr = rows.size();
    nc = cols.size();
    Mat P(Index(nr * nc), Index(m.cfg.patch) * m.cfg.patch);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c)
            P.row(Index(r * nc + c)) = patch_at(im, img, rows[r], cols[c], m.cfg.patch).transpose();
    return normalize_patches(P, m.cfg.norm_eps) * m.zca_map;
}

void check_pool(Index h, Index w, const ConvexRfConfig& cfg) {
    auto nr = patch_positions(h, cfg.patch, cfg.stride).size();
    auto nc = patch_positions(w, cfg.patch, cfg.stride).size();
    if (nr == 0 || nc == 0) throw InvalidInput("convex-rf: patch larger than the image");
    if (nr % std::size_t(cfg.pool) != 0 || nc % std::size_t(cfg.pool) != 0)
        throw InvalidInput("convex-rf: pooling grid must divide the patch-position grid (" + std::to_string(nr) + "x" +
                           std::to_string(nc) + " positions, pool " + std::to_string(cfg.pool) + ")");
}

}  // namespace

Mat convex_rf_features(const ConvexRfModel& m, const ImageSet& images) {
    images.validate();
    if (images.h != m.h || images.w != m.w) throw InvalidInput("convex-rf: image shape differs from the model");
    check_pool(m.h, m.w, m.cfg);
    const Index k = m.U.cols();
    const int pool = m.cfg.pool;
    Mat B(images.count(), k * pool * pool);
    parallel_for(std::size_t(images.count()), [&](std::size_t i) {
        std::size_t nr = 0, nc = 0;
        Mat Z = relu(Mat(image_patches(m, images, Index(i), nr, nc) * m.U));
        const std::size_t cr = nr / std::size_t(pool), cc = nc / std::size_t(pool);
        for (int gi = 0; gi < pool; ++gi)
            for (int gj = 0; gj < pool; ++gj) {
                Vec best = Vec::Zero(k);
                for (std::size_t r = gi * cr; r < (gi + 1) * cr; ++r)
                    for (std::size_t c = gj * cc; c < (gj + 1) * cc; ++c)
                        best = best.cwiseMax(Z.row(Index(r * nc + c)).transpose());
                for (Index f = 0; f < k; ++f) B(Index(i), f * pool * pool + gi * pool + gj) = best(f);
            }
    });
    return B;
}

Vec ConvexRfModel::decision(const ImageSet& images) const {
    Mat B = convex_rf_features(*this, images);
    return (B * weights).array() + intercept;
}

Vec ConvexRfModel::predict(const ImageSet& images) const {
    Vec d = decision(images);
    return d.unaryExpr([](double x) { return x >= 0.0 ? 1.0 : -1.0; });
}

ConvexRfModel convex_rf_train(const ImageSet& images, const Vec& labels, const ConvexRfConfig& cfg) {
    cfg.validate();
    images.validate();
    if (labels.size() != images.count()) throw InvalidInput("convex-rf: one label per image");
    for (Index i = 0; i < labels.size(); ++i)
        if (labels(i) != 1.0 && labels(i) != -1.0) throw InvalidInput("convex-rf: labels must be +-1");
    check_pool(images.h, images.w, cfg);
    ConvexRfModel m;
    m.cfg = cfg;
    m.h = images.h;
    m.w = images.w;
    PatchSet ps = extract_patches(images, cfg.patch, cfg.stride, cfg.count, cfg.seed, cfg.norm_eps);
    const Index p = ps.P.cols();
    m.zca_map = Mat::Identity(p, p);
    if (cfg.zca) {
        ps = zca_whiten_patches(ps, cfg.zca_eps);
        m.zca_map = *ps.zca_map;
    }
    FilterReport fr = filters_from_patches(ps, cfg.competitors, derive_seed(cfg.seed, 1), cfg.solver);
    if (fr.filters.empty()) throw DegenerateExtreme("convex-rf: every patch was degenerate");
    m.degenerate_patches = fr.degenerate;
    m.U.resize(p, Index(fr.filters.size()));
    for (std::size_t j = 0; j < fr.filters.size(); ++j) m.U.col(Index(j)) = fr.filters[j].u;
    Mat B = convex_rf_features(m, images);
    Mat Bi(B.rows(), B.cols() + 1);
    Bi.leftCols(B.cols()) = B;
    Bi.col(B.cols()).setOnes();
    Vec pen = Vec::Ones(Bi.cols());
    pen(B.cols()) = 0.0;
    L1Result r = lasso(Bi, labels, cfg.beta, cfg.solver, pen);
    m.weights = r.w.head(B.cols());
    m.intercept = r.w(B.cols());
    m.report = r.report;
    return m;
}

double accuracy(const Vec& predicted, const Vec& labels) {
    if (predicted.size() != labels.size() || labels.size() == 0) throw InvalidInput("accuracy: size mismatch");
    Index hit = 0;
    for (Index i = 0; i < labels.size(); ++i) hit += predicted(i) == labels(i);
    return double(hit) / double(labels.size());
}

namespace {

nlohmann::json mat_json(const Mat& M) {
    nlohmann::json j = nlohmann::json::array();
    for (Index i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
        j.push_back(row);
    }
    return j;
}

Mat json_mat(const nlohmann::json& j, Index cols_if_empty) {
    const Index r = Index(j.size());
    const Index c = r ? Index(j[0].size()) : cols_if_empty;
    Mat M(r, c);
    for (Index i = 0; i < r; ++i) {
        if (Index(j[std::size_t(i)].size()) != c) throw ParseError("ragged matrix in model JSON", 0);
        for (Index k = 0; k < c; ++k) M(i, k) = j[std::size_t(i)][std::size_t(k)].get<double>();
    }
    return M;
}

}  // namespace

std::string convex_rf_to_json(const ConvexRfModel& m, int indent) {
    nlohmann::json j;
    j["kind"] = "convex-rf";
    j["h"] = m.h;
    j["w"] = m.w;
    j["config"] = {{"patch", m.cfg.patch},       {"stride", m.cfg.stride},   {"pool", m.cfg.pool},
                   {"count", m.cfg.count},       {"beta", m.cfg.beta},       {"norm_eps", m.cfg.norm_eps},
                   {"zca_eps", m.cfg.zca_eps},   {"zca", m.cfg.zca},         {"competitors", m.cfg.competitors},
                   {"seed", m.cfg.seed}};
    j["zca_map"] = mat_json(m.zca_map);
    j["filters"] = mat_json(m.U.transpose());
    j["weights"] = std::vector<double>(m.weights.data(), m.weights.data() + m.weights.size());
    j["intercept"] = m.intercept;
    j["degenerate_patches"] = m.degenerate_patches;
    return j.dump(indent);
}

ConvexRfModel convex_rf_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("convex-rf model JSON: ") + e.what(), 0);
    }
    try {
        ConvexRfModel m;
        if (j.at("kind").get<std::string>() != "convex-rf") throw ParseError("not a convex-rf model", 0);
        m.h = j.at("h").get<Index>();
        m.w = j.at("w").get<Index>();
        const auto& c = j.at("config");
        m.cfg.patch = c.at("patch").get<int>();
        m.cfg.stride = c.at("stride").get<int>();
        m.cfg.pool = c.at("pool").get<int>();
        m.cfg.count = c.at("count").get<int>();
        m.cfg.beta = c.at("beta").get<double>();
        m.cfg.norm_eps = c.at("norm_eps").get<double>();
        m.cfg.zca_eps = c.at("zca_eps").get<double>();
        m.cfg.zca = c.at("zca").get<bool>();
        m.cfg.competitors = c.at("competitors").get<int>();
        m.cfg.seed = c.at("seed").get<std::uint64_t>();
        const Index p = Index(m.cfg.patch) * m.cfg.patch;
        m.zca_map = json_mat(j.at("zca_map"), p);
        m.U = json_mat(j.at("filters"), p).transpose();
        auto w = j.at("weights").get<std::vector<double>>();
        m.weights = Eigen::Map<Vec>(w.data(), Index(w.size()));
        m.intercept = j.at("intercept").get<double>();
        m.degenerate_patches = j.value("degenerate_patches", 0);
        if (m.zca_map.rows() != p || m.zca_map.cols() != p || m.U.rows() != p ||
            m.weights.size() != m.U.cols() * m.cfg.pool * m.cfg.pool)
            throw ParseError("convex-rf model JSON: inconsistent shapes", 0);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("convex-rf model JSON: ") + e.what(), 0);
    }
}

LabeledImages synthetic_two_class_images(int n, Index h, Index w, std::uint64_t seed, double noise) {
    if (n < 1 || h < 2 || w < 1) throw InvalidInput("synthetic images: need n >= 1, h >= 2, w >= 1");
    LabeledImages out;
    out.images.h = h;
    out.images.w = w;
    out.images.pixels.resize(n, h * w);
    out.labels.resize(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        const double label = i % 2 == 0 ? 1.0 : -1.0;
        out.labels(i) = label;
        Vec px = gaussian_vector(h * w, rng, noise);
        for (Index r = 0; r < h; ++r) {
            const bool top = r < h / 2;
            const double base = (top == (label > 0)) ? 1.0 : 0.0;
            for (Index c = 0; c < w; ++c) px(r * w + c) += base;
        }
        out.images.pixels.row(i) = px.transpose();
    }
    return out;
}

}  // namespace cvxrelu

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

#include "cvxrelu/network.hpp"

#include <cmath>

#include "cvxrelu/errors.hpp"
#include "json.hpp"

namespace cvxrelu {

using nlohmann::json;

namespace {

const std::pair<Provenance, const char*> kProvNames[] = {
    {Provenance::unspecified, "unspecified"},
    {Provenance::basis_direction, "basis-direction"},
    {Provenance::general_direction, "general-direction"},
    {Provenance::one_dim, "one-dim"},
    {Provenance::rank_one, "rank-one"},
    {Provenance::closed_form, "closed-form"},
    {Provenance::cutting_plane, "cutting-plane"},
    {Provenance::dictionary, "dictionary"},
    {Provenance::spike_free, "spike-free"},
    {Provenance::gradient_descent, "gradient-descent"},
    {Provenance::patch_filter, "patch-filter"},
};

}  // namespace

const char* to_string(Provenance p) {
    for (const auto& [k, v] : kProvNames)
        if (k == p) return v;
    return "unspecified";
}

Provenance provenance_from_string(const std::string& s) {
    for (const auto& [k, v] : kProvNames)
        if (s == v) return k;
    throw InvalidInput("unknown provenance '" + s + "'");
}

void Network::validate() const {
    const Index mm = m();
    if (vector_output()) {
        if (W.rows() != mm) throw InvalidInput("W row count differs from neuron count");
    } else if (w.size() != mm) {
        throw InvalidInput("w length differs from neuron count");
    }
    if (intercept.size() != 0 && intercept.size() != outputs())
        throw InvalidInput("intercept length differs from output count");
    Index d = -1;
    for (const auto& nr : neurons) {
        if (d < 0) d = nr.u.size();
        if (nr.u.size() != d) throw InvalidInput("neurons have different input dimension");
        if (has_bias != nr.b.has_value()) throw InvalidInput("bias presence inconsistent with has_bias");
    }
}

Mat activations(const Mat& A, const std::vector<Neuron>& neurons) {
    Mat H(A.rows(), Index(neurons.size()));
    for (size_t j = 0; j < neurons.size(); ++j) {
        if (neurons[j].u.size() != A.cols()) throw InvalidInput("neuron dimension differs from data");
        H.col(j) = ((A * neurons[j].u).array() + neurons[j].bias()).cwiseMax(0.0).matrix();
    }
    return H;
}

Mat Network::predict_all(const Mat& A) const {
    Mat H = activations(A, neurons);
    Mat F = vector_output() ? Mat(H * W) : Mat(H * w);
    if (intercept.size() > 0) F.rowwise() += intercept.transpose();
    return F;
}

Vec Network::predict(const Mat& A) const {
    if (vector_output()) throw InvalidInput("predict: vector-output network, use predict_all");
    return predict_all(A).col(0);
}

Vec Network::predict_1d(const Vec& x) const {
    Mat A = x;
    return predict(A);
}

double path_norm(const Network& net) {
    double s = 0.0;
    for (Index j = 0; j < net.m(); ++j) {
        double ow = net.vector_output() ? net.W.row(j).norm() : std::abs(net.w(j));
        s += ow * net.neurons[j].u.norm();
    }
    return s;
}

double weight_decay(const Network& net) {
    double s = net.vector_output() ? net.W.squaredNorm() : net.w.squaredNorm();
    for (const auto& nr : net.neurons) s += nr.u.squaredNorm();
    return 0.5 * s;
}

Network rescale(const Network& net, const Vec& alpha) {
    if (alpha.size() != net.m()) throw InvalidInput("rescale: alpha length differs from m");
    Network out = net;
    for (Index j = 0; j < net.m(); ++j) {
        double a = alpha(j);
        if (!(a > 0)) throw InvalidInput("rescale: factors must be positive");
        out.neurons[j].u *= a;
        if (out.neurons[j].b) *out.neurons[j].b *= a;
        if (out.neurons[j].bias_interval) {
            out.neurons[j].bias_interval->first *= a;
            out.neurons[j].bias_interval->second *= a;
        }
        if (net.vector_output()) out.W.row(j) /= a;
        else out.w(j) /= a;
    }
    return out;
}

Network balance(const Network& net) {
    Vec alpha = Vec::Ones(net.m());
    for (Index j = 0; j < net.m(); ++j) {
        double ow = net.vector_output() ? net.W.row(j).norm() : std::abs(net.w(j));
        double un = net.neurons[j].u.norm();
        if (ow > 0 && un > 0) alpha(j) = std::sqrt(ow / un);
    }
    Network out = rescale(net, alpha);
    // dead units: the infimum is reached by shrinking them away
    for (Index j = 0; j < out.m(); ++j) {
        double ow = out.vector_output() ? out.W.row(j).norm() : std::abs(out.w(j));
        if (ow == 0.0) {
            out.neurons[j].u.setZero();
            if (out.neurons[j].b) *out.neurons[j].b = 0.0;
            out.neurons[j].bias_interval.reset();
        }
    }
    return out;
}

Network normalize_neurons(const Network& net) {
    Vec alpha = Vec::Ones(net.m());
    for (Index j = 0; j < net.m(); ++j) {
        double un = net.neurons[j].u.norm();
        if (un > 0) alpha(j) = 1.0 / un;
    }
    return rescale(net, alpha);
}

double regularized_objective(const Network& net, const Dataset& ds, double beta, Loss loss) {
    if (ds.vector_output()) {
        Mat F = net.predict_all(ds.A);
        return 0.5 * (F - ds.Y).squaredNorm() + beta * path_norm(net);
    }
    return loss_value(loss, net.predict(ds.A), ds.y) + beta * path_norm(net);
}

// ---------------------------------------------------------------- json

namespace {

json vec_json(const Vec& v) {
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Vec json_vec(const json& j) {
    if (!j.is_array()) throw InvalidInput("expected a number array");
    Vec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

}  // namespace

std::string network_to_json(const Network& net, int indent) {
    net.validate();
    json j;
    json ns = json::array();
    for (const auto& nr : net.neurons) {
        json e;
        e["u"] = vec_json(nr.u);
        if (nr.b) e["b"] = *nr.b;
        e["provenance"] = to_string(nr.provenance);
        if (nr.source >= 0) e["source"] = nr.source;
        if (nr.bias_interval) e["bias_interval"] = {nr.bias_interval->first, nr.bias_interval->second};
        ns.push_back(e);
    }
    j["neurons"] = ns;
    if (net.vector_output()) {
        json rows = json::array();
        for (Index r = 0; r < net.W.rows(); ++r) rows.push_back(vec_json(net.W.row(r).transpose()));
        j["W"] = rows;
        j["outputs"] = net.W.cols();
    } else {
        j["w"] = vec_json(net.w);
    }
    j["has_bias"] = net.has_bias;
    if (net.intercept.size() > 0) j["intercept"] = vec_json(net.intercept);
    return j.dump(indent);
}

Network network_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("network json: ") + e.what());
    }
    try {
        Network net;
        net.has_bias = j.at("has_bias").get<bool>();
        for (const auto& e : j.at("neurons")) {
            Neuron nr;
            nr.u = json_vec(e.at("u"));
            if (e.contains("b")) nr.b = e["b"].get<double>();
            if (e.contains("provenance")) nr.provenance = provenance_from_string(e["provenance"].get<std::string>());
            if (e.contains("source")) nr.source = e["source"].get<int>();
            if (e.contains("bias_interval"))
                nr.bias_interval = std::make_pair(e["bias_interval"][0].get<double>(), e["bias_interval"][1].get<double>());
            net.neurons.push_back(std::move(nr));
        }
        if (j.contains("W")) {
            const auto& rows = j["W"];
            Index o = j.contains("outputs") ? j["outputs"].get<Index>() : (rows.empty() ? 0 : Index(rows[0].size()));
            net.W = Mat(Index(rows.size()), o);
            for (size_t r = 0; r < rows.size(); ++r) net.W.row(r) = json_vec(rows[r]).transpose();
        } else {
            net.w = json_vec(j.at("w"));
        }
        if (j.contains("intercept")) net.intercept = json_vec(j["intercept"]);
        net.validate();
        return net;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("network json: ") + e.what());
    }
}

}  // namespace cvxrelu

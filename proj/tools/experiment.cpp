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

#include "experiment.hpp"

#include "cvxrelu/errors.hpp"
#include "json.hpp"

namespace cvxrelu::cli {

using nlohmann::json;

std::string spec_to_json(const ExperimentSpec& s, int indent) {
    json j = {{"command", s.command},   {"mode", s.mode},         {"input", s.input},
              {"test_input", s.test_input}, {"output_dir", s.output_dir}, {"beta", s.beta},
              {"seed", s.seed},         {"loss", s.loss},         {"restarts", s.restarts},
              {"max_rounds", s.max_rounds}, {"n", s.n},           {"d", s.d},
              {"classes", s.classes},   {"width", s.width},       {"count", s.count},
              {"max_m", s.max_m}};
    j["bias"] = s.bias ? json(*s.bias) : json(nullptr);
    j["tol"] = s.tol ? json(*s.tol) : json(nullptr);
    return j.dump(indent);
}

ExperimentSpec spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("experiment spec: ") + e.what(), 0);
    }
    ExperimentSpec s;
    try {
        s.command = j.at("command").get<std::string>();
        s.mode = j.value("mode", "");
        s.input = j.value("input", "");
        s.test_input = j.value("test_input", "");
        s.output_dir = j.value("output_dir", ".");
        s.beta = j.value("beta", 0.0);
        s.seed = j.value("seed", std::uint64_t(0));
        s.loss = j.value("loss", "squared");
        s.restarts = j.value("restarts", 50);
        s.max_rounds = j.value("max_rounds", 50);
        s.n = j.value("n", 40);
        s.d = j.value("d", 10);
        s.classes = j.value("classes", 3);
        s.width = j.value("width", 0);
        s.count = j.value("count", 200);
        s.max_m = j.value("max_m", 0);
        if (j.contains("bias") && !j["bias"].is_null()) s.bias = j["bias"].get<bool>();
        if (j.contains("tol") && !j["tol"].is_null()) s.tol = j["tol"].get<double>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("experiment spec: ") + e.what(), 0);
    }
    return s;
}

}  // namespace cvxrelu::cli

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

#pragma once

// Parameters of one CLI invocation; written next to every run as experiment.json.

#include <optional>
#include <string>

namespace cvxrelu::cli {

struct ExperimentSpec {
    std::string command;
    std::string mode;       // train mode / gen kind / vector variant
    std::string input;      // dataset path (empty for generators)
    std::string test_input; // optional held-out set (convex-rf)
    std::string output_dir = ".";
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::optional<bool> bias;  // unset: on for 1-D inputs, off otherwise
    std::string loss = "squared";
    std::optional<double> tol;
    int restarts = 50;
    int max_rounds = 50;
    int n = 40;
    int d = 10;
    int classes = 3;
    int width = 0;  // gd hidden units; 0 means n
    int count = 200;
    int max_m = 0;  // gap-sweep: 0 means n + 2

    bool operator==(const ExperimentSpec&) const = default;
};

std::string spec_to_json(const ExperimentSpec& s, int indent = 2);
ExperimentSpec spec_from_json(const std::string& text);

}  // namespace cvxrelu::cli

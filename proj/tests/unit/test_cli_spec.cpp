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

#include "doctest.h"
#include "experiment.hpp"

#include "cvxrelu/errors.hpp"

using cvxrelu::cli::ExperimentSpec;

TEST_CASE("experiment spec round-trips through json") {
    ExperimentSpec s;
    s.command = "train";
    s.mode = "cutting-plane";
    s.input = "data/x.csv";
    s.output_dir = "out dir/ü";
    s.beta = 0.1 + 0.2;  // not exactly representable as a short decimal
    s.seed = 18446744073709551615ull;
    s.bias = false;
    s.tol = 1e-9;
    s.max_rounds = 7;
    CHECK(cvxrelu::cli::spec_from_json(cvxrelu::cli::spec_to_json(s)) == s);

    ExperimentSpec d;
    d.command = "gen";
    CHECK(cvxrelu::cli::spec_from_json(cvxrelu::cli::spec_to_json(d, -1)) == d);
}

TEST_CASE("experiment spec rejects malformed json") {
    CHECK_THROWS_AS(cvxrelu::cli::spec_from_json("{\"command\": "), cvxrelu::ParseError);
    CHECK_THROWS_AS(cvxrelu::cli::spec_from_json("{\"mode\": \"x\"}"), cvxrelu::ParseError);
}

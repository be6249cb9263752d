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

#include <cstddef>
#include <functional>

namespace cvxrelu {

// worker count: CONVEX_RELU_THREADS if set, else hardware concurrency
int thread_count();

// runs fn(i) for i in [0, count); fn must only write to slot i of its output
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace cvxrelu

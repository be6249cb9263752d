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

#include <optional>
#include <string>
#include <vector>

#include "cvxrelu/convex_rf.hpp"
#include "cvxrelu/linalg.hpp"

namespace cvxrelu {

struct Table {
    std::vector<std::string> header;
    Mat data;
};

// numeric CSV with one header row; ParseError carries the 1-based line number
Table parse_table(const std::string& text);
Table read_table(const std::string& path);
std::string format_table(const Table& t);
void write_table(const std::string& path, const Table& t);

// %.17g
std::string format_double(double x);

// header f0..f{d-1},y  or  f0..f{d-1},y0..y{o-1}; binary when every y is +-1 and `task` asks for it
Dataset dataset_from_table(const Table& t, std::optional<Task> task = std::nullopt);
Dataset read_dataset(const std::string& path, std::optional<Task> task = std::nullopt);
Table dataset_to_table(const Dataset& ds);
void write_dataset(const std::string& path, const Dataset& ds);

// first line "h,w", then a header row p0..p{hw-1}[,label], one image per row
struct ImageFile {
    ImageSet images;
    Vec labels;  // empty when the file has no label column
};
ImageFile read_images(const std::string& path);
void write_images(const std::string& path, const ImageSet& images, const Vec& labels = Vec());

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace cvxrelu

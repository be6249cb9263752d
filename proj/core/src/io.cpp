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

#include "cvxrelu/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cvxrelu/errors.hpp"

namespace cvxrelu {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, int line) {
    if (s.empty()) throw ParseError("missing value", line);
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) throw ParseError("not a number: '" + s + "'", line);
    if (!std::isfinite(x)) throw ParseError("non-finite value: '" + s + "'", line);
    return x;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

Table parse_lines(const std::vector<std::string>& lines, size_t first, int line_offset) {
    Table t;
    size_t k = first;
    while (k < lines.size() && trim(lines[k]).empty()) ++k;
    if (k == lines.size()) throw ParseError("missing header row", int(k) + 1 + line_offset);
    t.header = split(trim(lines[k]));
    for (const auto& h : t.header)
        if (h.empty()) throw ParseError("empty column name", int(k) + 1 + line_offset);
    const Index cols = Index(t.header.size());
    std::vector<std::vector<double>> rows;
    for (size_t i = k + 1; i < lines.size(); ++i) {
        std::string l = trim(lines[i]);
        if (l.empty()) continue;
        const int ln = int(i) + 1 + line_offset;
        auto cells = split(l);
        if (Index(cells.size()) != cols)
            throw ParseError("expected " + std::to_string(cols) + " fields, found " + std::to_string(cells.size()), ln);
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_number(c, ln));
        rows.push_back(std::move(row));
    }
    t.data.resize(Index(rows.size()), cols);
    for (size_t i = 0; i < rows.size(); ++i)
        for (Index j = 0; j < cols; ++j) t.data(Index(i), j) = rows[i][size_t(j)];
    return t;
}

}  // namespace

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path);
    out << text;
    if (!out) throw InvalidInput("write failed: " + path);
}

Table parse_table(const std::string& text) { return parse_lines(lines_of(text), 0, 0); }

Table read_table(const std::string& path) { return parse_table(read_text(path)); }

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_table(const Table& t) {
    if (Index(t.header.size()) != t.data.cols()) throw InvalidInput("table header does not match column count");
    std::string out;
    for (size_t j = 0; j < t.header.size(); ++j) out += (j ? "," : "") + t.header[j];
    out += "\n";
    for (Index i = 0; i < t.data.rows(); ++i) {
        for (Index j = 0; j < t.data.cols(); ++j) out += (j ? "," : "") + format_double(t.data(i, j));
        out += "\n";
    }
    return out;
}

void write_table(const std::string& path, const Table& t) { write_text(path, format_table(t)); }

Dataset dataset_from_table(const Table& t, std::optional<Task> task) {
    Index d = 0;
    while (d < Index(t.header.size()) && t.header[size_t(d)] == "f" + std::to_string(d)) ++d;
    const Index rest = Index(t.header.size()) - d;
    if (d == 0) throw ParseError("header must start with f0", 1);
    Mat A = t.data.leftCols(d);
    if (rest == 1 && t.header.back() == "y") {
        Vec y = t.data.col(d);
        if (task == Task::multiclass) throw ParseError("multiclass data needs y0..y{o-1} columns", 1);
        if (task == Task::binary_hinge) return make_binary(std::move(A), std::move(y));
        return make_regression(std::move(A), std::move(y));
    }
    if (rest >= 1) {
        for (Index k = 0; k < rest; ++k)
            if (t.header[size_t(d + k)] != "y" + std::to_string(k))
                throw ParseError("unexpected column '" + t.header[size_t(d + k)] + "'", 1);
        if (task && *task != Task::multiclass) throw ParseError("vector targets are multiclass only", 1);
        return make_multiclass(std::move(A), t.data.rightCols(rest));
    }
    throw ParseError("missing target column y", 1);
}

Dataset read_dataset(const std::string& path, std::optional<Task> task) {
    Dataset ds = dataset_from_table(read_table(path), task);
    ds.name = path;
    return ds;
}

Table dataset_to_table(const Dataset& ds) {
    ds.validate();
    Table t;
    for (Index j = 0; j < ds.d(); ++j) t.header.push_back("f" + std::to_string(j));
    if (ds.vector_output()) {
        for (Index k = 0; k < ds.Y.cols(); ++k) t.header.push_back("y" + std::to_string(k));
        t.data.resize(ds.n(), ds.d() + ds.Y.cols());
        t.data << ds.A, ds.Y;
    } else {
        t.header.push_back("y");
        t.data.resize(ds.n(), ds.d() + 1);
        t.data << ds.A, ds.y;
    }
    return t;
}

void write_dataset(const std::string& path, const Dataset& ds) { write_table(path, dataset_to_table(ds)); }

ImageFile read_images(const std::string& path) {
    auto lines = lines_of(read_text(path));
    size_t k = 0;
    while (k < lines.size() && trim(lines[k]).empty()) ++k;
    if (k == lines.size()) throw ParseError("missing shape line", 1);
    auto shape = split(trim(lines[k]));
    if (shape.size() != 2) throw ParseError("shape line must be 'h,w'", int(k) + 1);
    ImageFile f;
    f.images.h = Index(parse_number(shape[0], int(k) + 1));
    f.images.w = Index(parse_number(shape[1], int(k) + 1));
    if (f.images.h < 1 || f.images.w < 1) throw ParseError("image shape must be positive", int(k) + 1);
    Table t = parse_lines(lines, k + 1, 0);
    const Index hw = f.images.h * f.images.w;
    const bool labeled = Index(t.header.size()) == hw + 1 && t.header.back() == "label";
    if (!labeled && Index(t.header.size()) != hw) throw ParseError("expected h*w pixel columns", int(k) + 2);
    f.images.pixels = t.data.leftCols(hw);
    if (labeled) f.labels = t.data.col(hw);
    return f;
}

void write_images(const std::string& path, const ImageSet& images, const Vec& labels) {
    images.validate();
    Table t;
    for (Index j = 0; j < images.h * images.w; ++j) t.header.push_back("p" + std::to_string(j));
    if (labels.size()) {
        if (labels.size() != images.count()) throw InvalidInput("one label per image");
        t.header.push_back("label");
        t.data.resize(images.count(), images.h * images.w + 1);
        t.data << images.pixels, labels;
    } else {
        t.data = images.pixels;
    }
    write_text(path, std::to_string(images.h) + "," + std::to_string(images.w) + "\n" + format_table(t));
}

}  // namespace cvxrelu

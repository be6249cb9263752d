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

#include <stdexcept>
#include <string>

namespace cvxrelu {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

// malformed text input; line is 1-based, 0 when unknown
class ParseError : public InvalidInput {
public:
    ParseError(const std::string& msg, int line)
        : InvalidInput("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class NotWhitenable : public Error {
public:
    NotWhitenable(const std::string& msg, int rank) : Error(msg), rank_(rank) {}
    int rank() const { return rank_; }

private:
    int rank_;
};

class Infeasible : public Error {
public:
    Infeasible(const std::string& msg, double residual) : Error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class RankError : public Error {
public:
    using Error::Error;
};

class NotWhitened : public Error {
public:
    NotWhitened(const std::string& msg, double residual) : Error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class DegenerateExtreme : public Error {
public:
    using Error::Error;
};

class PatternInfeasible : public Error {
public:
    using Error::Error;
};

class EmptyClass : public Error {
public:
    using Error::Error;
};

class SingularKernel : public Error {
public:
    using Error::Error;
};

}  // namespace cvxrelu

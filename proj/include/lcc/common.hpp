// Copyright 2026 The lcc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace lcc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Error hierarchy. The CLI maps these onto its exit codes: InvalidArgument -> 2 while
// parameters are being validated (3 once work has begun), DataError/ParseError -> 3,
// TrainingError -> 4.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (bad parameter value, shape mismatch).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

// Input data is unusable (missing file, malformed content, non-finite values).
class DataError : public Error {
  public:
    using Error::Error;
};

class ParseError : public DataError {
  public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

// Optimization or fitting failed (non-convergence, divergence, degenerate statistics).
class TrainingError : public Error {
  public:
    using Error::Error;
};

}  // namespace lcc

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

#include "lcc/data.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace lcc {

namespace io {
class KeyValueReader;
}

// Gaussian class model: g_k(x) = ln p_k - 1/2 ln|S_k| - 1/2 (x - m_k)' S_k^-1 (x - m_k).
struct GaussianClass {
    Vector mean;
    Matrix covariance;  // after any ridge
    Matrix precision;
    double log_det = 0.0;
    double prior = 0.0;
    bool regularized = false;
};

struct MlcModel {
    std::vector<GaussianClass> classes;

    Eigen::Index dim() const { return classes.empty() ? 0 : classes.front().mean.size(); }
    int n_classes() const { return static_cast<int>(classes.size()); }
    bool any_regularized() const;
};

enum class PriorMode { uniform, frequency };

// Covariances whose condition estimate exceeds this get a ridge.
inline constexpr double kMlcConditionLimit = 1e12;

// Class means and unbiased covariances. Near-singular covariances get
// eps*I with eps = 1e-6 * trace/d and the class is flagged. `priors`, when
// given, must hold one positive value per class and sum to 1.
MlcModel fit_mlc(const Dataset& train, const std::optional<std::vector<double>>& priors = std::nullopt);
MlcModel fit_mlc(const Dataset& train, PriorMode mode);

double discriminant(const MlcModel& model, int k, const Eigen::Ref<const Vector>& x);

// Largest discriminant; ties go to the lowest class id.
int classify_mlc(const MlcModel& model, const Eigen::Ref<const Vector>& x);

std::vector<int> classify_mlc_all(const MlcModel& model, const Eigen::Ref<const Matrix>& rows);

// Builds a class from a mean, covariance and prior (regularizing when needed).
GaussianClass make_gaussian_class(Vector mean, Matrix covariance, double prior);

void write_mlc_model(std::ostream& out, const MlcModel& model);
MlcModel read_mlc_model(io::KeyValueReader& in);

}  // namespace lcc

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

#include "lcc/common.hpp"

#include <cmath>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lcc {

namespace io {
class KeyValueReader;
}

enum class KernelKind { linear, rbf };

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double gamma = 2.0;

    static KernelSpec linear() { return {KernelKind::linear, 0.0}; }
    static KernelSpec rbf(double gamma) { return {KernelKind::rbf, gamma}; }

    // Throws InvalidArgument unless gamma > 0 for rbf.
    void validate() const;
    std::string name() const { return kind == KernelKind::linear ? "linear" : "rbf"; }
};

KernelKind parse_kernel_kind(const std::string& name);

// linear: x . y;  rbf: exp(-gamma * |x - y|^2). Accepts any pair of equally sized vector expressions.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar kernel_eval(const KernelSpec& spec, const Eigen::MatrixBase<DerivedX>& x,
                                      const Eigen::MatrixBase<DerivedY>& y) {
    using Scalar = typename DerivedX::Scalar;
    if (x.size() != y.size()) {
        throw InvalidArgument("kernel_eval: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()) + ")");
    }
    Scalar acc(0);
    if (spec.kind == KernelKind::linear) {
        for (Eigen::Index i = 0; i < x.size(); ++i) acc += x.derived().coeff(i) * y.derived().coeff(i);
        return acc;
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const Scalar d = x.derived().coeff(i) - y.derived().coeff(i);
        acc += d * d;
    }
    using std::exp;
    return exp(-Scalar(spec.gamma) * acc);
}

// Kernel matrix over the rows of `points`.
Matrix gram_matrix(const KernelSpec& spec, const Eigen::Ref<const Matrix>& points);

struct TrainConfig {
    double C = 5000.0;
    double kkt_tolerance = 1e-3;
    long long max_passes = 100000;  // pair updates
    // Above this many samples the solver switches from a full Gram matrix to an LRU row cache.
    Eigen::Index full_gram_limit = 4096;
    std::size_t cache_bytes = std::size_t{256} << 20;

    void validate() const;
};

// Two-class soft-margin model. Only multipliers > 0 are kept.
struct BinarySvmModel {
    Matrix support_vectors;  // one row per support vector
    Vector sv_labels;        // +1 / -1
    Vector alphas;           // in (0, C]
    double bias = 0.0;
    double C = 0.0;
    KernelSpec kernel;
    std::optional<Vector> w_explicit;  // linear kernel only

    // Row of each support vector in the training set (not persisted).
    std::vector<Eigen::Index> sv_indices;
    long long iterations = 0;

    Eigen::Index dim() const noexcept { return support_vectors.cols(); }
    Eigen::Index sv_count() const noexcept { return support_vectors.rows(); }
};

struct SolverDiagnostics {
    long long iterations = 0;
    double gap = 0.0;  // max violating pair gap m - M
    double dual_objective = 0.0;
};

class SvmConvergenceError : public TrainingError {
  public:
    SvmConvergenceError(const std::string& what, SolverDiagnostics diag) : TrainingError(what), diag_(diag) {}
    const SolverDiagnostics& diagnostics() const noexcept { return diag_; }

  private:
    SolverDiagnostics diag_;
};

// Sequential minimal optimization on the box-constrained dual
//   max sum(l) - 1/2 sum_ij l_i l_j y_i y_j K(x_i, x_j),  0 <= l_i <= C,  sum l_i y_i = 0.
// Rows of `x` are samples; labels are +1 / -1.
BinarySvmModel train_binary(const Eigen::Ref<const Matrix>& x, std::span<const int> labels, const TrainConfig& cfg,
                            const KernelSpec& kernel);

double decision_value(const BinarySvmModel& model, const Eigen::Ref<const Vector>& x);

// Dual objective at the model's multipliers; `x`/`labels` must be its training set.
double dual_objective(const BinarySvmModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> labels);

// Largest violation of the box KKT conditions over the training set:
//   l = 0      -> 1 - y f   (if positive)
//   0 < l < C  -> |y f - 1|
//   l = C      -> y f - 1   (if positive)
double kkt_violation(const BinarySvmModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> labels,
                     double C);

// Multiplier of every training row (zero for non-support vectors).
Vector training_multipliers(const BinarySvmModel& model, const Eigen::Ref<const Matrix>& x,
                            std::span<const int> labels);

void write_binary_model(std::ostream& out, const BinarySvmModel& model);
BinarySvmModel read_binary_model(io::KeyValueReader& in);

}  // namespace lcc

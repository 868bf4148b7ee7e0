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

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace lcc {

namespace io {
class KeyValueReader;
}

// Layer sizes from input to output; logistic sigmoid on every non-input layer.
struct MlpArchitecture {
    std::vector<int> sizes;

    static MlpArchitecture with_hidden(int inputs, std::vector<int> hidden, int outputs);
    void validate() const;
    int inputs() const { return sizes.front(); }
    int outputs() const { return sizes.back(); }
};

struct MlpModel {
    MlpArchitecture arch;
    std::vector<Matrix> weights;  // layer l: sizes[l+1] x sizes[l]
    std::vector<Vector> biases;
    int epochs_run = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

struct MlpGradient {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
};

template <typename Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& z) {
    return 1.0 / (1.0 + (-z).exp());
}

// Weights and biases uniform in [-0.5, 0.5], drawn layer by layer (weights row-major, then biases).
MlpModel init_mlp(const MlpArchitecture& arch, std::uint64_t seed);

Vector forward(const MlpModel& model, const Eigen::Ref<const Vector>& x);
int predict_mlp(const MlpModel& model, const Eigen::Ref<const Vector>& x);
std::vector<int> predict_mlp_all(const MlpModel& model, const Eigen::Ref<const Matrix>& rows);

// One-hot rows for the dataset labels.
Matrix one_hot(const Dataset& ds);

// E = 1/(2N) * sum_n |o_n - t_n|^2 over the rows of `x` / `targets`.
double mlp_loss(const MlpModel& model, const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& targets);

// Backpropagated gradient of mlp_loss.
MlpGradient mlp_gradient(const MlpModel& model, const Eigen::Ref<const Matrix>& x,
                         const Eigen::Ref<const Matrix>& targets);

// Full-batch gradient descent with a fixed rate on the sum-of-squares loss against one-hot targets.
MlpModel train_mlp(const Dataset& train, const MlpArchitecture& arch, double learning_rate, int epochs,
                   std::uint64_t seed);

// max over parameters of |g_bp - g_fd| / max(1e-12, |g_bp| + |g_fd|) for the
// single-sample loss 1/2 |o - target|^2, with central differences of step epsilon.
double gradient_check(const MlpModel& model, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& target,
                      double epsilon);

void write_mlp_model(std::ostream& out, const MlpModel& model);
MlpModel read_mlp_model(io::KeyValueReader& in);

}  // namespace lcc

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

#include "lcc/mlp.hpp"

#include "lcc/random.hpp"
#include "lcc/text_io.hpp"

#include <cmath>
#include <ostream>

namespace lcc {

MlpArchitecture MlpArchitecture::with_hidden(int inputs, std::vector<int> hidden, int outputs) {
    MlpArchitecture a;
    a.sizes.push_back(inputs);
    a.sizes.insert(a.sizes.end(), hidden.begin(), hidden.end());
    a.sizes.push_back(outputs);
    return a;
}

void MlpArchitecture::validate() const {
    if (sizes.size() < 3) throw InvalidArgument("network needs an input, at least one hidden, and an output layer");
    for (int s : sizes) {
        if (s < 1) throw InvalidArgument("layer sizes must be >= 1");
    }
}

MlpModel init_mlp(const MlpArchitecture& arch, std::uint64_t seed) {
    arch.validate();
    Rng rng(seed);
    MlpModel m;
    m.arch = arch;
    for (std::size_t l = 0; l + 1 < arch.sizes.size(); ++l) {
        Matrix w(arch.sizes[l + 1], arch.sizes[l]);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-0.5, 0.5);
        }
        Vector b(arch.sizes[l + 1]);
        for (Eigen::Index r = 0; r < b.size(); ++r) b[r] = rng.uniform(-0.5, 0.5);
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    return m;
}

namespace {

void check_input(const MlpModel& model, Eigen::Index cols) {
    if (cols != model.arch.inputs()) {
        throw InvalidArgument("network expects " + std::to_string(model.arch.inputs()) + " inputs, got " +
                              std::to_string(cols));
    }
}

// Activations per layer for a batch (rows = samples); element 0 is the input.
std::vector<Matrix> forward_batch(const MlpModel& model, const Eigen::Ref<const Matrix>& x) {
    std::vector<Matrix> acts;
    acts.reserve(model.weights.size() + 1);
    acts.emplace_back(x);
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        Matrix z = acts.back() * model.weights[l].transpose();
        z.rowwise() += model.biases[l].transpose();
        acts.emplace_back(sigmoid(z.array()).matrix());
    }
    return acts;
}

}  // namespace

Vector forward(const MlpModel& model, const Eigen::Ref<const Vector>& x) {
    check_input(model, x.size());
    Vector a = x;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        a = sigmoid((model.weights[l] * a + model.biases[l]).array()).matrix();
    }
    return a;
}

int predict_mlp(const MlpModel& model, const Eigen::Ref<const Vector>& x) {
    Eigen::Index best = 0;
    forward(model, x).maxCoeff(&best);
    return static_cast<int>(best);
}

std::vector<int> predict_mlp_all(const MlpModel& model, const Eigen::Ref<const Matrix>& rows) {
    check_input(model, rows.cols());
    const Matrix out = forward_batch(model, rows).back();
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        Eigen::Index best = 0;
        out.row(i).maxCoeff(&best);
        labels.push_back(static_cast<int>(best));
    }
    return labels;
}

Matrix one_hot(const Dataset& ds) {
    Matrix t = Matrix::Zero(ds.size(), ds.n_classes());
    for (Eigen::Index i = 0; i < ds.size(); ++i) t(i, ds.y(i)) = 1.0;
    return t;
}

double mlp_loss(const MlpModel& model, const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& targets) {
    check_input(model, x.cols());
    const Matrix out = forward_batch(model, x).back();
    return 0.5 * (out - targets).squaredNorm() / static_cast<double>(x.rows());
}

MlpGradient mlp_gradient(const MlpModel& model, const Eigen::Ref<const Matrix>& x,
                         const Eigen::Ref<const Matrix>& targets) {
    check_input(model, x.cols());
    if (targets.rows() != x.rows() || targets.cols() != model.arch.outputs()) {
        throw InvalidArgument("target shape does not match the batch and output layer");
    }
    const auto acts = forward_batch(model, x);
    const std::size_t layers = model.weights.size();
    MlpGradient g;
    g.weights.resize(layers);
    g.biases.resize(layers);
    const double scale = 1.0 / static_cast<double>(x.rows());
    // delta = dE/dz for the current layer, one row per sample.
    Matrix delta = ((acts.back() - targets).array() * acts.back().array() * (1.0 - acts.back().array())).matrix();
    for (std::size_t l = layers; l-- > 0;) {
        g.weights[l] = scale * delta.transpose() * acts[l];
        g.biases[l] = scale * delta.colwise().sum().transpose();
        if (l > 0) {
            const Matrix back = delta * model.weights[l];
            delta = (back.array() * acts[l].array() * (1.0 - acts[l].array())).matrix();
        }
    }
    return g;
}

MlpModel train_mlp(const Dataset& train, const MlpArchitecture& arch, double learning_rate, int epochs,
                   std::uint64_t seed) {
    arch.validate();
    if (train.empty()) throw InvalidArgument("train_mlp: empty training set");
    if (arch.inputs() != train.dim()) {
        throw InvalidArgument("train_mlp: network has " + std::to_string(arch.inputs()) + " inputs, data has " +
                              std::to_string(train.dim()) + " features");
    }
    if (arch.outputs() != train.n_classes()) {
        throw InvalidArgument("train_mlp: network has " + std::to_string(arch.outputs()) + " outputs, data has " +
                              std::to_string(train.n_classes()) + " classes");
    }
    if (!(learning_rate >= 0.0 && std::isfinite(learning_rate))) {
        throw InvalidArgument("train_mlp: learning rate must be a non-negative finite number");
    }
    if (epochs < 0) throw InvalidArgument("train_mlp: epochs must be >= 0");

    MlpModel m = init_mlp(arch, seed);
    const Matrix targets = one_hot(train);
    m.initial_loss = mlp_loss(m, train.features(), targets);
    for (int e = 0; e < epochs; ++e) {
        const auto g = mlp_gradient(m, train.features(), targets);
        for (std::size_t l = 0; l < m.weights.size(); ++l) {
            m.weights[l] -= learning_rate * g.weights[l];
            m.biases[l] -= learning_rate * g.biases[l];
        }
        const double loss = mlp_loss(m, train.features(), targets);
        if (!std::isfinite(loss)) throw TrainingError("train_mlp: loss diverged at epoch " + std::to_string(e + 1));
        m.final_loss = loss;
        m.epochs_run = e + 1;
    }
    if (epochs == 0) m.final_loss = m.initial_loss;
    return m;
}

double gradient_check(const MlpModel& model, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& target,
                      double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1e-2)) throw InvalidArgument("gradient_check: epsilon must lie in (0, 1e-2]");
    const Matrix xr = x.transpose();
    const Matrix tr = target.transpose();
    const auto analytic = mlp_gradient(model, xr, tr);
    MlpModel probe = model;
    double worst = 0.0;
    const auto compare = [&](double& param, double g_bp) {
        const double saved = param;
        param = saved + epsilon;
        const double up = mlp_loss(probe, xr, tr);
        param = saved - epsilon;
        const double down = mlp_loss(probe, xr, tr);
        param = saved;
        const double g_fd = (up - down) / (2.0 * epsilon);
        worst = std::max(worst, std::abs(g_bp - g_fd) / std::max(1e-12, std::abs(g_bp) + std::abs(g_fd)));
    };
    for (std::size_t l = 0; l < probe.weights.size(); ++l) {
        for (Eigen::Index r = 0; r < probe.weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < probe.weights[l].cols(); ++c) compare(probe.weights[l](r, c), analytic.weights[l](r, c));
        }
        for (Eigen::Index r = 0; r < probe.biases[l].size(); ++r) compare(probe.biases[l][r], analytic.biases[l][r]);
    }
    return worst;
}

void write_mlp_model(std::ostream& out, const MlpModel& model) {
    out << "mlp\n";
    out << "layers " << model.arch.sizes.size();
    for (int s : model.arch.sizes) out << ' ' << s;
    out << "\n";
    out << "activation sigmoid\n";
    out << "epochs " << model.epochs_run << "\n";
    out << "initial_loss " << io::format_double(model.initial_loss) << "\n";
    out << "final_loss " << io::format_double(model.final_loss) << "\n";
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        out << "layer " << l << "\n";
        for (Eigen::Index r = 0; r < model.weights[l].rows(); ++r) {
            const Vector row = model.weights[l].row(r).transpose();
            out << io::join_doubles({row.data(), static_cast<std::size_t>(row.size())}) << "\n";
        }
        out << "bias\n";
        out << io::join_doubles({model.biases[l].data(), static_cast<std::size_t>(model.biases[l].size())}) << "\n";
    }
}

MlpModel read_mlp_model(io::KeyValueReader& in) {
    in.expect("mlp", 0);
    auto tokens = in.next_tokens();
    if (tokens.front() != "layers" || tokens.size() < 2) in.fail("expected 'layers'");
    long long count = 0;
    if (!io::parse_int(tokens[1], count) || count < 3 || static_cast<std::size_t>(count) + 2 != tokens.size()) {
        in.fail("malformed layer list");
    }
    MlpModel m;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
        long long s = 0;
        if (!io::parse_int(tokens[i], s) || s < 1) in.fail("layer size must be a positive integer");
        m.arch.sizes.push_back(static_cast<int>(s));
    }
    if (in.expect_word("activation") != "sigmoid") in.fail("only sigmoid activation is supported");
    m.epochs_run = static_cast<int>(in.expect_int("epochs"));
    m.initial_loss = in.expect_double("initial_loss");
    m.final_loss = in.expect_double("final_loss");
    for (std::size_t l = 0; l + 1 < m.arch.sizes.size(); ++l) {
        if (in.expect_int("layer") != static_cast<long long>(l)) in.fail("layers out of order");
        Matrix w(m.arch.sizes[l + 1], m.arch.sizes[l]);
        for (Eigen::Index r = 0; r < w.rows(); ++r) w.row(r) = in.read_vector(static_cast<std::size_t>(w.cols())).transpose();
        in.expect("bias", 0);
        m.weights.push_back(std::move(w));
        m.biases.push_back(in.read_vector(static_cast<std::size_t>(m.arch.sizes[l + 1])));
    }
    return m;
}

}  // namespace lcc

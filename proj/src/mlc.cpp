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

#include "lcc/mlc.hpp"

#include "lcc/text_io.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <ostream>

namespace lcc {

bool MlcModel::any_regularized() const {
    for (const auto& c : classes) {
        if (c.regularized) return true;
    }
    return false;
}

namespace {

bool ill_conditioned(const Matrix& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    return !(lo > 0.0) || hi / lo > kMlcConditionLimit;
}

// Fills log_det and precision from the covariance via Cholesky.
bool factorize(GaussianClass& g) {
    const auto d = g.covariance.rows();
    Eigen::LLT<Matrix> llt(g.covariance);
    if (llt.info() != Eigen::Success) return false;
    const Matrix& l = llt.matrixLLT();
    g.log_det = 2.0 * l.diagonal().array().log().sum();
    g.precision = llt.solve(Matrix::Identity(d, d));
    g.precision = 0.5 * (g.precision + g.precision.transpose());
    return true;
}

}  // namespace

GaussianClass make_gaussian_class(Vector mean, Matrix covariance, double prior) {
    const auto d = mean.size();
    if (covariance.rows() != d || covariance.cols() != d) throw InvalidArgument("covariance shape mismatch");
    GaussianClass g;
    g.mean = std::move(mean);
    g.prior = prior;
    // Exact symmetry.
    g.covariance = 0.5 * (covariance + covariance.transpose());
    if (ill_conditioned(g.covariance)) {
        double eps = 1e-6 * g.covariance.trace() / static_cast<double>(d);
        // A class of identical samples has zero trace; fall back to an absolute ridge.
        if (!(eps > 0.0)) eps = 1e-6;
        g.covariance.diagonal().array() += eps;
        g.regularized = true;
    }
    if (!factorize(g)) throw TrainingError("covariance is not positive definite after regularization");
    return g;
}

MlcModel fit_mlc(const Dataset& train, const std::optional<std::vector<double>>& priors) {
    const int n = train.n_classes();
    if (n < 1 || train.empty()) throw InvalidArgument("fit_mlc: empty training set");
    train.require_class_counts(2, "fit_mlc");
    std::vector<double> p;
    if (priors) {
        p = *priors;
        if (p.size() != static_cast<std::size_t>(n)) {
            throw InvalidArgument("fit_mlc: " + std::to_string(p.size()) + " priors for " + std::to_string(n) + " classes");
        }
        double sum = 0.0;
        for (double v : p) {
            if (!(v > 0.0 && v <= 1.0)) throw InvalidArgument("fit_mlc: priors must lie in (0, 1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw InvalidArgument("fit_mlc: priors sum to " + io::format_double(sum) + ", not 1");
        }
    } else {
        p.assign(static_cast<std::size_t>(n), 1.0 / n);
    }

    MlcModel model;
    model.classes.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const auto rows = train.indices_of(k);
        Matrix xk(static_cast<Eigen::Index>(rows.size()), train.dim());
        for (std::size_t r = 0; r < rows.size(); ++r) xk.row(static_cast<Eigen::Index>(r)) = train.x(rows[r]);
        const Vector mean = xk.colwise().mean().transpose();
        const Matrix centered = xk.rowwise() - mean.transpose();
        const Matrix cov = (centered.transpose() * centered) / static_cast<double>(xk.rows() - 1);
        model.classes.push_back(make_gaussian_class(mean, cov, p[static_cast<std::size_t>(k)]));
    }
    return model;
}

MlcModel fit_mlc(const Dataset& train, PriorMode mode) {
    if (mode == PriorMode::uniform) return fit_mlc(train);
    const auto counts = train.class_counts();
    const double total = static_cast<double>(train.size());
    std::vector<double> p;
    for (auto c : counts) p.push_back(static_cast<double>(c) / total);
    // Renormalize away rounding so the sum check is exact to 1e-12.
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= sum;
    return fit_mlc(train, p);
}

double discriminant(const MlcModel& model, int k, const Eigen::Ref<const Vector>& x) {
    if (k < 0 || k >= model.n_classes()) throw InvalidArgument("discriminant: invalid class id " + std::to_string(k));
    const auto& c = model.classes[static_cast<std::size_t>(k)];
    if (x.size() != c.mean.size()) {
        throw InvalidArgument("discriminant: model expects " + std::to_string(c.mean.size()) + " features, got " +
                              std::to_string(x.size()));
    }
    const Vector diff = x - c.mean;
    const double mahalanobis = diff.dot(c.precision * diff);
    return std::log(c.prior) - 0.5 * c.log_det - 0.5 * mahalanobis;
}

int classify_mlc(const MlcModel& model, const Eigen::Ref<const Vector>& x) {
    int best = 0;
    double best_g = discriminant(model, 0, x);
    for (int k = 1; k < model.n_classes(); ++k) {
        const double g = discriminant(model, k, x);
        if (g > best_g) {
            best_g = g;
            best = k;
        }
    }
    return best;
}

std::vector<int> classify_mlc_all(const MlcModel& model, const Eigen::Ref<const Matrix>& rows) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) out.push_back(classify_mlc(model, rows.row(i).transpose()));
    return out;
}

void write_mlc_model(std::ostream& out, const MlcModel& model) {
    out << "mlc\n";
    out << "classes " << model.n_classes() << "\n";
    out << "dimension " << model.dim() << "\n";
    for (int k = 0; k < model.n_classes(); ++k) {
        const auto& c = model.classes[static_cast<std::size_t>(k)];
        out << "class " << k << "\n";
        out << "prior " << io::format_double(c.prior) << "\n";
        out << "regularized " << (c.regularized ? 1 : 0) << "\n";
        out << "mean\n" << io::join_doubles({c.mean.data(), static_cast<std::size_t>(c.mean.size())}) << "\n";
        out << "covariance\n";
        for (Eigen::Index i = 0; i < c.covariance.rows(); ++i) {
            const Vector row = c.covariance.row(i).transpose();
            out << io::join_doubles({row.data(), static_cast<std::size_t>(row.size())}) << "\n";
        }
    }
}

MlcModel read_mlc_model(io::KeyValueReader& in) {
    in.expect("mlc", 0);
    const long long n = in.expect_int("classes");
    const long long d = in.expect_int("dimension");
    if (n < 1 || d < 1) in.fail("class count and dimension must be positive");
    MlcModel m;
    for (long long k = 0; k < n; ++k) {
        if (in.expect_int("class") != k) in.fail("class blocks out of order");
        GaussianClass c;
        c.prior = in.expect_double("prior");
        if (!(c.prior > 0.0 && c.prior <= 1.0)) in.fail("prior must lie in (0, 1]");
        c.regularized = in.expect_int("regularized") != 0;
        in.expect("mean", 0);
        c.mean = in.read_vector(static_cast<std::size_t>(d));
        in.expect("covariance", 0);
        c.covariance.resize(d, d);
        for (long long i = 0; i < d; ++i) c.covariance.row(i) = in.read_vector(static_cast<std::size_t>(d)).transpose();
        // The stored covariance already includes any ridge.
        if (!factorize(c)) in.fail("covariance is not positive definite");
        m.classes.push_back(std::move(c));
    }
    return m;
}

}  // namespace lcc

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

#include "lcc/svm.hpp"

#include "kernel_cache.hpp"
#include "lcc/text_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <ostream>

namespace lcc {

void KernelSpec::validate() const {
    if (kind == KernelKind::rbf && !(gamma > 0.0 && std::isfinite(gamma))) {
        throw InvalidArgument("rbf kernel requires gamma > 0, got " + io::format_double(gamma));
    }
}

KernelKind parse_kernel_kind(const std::string& name) {
    if (name == "linear") return KernelKind::linear;
    if (name == "rbf") return KernelKind::rbf;
    throw InvalidArgument("unknown kernel '" + name + "' (expected linear or rbf)");
}

Matrix gram_matrix(const KernelSpec& spec, const Eigen::Ref<const Matrix>& points) {
    const Eigen::Index n = points.rows();
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            k(i, j) = k(j, i) = kernel_eval(spec, points.row(i), points.row(j));
        }
    }
    return k;
}

void TrainConfig::validate() const {
    if (!(C > 0.0 && std::isfinite(C))) throw InvalidArgument("C must be > 0, got " + io::format_double(C));
    if (!(kkt_tolerance > 0.0)) throw InvalidArgument("kkt_tolerance must be > 0");
    if (max_passes < 1) throw InvalidArgument("max_passes must be positive");
}

namespace {

struct PairChoice {
    Eigen::Index i = -1;
    Eigen::Index j = -1;
    double gap = 0.0;
};

class SmoSolver {
  public:
    SmoSolver(const Eigen::Ref<const Matrix>& x, std::span<const int> y, const TrainConfig& cfg,
              const KernelSpec& kernel)
        : n_(x.rows()), y_(y), c_(cfg.C), tol_(cfg.kkt_tolerance), max_updates_(cfg.max_passes),
          cache_(kernel, x, cfg.full_gram_limit, cfg.cache_bytes), alpha_(Vector::Zero(n_)),
          grad_(Vector::Constant(n_, -1.0)) {}

    void solve() {
        while (true) {
            auto choice = select_max_violating_pair();
            gap_ = choice.gap;
            if (choice.i < 0 || choice.gap <= tol_) return;
            if (eta(choice.i, choice.j) <= kMinEta) choice = scan_for_pair();
            if (choice.i < 0) {
                throw SvmConvergenceError(
                    fmt::format("SMO stalled: no pair with positive curvature can reduce gap {:.3g}", gap_),
                    diagnostics());
            }
            if (updates_ >= max_updates_) {
                throw SvmConvergenceError(fmt::format("SMO did not converge within {} pair updates (gap {:.3g}, "
                                                      "tolerance {:.3g})",
                                                      max_updates_, gap_, tol_),
                                          diagnostics());
            }
            update(choice.i, choice.j);
            ++updates_;
        }
    }

    double bias() const {
        double free_sum = 0.0;
        Eigen::Index free_count = 0;
        double lb = -std::numeric_limits<double>::infinity();
        double ub = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n_; ++t) {
            const double f = violation_score(t);
            const int y = y_[static_cast<std::size_t>(t)];
            if (alpha_[t] > 0.0 && alpha_[t] < c_) {
                free_sum += f;
                ++free_count;
            } else if ((alpha_[t] == 0.0) == (y > 0)) {
                lb = std::max(lb, f);
            } else {
                ub = std::min(ub, f);
            }
        }
        if (free_count > 0) return free_sum / static_cast<double>(free_count);
        if (!std::isfinite(lb)) return ub;
        if (!std::isfinite(ub)) return lb;
        return 0.5 * (lb + ub);
    }

    const Vector& alpha() const noexcept { return alpha_; }
    long long updates() const noexcept { return updates_; }

    SolverDiagnostics diagnostics() const {
        // With G = Qa - 1: sum(a) - 1/2 a'Qa = 1/2 (sum(a) - a'G).
        return {updates_, gap_, 0.5 * (alpha_.sum() - alpha_.dot(grad_))};
    }

  private:
    static constexpr double kMinEta = 1e-12;

    // F_t = y_t - f_0(x_t): the bias value that would put x_t exactly on its margin.
    double violation_score(Eigen::Index t) const { return -y_[static_cast<std::size_t>(t)] * grad_[t]; }

    bool in_up(Eigen::Index t) const {
        return y_[static_cast<std::size_t>(t)] > 0 ? alpha_[t] < c_ : alpha_[t] > 0.0;
    }
    bool in_low(Eigen::Index t) const {
        return y_[static_cast<std::size_t>(t)] > 0 ? alpha_[t] > 0.0 : alpha_[t] < c_;
    }

    double eta(Eigen::Index i, Eigen::Index j) {
        const double kij = cache_.row(i)[j];
        return cache_.diag(i) + cache_.diag(j) - 2.0 * kij;
    }

    // First choice: largest F over I_up. Second: smallest F over I_low, i.e. largest |E_i - E_j|.
    PairChoice select_max_violating_pair() const {
        PairChoice c;
        double m = -std::numeric_limits<double>::infinity();
        double big_m = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n_; ++t) {
            const double f = violation_score(t);
            if (in_up(t) && f > m) {
                m = f;
                c.i = t;
            }
            if (in_low(t) && f < big_m) {
                big_m = f;
                c.j = t;
            }
        }
        if (c.i < 0 || c.j < 0) return {};
        c.gap = m - big_m;
        return c;
    }

    // Fallback when the preferred pair has no curvature: first violating pair in index order.
    PairChoice scan_for_pair() {
        for (Eigen::Index i = 0; i < n_; ++i) {
            if (!in_up(i)) continue;
            const double fi = violation_score(i);
            for (Eigen::Index j = 0; j < n_; ++j) {
                if (j == i || !in_low(j)) continue;
                if (fi - violation_score(j) <= tol_) continue;
                if (eta(i, j) > kMinEta) return {i, j, fi - violation_score(j)};
            }
        }
        return {};
    }

    // Move along a_i += y_i t, a_j -= y_j t, which keeps sum(a y) fixed.
    void update(Eigen::Index i, Eigen::Index j) {
        const int yi = y_[static_cast<std::size_t>(i)];
        const int yj = y_[static_cast<std::size_t>(j)];
        const double curvature = eta(i, j);
        const double step = (violation_score(i) - violation_score(j)) / curvature;
        const double bound_i = yi > 0 ? c_ - alpha_[i] : alpha_[i];
        const double bound_j = yj > 0 ? alpha_[j] : c_ - alpha_[j];
        const double t = std::min({step, bound_i, bound_j});

        const double old_i = alpha_[i];
        const double old_j = alpha_[j];
        alpha_[i] = t == bound_i ? (yi > 0 ? c_ : 0.0) : std::clamp(old_i + yi * t, 0.0, c_);
        alpha_[j] = t == bound_j ? (yj > 0 ? 0.0 : c_) : std::clamp(old_j - yj * t, 0.0, c_);
        const double di = alpha_[i] - old_i;
        const double dj = alpha_[j] - old_j;

        const double* ki = cache_.row(i);
        const double* kj = cache_.row(j);
        for (Eigen::Index k = 0; k < n_; ++k) {
            grad_[k] += y_[static_cast<std::size_t>(k)] * (yi * di * ki[k] + yj * dj * kj[k]);
        }
    }

    Eigen::Index n_;
    std::span<const int> y_;
    double c_;
    double tol_;
    long long max_updates_;
    detail::KernelCache cache_;
    Vector alpha_;
    Vector grad_;  // Q a - 1
    long long updates_ = 0;
    double gap_ = 0.0;
};

}  // namespace

BinarySvmModel train_binary(const Eigen::Ref<const Matrix>& x, std::span<const int> labels, const TrainConfig& cfg,
                            const KernelSpec& kernel) {
    cfg.validate();
    kernel.validate();
    if (static_cast<std::size_t>(x.rows()) != labels.size()) {
        throw InvalidArgument("train_binary: sample/label count mismatch");
    }
    if (x.cols() < 1) throw InvalidArgument("train_binary: samples need at least one feature");
    if (!x.allFinite()) throw DataError("train_binary: non-finite feature value");
    bool has_pos = false;
    bool has_neg = false;
    for (int y : labels) {
        if (y == 1) {
            has_pos = true;
        } else if (y == -1) {
            has_neg = true;
        } else {
            throw InvalidArgument("train_binary: labels must be +1 or -1, got " + std::to_string(y));
        }
    }
    if (!has_pos || !has_neg) throw InvalidArgument("train_binary: both +1 and -1 samples are required");

    SmoSolver solver(x, labels, cfg, kernel);
    solver.solve();

    BinarySvmModel model;
    model.kernel = kernel;
    model.C = cfg.C;
    model.bias = solver.bias();
    model.iterations = solver.updates();
    const Vector& alpha = solver.alpha();
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        if (alpha[t] > 0.0) model.sv_indices.push_back(t);
    }
    const auto m = static_cast<Eigen::Index>(model.sv_indices.size());
    model.support_vectors.resize(m, x.cols());
    model.sv_labels.resize(m);
    model.alphas.resize(m);
    for (Eigen::Index s = 0; s < m; ++s) {
        const auto t = model.sv_indices[static_cast<std::size_t>(s)];
        model.support_vectors.row(s) = x.row(t);
        model.sv_labels[s] = labels[static_cast<std::size_t>(t)];
        model.alphas[s] = alpha[t];
    }
    if (kernel.kind == KernelKind::linear) {
        model.w_explicit = model.support_vectors.transpose() * model.alphas.cwiseProduct(model.sv_labels);
    }
    return model;
}

double decision_value(const BinarySvmModel& model, const Eigen::Ref<const Vector>& x) {
    if (x.size() != model.dim() && model.sv_count() > 0) {
        throw InvalidArgument("decision_value: model expects " + std::to_string(model.dim()) + " features, got " +
                              std::to_string(x.size()));
    }
    double f = model.bias;
    for (Eigen::Index s = 0; s < model.sv_count(); ++s) {
        f += model.sv_labels[s] * model.alphas[s] * kernel_eval(model.kernel, model.support_vectors.row(s), x);
    }
    return f;
}

namespace {

void check_training_set(const BinarySvmModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> labels) {
    if (x.rows() == 0 || labels.empty()) throw InvalidArgument("empty training set");
    if (static_cast<std::size_t>(x.rows()) != labels.size()) throw InvalidArgument("sample/label count mismatch");
    if (model.sv_count() > 0 && x.cols() != model.dim()) {
        throw InvalidArgument("training set has " + std::to_string(x.cols()) + " features, model expects " +
                              std::to_string(model.dim()));
    }
}

}  // namespace

Vector training_multipliers(const BinarySvmModel& model, const Eigen::Ref<const Matrix>& x,
                            std::span<const int> labels) {
    check_training_set(model, x, labels);
    Vector lambda = Vector::Zero(x.rows());
    if (model.sv_indices.size() == static_cast<std::size_t>(model.sv_count())) {
        for (Eigen::Index s = 0; s < model.sv_count(); ++s) {
            const auto t = model.sv_indices[static_cast<std::size_t>(s)];
            if (t < 0 || t >= x.rows()) throw InvalidArgument("support vector index outside training set");
            lambda[t] = model.alphas[s];
        }
        return lambda;
    }
    // Loaded models carry no indices: match rows exactly, each row used once.
    std::vector<bool> used(static_cast<std::size_t>(x.rows()), false);
    for (Eigen::Index s = 0; s < model.sv_count(); ++s) {
        bool found = false;
        for (Eigen::Index t = 0; t < x.rows() && !found; ++t) {
            if (!used[static_cast<std::size_t>(t)] && labels[static_cast<std::size_t>(t)] == model.sv_labels[s] &&
                x.row(t) == model.support_vectors.row(s)) {
                used[static_cast<std::size_t>(t)] = true;
                lambda[t] = model.alphas[s];
                found = true;
            }
        }
        if (!found) throw InvalidArgument("support vector " + std::to_string(s) + " not found in training set");
    }
    return lambda;
}

double dual_objective(const BinarySvmModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> labels) {
    const Vector lambda = training_multipliers(model, x, labels);
    Vector ly(x.rows());
    for (Eigen::Index t = 0; t < x.rows(); ++t) ly[t] = lambda[t] * labels[static_cast<std::size_t>(t)];
    double quad = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (ly[i] == 0.0) continue;
        for (Eigen::Index j = 0; j < x.rows(); ++j) {
            if (ly[j] == 0.0) continue;
            quad += ly[i] * ly[j] * kernel_eval(model.kernel, x.row(i), x.row(j));
        }
    }
    return lambda.sum() - 0.5 * quad;
}

double kkt_violation(const BinarySvmModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> labels,
                     double C) {
    const Vector lambda = training_multipliers(model, x, labels);
    double worst = 0.0;
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        const double yf = labels[static_cast<std::size_t>(t)] * decision_value(model, x.row(t).transpose());
        double v = 0.0;
        if (lambda[t] <= 0.0) {
            v = 1.0 - yf;
        } else if (lambda[t] < C) {
            v = std::abs(yf - 1.0);
        } else {
            v = yf - 1.0;
        }
        worst = std::max(worst, v);
    }
    return worst;
}

void write_binary_model(std::ostream& out, const BinarySvmModel& model) {
    out << "svm_binary\n";
    out << "kernel " << model.kernel.name() << "\n";
    out << "gamma " << io::format_double(model.kernel.gamma) << "\n";
    out << "C " << io::format_double(model.C) << "\n";
    out << "bias " << io::format_double(model.bias) << "\n";
    out << "dimension " << model.dim() << "\n";
    out << "support_vectors " << model.sv_count() << "\n";
    for (Eigen::Index s = 0; s < model.sv_count(); ++s) {
        out << (model.sv_labels[s] > 0 ? "+1" : "-1") << ' ' << io::format_double(model.alphas[s]);
        for (Eigen::Index j = 0; j < model.dim(); ++j) out << ' ' << io::format_double(model.support_vectors(s, j));
        out << '\n';
    }
}

BinarySvmModel read_binary_model(io::KeyValueReader& in) {
    in.expect("svm_binary", 0);
    BinarySvmModel m;
    m.kernel.kind = parse_kernel_kind(in.expect_word("kernel"));
    m.kernel.gamma = in.expect_double("gamma");
    try {
        m.kernel.validate();
    } catch (const InvalidArgument& e) {
        in.fail(e.what());
    }
    m.C = in.expect_double("C");
    if (!(m.C > 0.0)) in.fail("C must be > 0");
    m.bias = in.expect_double("bias");
    const long long d = in.expect_int("dimension");
    const long long count = in.expect_int("support_vectors");
    if (d < 0 || count < 0) in.fail("negative dimension or support vector count");
    m.support_vectors.resize(count, d);
    m.sv_labels.resize(count);
    m.alphas.resize(count);
    for (long long s = 0; s < count; ++s) {
        const Vector row = in.read_vector(static_cast<std::size_t>(d + 2));
        if (row[0] != 1.0 && row[0] != -1.0) in.fail("support vector label must be +1 or -1");
        if (!(row[1] > 0.0)) in.fail("support vector multiplier must be > 0");
        m.sv_labels[s] = row[0];
        m.alphas[s] = row[1];
        m.support_vectors.row(s) = row.tail(d).transpose();
    }
    if (m.kernel.kind == KernelKind::linear) {
        m.w_explicit = m.support_vectors.transpose() * m.alphas.cwiseProduct(m.sv_labels);
    }
    return m;
}

}  // namespace lcc

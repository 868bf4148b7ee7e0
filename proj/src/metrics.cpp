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

#include "lcc/metrics.hpp"

#include "lcc/text_io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace lcc {

ConfusionMatrix::ConfusionMatrix(CountMatrix counts) : counts_(std::move(counts)) {
    if (counts_.rows() != counts_.cols() || counts_.rows() < 1) throw InvalidArgument("confusion matrix must be square");
    if ((counts_.array() < 0).any()) throw InvalidArgument("confusion matrix counts must be non-negative");
    total_ = counts_.sum();
    if (total_ <= 0) throw InvalidArgument("confusion matrix is empty");
}

ConfusionMatrix ConfusionMatrix::permuted(std::span<const int> perm) const {
    const int n = n_classes();
    if (static_cast<int>(perm.size()) != n) throw InvalidArgument("permutation size mismatch");
    CountMatrix out = CountMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = counts_(i, j);
    }
    return ConfusionMatrix(std::move(out));
}

ConfusionMatrix ConfusionMatrix::scaled(long long factor) const { return ConfusionMatrix(counts_ * factor); }

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted, int n_classes) {
    if (truth.size() != predicted.size()) {
        throw InvalidArgument("label sequences differ in length (" + std::to_string(truth.size()) + " vs " +
                              std::to_string(predicted.size()) + ")");
    }
    if (truth.empty()) throw InvalidArgument("label sequences are empty");
    if (n_classes < 1) throw InvalidArgument("class count must be positive");
    CountMatrix counts = CountMatrix::Zero(n_classes, n_classes);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int t = truth[i];
        const int p = predicted[i];
        if (t < 0 || t >= n_classes || p < 0 || p >= n_classes) {
            throw InvalidArgument("label out of range at position " + std::to_string(i) + " (truth " +
                                  std::to_string(t) + ", predicted " + std::to_string(p) + ")");
        }
        ++counts(t, p);
    }
    return ConfusionMatrix(std::move(counts));
}

double overall_accuracy(const ConfusionMatrix& cm) {
    return static_cast<double>(cm.counts().trace()) / static_cast<double>(cm.total());
}

double kappa(const ConfusionMatrix& cm) {
    const auto& c = cm.counts();
    const __int128 n = cm.total();
    __int128 chance = 0;  // sum_i row_i * col_i
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        chance += static_cast<__int128>(c.row(i).sum()) * c.col(i).sum();
    }
    const __int128 denom = n * n - chance;
    if (denom == 0) throw InvalidArgument("kappa undefined: chance agreement is 1");
    const __int128 numer = n * c.trace() - chance;
    return static_cast<double>(static_cast<long double>(numer) / static_cast<long double>(denom));
}

double kappa_variance(const ConfusionMatrix& cm) {
    const Matrix p = cm.proportions();
    const Vector row = p.rowwise().sum();
    const Vector col = p.colwise().sum().transpose();
    const double t1 = p.trace();
    const double t2 = row.dot(col);
    if (!(1.0 - t2 > 0.0)) throw InvalidArgument("kappa variance undefined: chance agreement is 1");
    double t3 = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) t3 += p(i, i) * (row[i] + col[i]);
    double t4 = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            const double s = row[j] + col[i];
            t4 += p(i, j) * s * s;
        }
    }
    const double q = 1.0 - t2;
    const double a = t1 * (1.0 - t1) / (q * q);
    const double b = 2.0 * (1.0 - t1) * (2.0 * t1 * t2 - t3) / (q * q * q);
    const double c = (1.0 - t1) * (1.0 - t1) * (t4 - 4.0 * t2 * t2) / (q * q * q * q);
    return std::max(0.0, (a + b + c) / static_cast<double>(cm.total()));
}

double z_compare(double kappa1, double var1, double kappa2, double var2) {
    if (var1 < 0.0 || var2 < 0.0) throw InvalidArgument("z_compare: variances must be non-negative");
    if (kappa1 == kappa2) return 0.0;
    if (!(var1 + var2 > 0.0)) throw InvalidArgument("z_compare: undefined for unequal kappas with zero variance");
    return std::abs(kappa1 - kappa2) / std::sqrt(var1 + var2);
}

Vector producer_accuracy(const ConfusionMatrix& cm) {
    const auto& c = cm.counts();
    Vector out(c.rows());
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        const auto row = c.row(i).sum();
        out[i] = row > 0 ? static_cast<double>(c(i, i)) / static_cast<double>(row) : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

Vector user_accuracy(const ConfusionMatrix& cm) {
    const auto& c = cm.counts();
    Vector out(c.cols());
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        const auto col = c.col(j).sum();
        out[j] = col > 0 ? static_cast<double>(c(j, j)) / static_cast<double>(col) : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

AccuracyReport make_report(std::string name, const ConfusionMatrix& cm) {
    AccuracyReport r{std::move(name), cm, overall_accuracy(cm), 0.0, 0.0, producer_accuracy(cm), user_accuracy(cm)};
    r.kappa = kappa(cm);
    r.kappa_var = kappa_variance(cm);
    return r;
}

ZEntry compare_reports(const AccuracyReport& a, const AccuracyReport& b) {
    const double z = z_compare(a.kappa, a.kappa_var, b.kappa, b.kappa_var);
    return {a.name, b.name, z, z_significant(z)};
}

namespace {

std::string fmt_ratio(double v) { return std::isnan(v) ? std::string("-") : fmt::format("{:.4f}", v); }

}  // namespace

std::string format_report_text(const std::vector<AccuracyReport>& reports, const std::vector<ZEntry>& z) {
    std::string out;
    for (const auto& r : reports) {
        const auto& c = r.cm.counts();
        const int n = r.cm.n_classes();
        out += fmt::format("== {} ==\n", r.name);
        out += "confusion matrix (rows = reference, columns = predicted)\n";
        out += fmt::format("{:>8}", "");
        for (int j = 0; j < n; ++j) out += fmt::format("{:>8}", j);
        out += fmt::format("{:>10}{:>10}\n", "total", "producer");
        for (int i = 0; i < n; ++i) {
            out += fmt::format("{:>8}", i);
            for (int j = 0; j < n; ++j) out += fmt::format("{:>8}", c(i, j));
            out += fmt::format("{:>10}{:>10}\n", c.row(i).sum(), fmt_ratio(r.producer[i]));
        }
        out += fmt::format("{:>8}", "total");
        for (int j = 0; j < n; ++j) out += fmt::format("{:>8}", c.col(j).sum());
        out += fmt::format("{:>10}\n", r.cm.total());
        out += fmt::format("{:>8}", "user");
        for (int j = 0; j < n; ++j) out += fmt::format("{:>8}", fmt_ratio(r.user[j]));
        out += "\n";
        out += fmt::format("overall accuracy: {:.4f}\n", r.overall);
        out += fmt::format("kappa: {:.4f} +/- {:.4f} (standard error)\n", r.kappa, std::sqrt(r.kappa_var));
    }
    if (!z.empty()) {
        out += fmt::format("== pairwise Z (critical value {:.2f}) ==\n", kZCritical95);
        for (const auto& e : z) {
            out += fmt::format("{} vs {}: Z = {:.4f} ({})\n", e.first, e.second, e.z,
                               e.significant ? "significant" : "not significant");
        }
    }
    return out;
}

std::string format_report_csv(const std::vector<AccuracyReport>& reports, const std::vector<ZEntry>& z) {
    std::string out = "section,name,row,col,value\n";
    for (const auto& r : reports) {
        const auto& c = r.cm.counts();
        for (int i = 0; i < r.cm.n_classes(); ++i) {
            for (int j = 0; j < r.cm.n_classes(); ++j) out += fmt::format("confusion,{},{},{},{}\n", r.name, i, j, c(i, j));
        }
        for (int i = 0; i < r.cm.n_classes(); ++i) {
            out += fmt::format("producer_accuracy,{},{},,{}\n", r.name, i, io::format_double(r.producer[i]));
            out += fmt::format("user_accuracy,{},,{},{}\n", r.name, i, io::format_double(r.user[i]));
        }
        out += fmt::format("overall_accuracy,{},,,{}\n", r.name, io::format_double(r.overall));
        out += fmt::format("kappa,{},,,{}\n", r.name, io::format_double(r.kappa));
        out += fmt::format("kappa_variance,{},,,{}\n", r.name, io::format_double(r.kappa_var));
    }
    for (const auto& e : z) {
        out += fmt::format("z,{} vs {},,,{}\n", e.first, e.second, io::format_double(e.z));
        out += fmt::format("z_significant,{} vs {},,,{}\n", e.first, e.second, e.significant ? 1 : 0);
    }
    return out;
}

}  // namespace lcc

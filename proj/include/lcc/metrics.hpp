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

#include <span>
#include <string>
#include <vector>

namespace lcc {

using CountMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Rows = reference (truth), columns = predicted.
class ConfusionMatrix {
  public:
    explicit ConfusionMatrix(CountMatrix counts);

    const CountMatrix& counts() const noexcept { return counts_; }
    int n_classes() const noexcept { return static_cast<int>(counts_.rows()); }
    long long total() const noexcept { return total_; }
    Matrix proportions() const { return counts_.cast<double>() / static_cast<double>(total_); }

    // Same counts with classes relabelled: new class perm[k] is old class k.
    ConfusionMatrix permuted(std::span<const int> perm) const;
    ConfusionMatrix scaled(long long factor) const;

  private:
    CountMatrix counts_;
    long long total_ = 0;
};

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted, int n_classes);

double overall_accuracy(const ConfusionMatrix& cm);

// (p_o - p_e) / (1 - p_e), evaluated from integer counts with a single final rounding.
double kappa(const ConfusionMatrix& cm);

// Large-sample (delta method) variance of kappa with p_ij = n_ij / N:
//   t1 = sum p_ii,  t2 = sum p_i+ p_+i,  t3 = sum p_ii (p_i+ + p_+i),
//   t4 = sum_ij p_ij (p_j+ + p_+i)^2
//   var = 1/N [ t1(1-t1)/(1-t2)^2 + 2(1-t1)(2 t1 t2 - t3)/(1-t2)^3
//             + (1-t1)^2 (t4 - 4 t2^2)/(1-t2)^4 ]
double kappa_variance(const ConfusionMatrix& cm);

inline constexpr double kZCritical95 = 1.96;

// |k1 - k2| / sqrt(v1 + v2).
double z_compare(double kappa1, double var1, double kappa2, double var2);
inline bool z_significant(double z) { return z > kZCritical95; }

// Producer's accuracy (per reference row) and user's accuracy (per predicted column); NaN for empty rows/columns.
Vector producer_accuracy(const ConfusionMatrix& cm);
Vector user_accuracy(const ConfusionMatrix& cm);

struct AccuracyReport {
    std::string name;
    ConfusionMatrix cm;
    double overall = 0.0;
    double kappa = 0.0;
    double kappa_var = 0.0;
    Vector producer;
    Vector user;
};

AccuracyReport make_report(std::string name, const ConfusionMatrix& cm);

struct ZEntry {
    std::string first;
    std::string second;
    double z = 0.0;
    bool significant = false;
};

ZEntry compare_reports(const AccuracyReport& a, const AccuracyReport& b);

std::string format_report_text(const std::vector<AccuracyReport>& reports, const std::vector<ZEntry>& z);
std::string format_report_csv(const std::vector<AccuracyReport>& reports, const std::vector<ZEntry>& z);

}  // namespace lcc

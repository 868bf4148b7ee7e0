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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcc/metrics.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace lcc;

namespace {

ConfusionMatrix cm(std::initializer_list<std::initializer_list<long long>> rows) {
    CountMatrix c(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (long long v : r) c(i, j++) = v;
        ++i;
    }
    return ConfusionMatrix(c);
}

ConfusionMatrix random_cm(Rng& rng, int n, long long max_count) {
    CountMatrix c(n, n);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = static_cast<long long>(rng.index(max_count));
    for (int i = 0; i < n; ++i) c(i, i) += max_count;
    return ConfusionMatrix(c);
}

}  // namespace

TEST_CASE("confusion matrix counts") {
    const std::vector<int> a = {0, 1, 0, 1};
    const auto perfect = confusion_matrix(a, a, 2);
    CHECK(perfect.counts()(0, 0) == 2);
    CHECK(perfect.counts()(1, 1) == 2);
    CHECK(perfect.counts()(0, 1) == 0);
    const auto m = confusion_matrix(std::vector<int>{0, 0, 1, 1}, std::vector<int>{0, 1, 1, 1}, 2);
    CHECK(m.counts() == cm({{1, 1}, {0, 2}}).counts());
    CHECK_THROWS_AS(confusion_matrix(std::vector<int>{}, std::vector<int>{}, 2), InvalidArgument);
    CHECK_THROWS_AS(confusion_matrix(std::vector<int>{0}, std::vector<int>{0, 1}, 2), InvalidArgument);
    CHECK_THROWS_AS(confusion_matrix(std::vector<int>{0}, std::vector<int>{2}, 2), InvalidArgument);
    CountMatrix neg = CountMatrix::Zero(2, 2);
    neg(0, 1) = -1;
    neg(0, 0) = 3;
    CHECK_THROWS_AS(ConfusionMatrix{neg}, InvalidArgument);
    CHECK_THROWS_AS(ConfusionMatrix{CountMatrix::Zero(2, 2)}, InvalidArgument);
}

TEST_CASE("accuracy and kappa fixtures") {
    const auto m = cm({{40, 10}, {20, 30}});
    CHECK(overall_accuracy(m) == 0.7);
    CHECK(kappa(m) == 0.4);
    CHECK(kappa_variance(m) == doctest::Approx(0.008064).epsilon(1e-12));
    const auto diag = cm({{5, 0, 0}, {0, 9, 0}, {0, 0, 1}});
    CHECK(overall_accuracy(diag) == 1.0);
    CHECK(kappa(diag) == 1.0);
    CHECK(std::abs(kappa_variance(diag)) <= 1e-12);
    CHECK_THROWS_AS(kappa(cm({{7, 0}, {0, 0}})), InvalidArgument);
}

TEST_CASE("kappa is 1 exactly for diagonal matrices and 0 under independence") {
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + static_cast<int>(rng.index(6));
        CountMatrix d = CountMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) d(i, i) = 1 + static_cast<long long>(rng.index(50));
        CHECK(kappa(ConfusionMatrix(d)) == 1.0);

        // Outer product of integer margins: cell (i, j) = row_i * col_j, so p_ij = p_i+ p_+j.
        CountMatrix ind(n, n);
        std::vector<long long> row(n), col(n);
        for (auto& v : row) v = 1 + static_cast<long long>(rng.index(20));
        for (auto& v : col) v = 1 + static_cast<long long>(rng.index(20));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) ind(i, j) = row[i] * col[j];
        }
        CHECK(std::abs(kappa(ConfusionMatrix(ind))) <= 1e-12);
    }
}

TEST_CASE("variance scales as 1/N") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const auto m = random_cm(rng, 2 + static_cast<int>(rng.index(5)), 30);
        CHECK(kappa_variance(m.scaled(4)) == doctest::Approx(kappa_variance(m) / 4.0).epsilon(1e-10));
        CHECK(kappa(m.scaled(4)) == doctest::Approx(kappa(m)).epsilon(1e-14));
    }
}

TEST_CASE("relabeling classes changes nothing") {
    Rng rng(6);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + static_cast<int>(rng.index(6));
        const auto m = random_cm(rng, n, 40);
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        rng.shuffle(std::span<int>(perm));
        const auto p = m.permuted(perm);
        CHECK(overall_accuracy(p) == overall_accuracy(m));
        CHECK(kappa(p) == doctest::Approx(kappa(m)).epsilon(1e-14));
        CHECK(kappa_variance(p) == doctest::Approx(kappa_variance(m)).epsilon(1e-12));
    }
}

TEST_CASE("variance agrees with a bootstrap") {
    const auto m = cm({{40, 10}, {20, 30}});
    const Matrix p = m.proportions();
    Rng rng(10);
    const int resamples = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (int b = 0; b < resamples; ++b) {
        CountMatrix c = CountMatrix::Zero(2, 2);
        for (int s = 0; s < 100; ++s) {
            double u = rng.uniform();
            Eigen::Index cell = 0;
            while (cell < 3 && u >= p.data()[cell]) u -= p.data()[cell++];
            c.data()[cell] += 1;
        }
        const double k = kappa(ConfusionMatrix(c));
        sum += k;
        sum_sq += k * k;
    }
    const double mean = sum / resamples;
    const double var = sum_sq / resamples - mean * mean;
    CHECK(kappa_variance(m) == doctest::Approx(var).epsilon(0.2));
}

TEST_CASE("Z statistic") {
    CHECK(z_compare(0.7, 0.001, 0.7, 0.001) == 0.0);
    CHECK_FALSE(z_significant(0.0));
    const double z = z_compare(0.6, 0.0004, 0.5, 0.0005);
    CHECK(z == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
    CHECK(z_significant(z));
    CHECK(z_compare(0.5, 0.0005, 0.6, 0.0004) == z);
    CHECK_FALSE(z_significant(1.96));
    CHECK(z_significant(1.9600001));
    CHECK(kZCritical95 == 1.96);
    CHECK_THROWS_AS(z_compare(0.6, 0.0, 0.5, 0.0), InvalidArgument);
    CHECK(z_compare(0.6, 0.0, 0.6, 0.0) == 0.0);
}

TEST_CASE("producer and user accuracy") {
    const auto m = cm({{40, 10}, {20, 30}});
    CHECK(producer_accuracy(m)(0) == 0.8);
    CHECK(producer_accuracy(m)(1) == 0.6);
    CHECK(user_accuracy(m)(0) == doctest::Approx(40.0 / 60.0));
    CHECK(user_accuracy(m)(1) == 0.75);
    const auto gap = cm({{3, 0, 1}, {0, 0, 0}, {0, 0, 2}});
    CHECK(std::isnan(producer_accuracy(gap)(1)));
    CHECK(std::isnan(user_accuracy(gap)(1)));
}

TEST_CASE("reports") {
    const auto a = make_report("svm", cm({{40, 10}, {20, 30}}));
    const auto b = make_report("mlc", cm({{45, 5}, {10, 40}}));
    const auto z = compare_reports(a, b);
    CHECK(z.first == "svm");
    CHECK(z.second == "mlc");
    const std::string text = format_report_text({a, b}, {z});
    CHECK(text.find("overall accuracy: 0.7000") != std::string::npos);
    CHECK(text.find("kappa: 0.4000") != std::string::npos);
    CHECK(text.find("1.96") != std::string::npos);
    const std::string csv = format_report_csv({a, b}, {z});
    CHECK(csv.rfind("section,name,row,col,value\n", 0) == 0);
    CHECK(csv.find("kappa,svm,,,0.4") != std::string::npos);
}

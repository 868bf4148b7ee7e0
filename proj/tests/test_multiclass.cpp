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

#include "lcc/multiclass.hpp"
#include "lcc/text_io.hpp"
#include "support/oracles.hpp"

#include <numeric>
#include <sstream>

using namespace lcc;

namespace {

// Gaussian blobs around well separated centres.
Dataset blobs(int classes, int per_class, int dim, std::uint64_t seed, double spread = 0.3) {
    Rng rng(seed);
    const Matrix centres = lcc::testing::random_matrix(rng, classes, dim, -3.0, 3.0);
    Matrix f(classes * per_class, dim);
    std::vector<int> y;
    for (int c = 0; c < classes; ++c) {
        for (int i = 0; i < per_class; ++i) {
            for (int d = 0; d < dim; ++d) f(c * per_class + i, d) = centres(c, d) + spread * rng.normal();
            y.push_back(c);
        }
    }
    return Dataset(f, y);
}

TrainConfig config() {
    TrainConfig cfg;
    cfg.C = 100.0;
    return cfg;
}

}  // namespace

TEST_CASE("pair counts follow n(n-1)/2") {
    CHECK(pair_count(2) == 1);
    CHECK(pair_count(7) == 21);
    CHECK(pair_count(8) == 28);
    for (int n : {2, 3, 7, 8}) {
        const auto m = train_one_vs_one(blobs(n, 6, 3, 100 + n), config(), KernelSpec::rbf(2.0));
        REQUIRE(m.pairs.size() == pair_count(n));
        int k = 0;
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                CHECK(m.pairs[k].class_a == a);
                CHECK(m.pairs[k].class_b == b);
                ++k;
            }
        }
    }
}

TEST_CASE("votes are conserved and predictions in range") {
    Rng rng(4);
    for (int n : {2, 5, 8}) {
        const auto m = train_one_vs_one(blobs(n, 8, 4, 7 * n), config(), KernelSpec::rbf(0.5));
        for (int t = 0; t < 200; ++t) {
            const Vector x = lcc::testing::random_vector(rng, 4, -5.0, 5.0);
            const auto votes = vote_tally(m, x);
            CHECK(std::accumulate(votes.begin(), votes.end(), 0) == static_cast<int>(pair_count(n)));
            const int p = predict(m, x);
            CHECK(p >= 0);
            CHECK(p < n);
            CHECK(p == argmax_lowest(votes));
        }
        CHECK_THROWS_AS(vote_tally(m, Vector::Zero(3)), InvalidArgument);
    }
}

TEST_CASE("three classes on a line vote (2,1,0) near class 0") {
    Matrix f(6, 1);
    f << 0.0, 0.5, 5.0, 5.5, 10.0, 10.5;
    const Dataset ds(f, {0, 0, 1, 1, 2, 2});
    const auto m = train_one_vs_one(ds, config(), KernelSpec::linear());
    const auto votes = vote_tally(m, (Vector(1) << 0.2).finished());
    CHECK(votes == std::vector<int>{2, 1, 0});
    CHECK(predict(m, (Vector(1) << 0.2).finished()) == 0);
}

TEST_CASE("ties go to the lowest class id") {
    CHECK(argmax_lowest({2, 1, 0}) == 0);
    CHECK(argmax_lowest({1, 1, 1}) == 0);
    CHECK(argmax_lowest({0, 2, 2, 1}) == 1);
}

TEST_CASE("pair models equal a direct two-class retrain") {
    const Dataset ds = blobs(4, 10, 3, 77, 1.0);
    const auto m = train_one_vs_one(ds, config(), KernelSpec::rbf(2.0));
    for (const auto& pair : m.pairs) {
        std::vector<Eigen::Index> rows;
        std::vector<int> y;
        for (Eigen::Index i = 0; i < ds.size(); ++i) {
            if (ds.y(i) == pair.class_a || ds.y(i) == pair.class_b) {
                rows.push_back(i);
                y.push_back(ds.y(i) == pair.class_a ? 1 : -1);
            }
        }
        Matrix x(static_cast<Eigen::Index>(rows.size()), ds.dim());
        for (std::size_t r = 0; r < rows.size(); ++r) x.row(static_cast<Eigen::Index>(r)) = ds.x(rows[r]);
        const auto direct = train_binary(x, y, config(), KernelSpec::rbf(2.0));
        CHECK(direct.support_vectors == pair.model.support_vectors);
        CHECK(direct.alphas == pair.model.alphas);
        for (std::size_t s = 0; s < direct.sv_indices.size(); ++s) {
            CHECK(rows[static_cast<std::size_t>(direct.sv_indices[s])] == pair.model.sv_indices[s]);
        }
    }
}

TEST_CASE("threaded training is identical to sequential training") {
    const Dataset ds = blobs(6, 12, 5, 3, 0.8);
    const auto a = train_one_vs_one(ds, config(), KernelSpec::rbf(2.0), 1);
    const auto b = train_one_vs_one(ds, config(), KernelSpec::rbf(2.0), 4);
    std::stringstream sa, sb;
    write_multiclass_model(sa, a);
    write_multiclass_model(sb, b);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("training errors") {
    const Dataset one(Matrix::Zero(3, 2), {0, 0, 0});
    CHECK_THROWS_AS(train_one_vs_one(one, config(), KernelSpec::linear()), InvalidArgument);
    const Dataset gap(Matrix::Random(4, 2), {0, 0, 2, 2});
    try {
        train_one_vs_one(gap, config(), KernelSpec::linear());
        FAIL("expected error");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("class 1") != std::string::npos);
    }
    TrainConfig tight = config();
    tight.max_passes = 1;
    try {
        train_one_vs_one(blobs(3, 20, 2, 5, 2.0), tight, KernelSpec::rbf(2.0));
        FAIL("expected error");
    } catch (const TrainingError& e) {
        CHECK(std::string(e.what()).find("pair (0, 1)") != std::string::npos);
    }
}

TEST_CASE("model text round trip") {
    const Dataset ds = blobs(4, 7, 3, 21, 0.7);
    const auto m = train_one_vs_one(ds, config(), KernelSpec::rbf(1.5));
    std::stringstream ss;
    write_multiclass_model(ss, m);
    io::KeyValueReader reader(ss, "mem");
    const auto r = read_multiclass_model(reader);
    CHECK(r.n_classes == 4);
    CHECK(r.pairs.size() == 6);
    CHECK(predict_all(r, ds.features()) == predict_all(m, ds.features()));
    std::stringstream again;
    write_multiclass_model(again, r);
    CHECK(again.str() == ss.str());
}

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

#include "lcc/data.hpp"
#include "lcc/text_io.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

using namespace lcc;

namespace {

Dataset blocks(int per_class, int classes, int dim = 2) {
    Matrix f(per_class * classes, dim);
    std::vector<int> y;
    for (int c = 0; c < classes; ++c) {
        for (int i = 0; i < per_class; ++i) {
            f.row(c * per_class + i).setConstant(c * 1000 + i);
            y.push_back(c);
        }
    }
    return Dataset(f, y);
}

}  // namespace

TEST_CASE("csv parsing") {
    const auto ds = parse_samples("f1,f2,label\n0.5,1,0\n2,3.25,1\n-1,4,1\n");
    CHECK(ds.size() == 3);
    CHECK(ds.dim() == 2);
    CHECK(ds.n_classes() == 2);
    CHECK(ds.x(1)(1) == 3.25);
    CHECK(ds.y(2) == 1);
    CHECK(ds.class_counts() == std::vector<Eigen::Index>{1, 2});

    const auto crlf = parse_samples("f1,label\r\n1,0\r\n2,1\r\n");
    CHECK(crlf.size() == 2);
}

TEST_CASE("csv errors name the line") {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_samples(text, "t.csv");
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("f1,f2,label\n1,2,0\n3,1\n") == 3);
    CHECK(line_of("f1,f2,label\n1,x,0\n") == 2);
    CHECK(line_of("f1,f2,label\n1,2,-1\n") == 2);
    CHECK(line_of("f1,f2,label\n1,2,0.5\n") == 2);
    CHECK(line_of("f1,f2,label\n1,inf,0\n") == 2);
    CHECK_THROWS_AS(parse_samples(""), DataError);
    CHECK_THROWS_AS(parse_samples("f1,label\n"), DataError);
}

TEST_CASE("2700-row file loads") {
    lcc::testing::TempDir dir("data");
    Rng rng(1);
    Matrix f = lcc::testing::random_matrix(rng, 2700, 6);
    std::vector<int> y(2700);
    for (int i = 0; i < 2700; ++i) y[i] = i % 7;
    save_samples(Dataset(f, y), dir / "train.csv");
    const auto ds = load_samples(dir / "train.csv");
    CHECK(ds.size() == 2700);
    CHECK(ds.n_classes() == 7);
    CHECK(ds.features() == f);
    CHECK_THROWS_AS(load_samples(dir / "missing.csv"), DataError);
}

TEST_CASE("dataset invariants") {
    Matrix f(2, 1);
    f << 1.0, std::nan("");
    CHECK_THROWS_AS(Dataset(f, {0, 1}), DataError);
    CHECK_THROWS_AS(Dataset(Matrix::Zero(2, 1), {0}), InvalidArgument);
    CHECK_THROWS_AS(Dataset(Matrix::Zero(2, 1), {0, -1}), InvalidArgument);
    const Dataset ds(Matrix::Zero(2, 3), {0, 2});
    CHECK(ds.n_classes() == 3);
    CHECK_THROWS_AS(ds.require_class_counts(1, "training"), InvalidArgument);
    CHECK(ds.truncate_features(2).dim() == 2);
    CHECK_THROWS_AS(ds.truncate_features(4), InvalidArgument);
}

TEST_CASE("split example: 100 per class, fraction 0.5") {
    const auto ds = blocks(100, 2);
    const auto s = split_random(ds, 0.5, 7);
    CHECK(s.train.size() == 100);
    CHECK(s.test.size() == 100);
    CHECK(s.train.class_counts() == std::vector<Eigen::Index>{50, 50});
    std::set<double> a, b;
    for (Eigen::Index i = 0; i < s.train.size(); ++i) a.insert(s.train.x(i)(0));
    for (Eigen::Index i = 0; i < s.test.size(); ++i) b.insert(s.test.x(i)(0));
    for (double v : a) CHECK(b.count(v) == 0);

    const auto again = split_random(ds, 0.5, 7);
    CHECK(again.train.features() == s.train.features());
    CHECK(again.test.labels() == s.test.labels());
    CHECK(split_random(ds, 0.5, 8).train.features() != s.train.features());

    CHECK_THROWS_AS(split_random(ds, 1.0, 7), InvalidArgument);
    CHECK_THROWS_AS(split_random(ds, 0.0, 7), InvalidArgument);
}

TEST_CASE("split refuses singleton classes by name") {
    const Dataset ds(Matrix::Zero(5, 1), {0, 0, 1, 2, 2});
    try {
        split_random(ds, 0.5, 1);
        FAIL("expected error");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("class 1") != std::string::npos);
    }
}

TEST_CASE("split is a stratified partition") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const int classes = 2 + static_cast<int>(rng.index(5));
        std::vector<int> y;
        for (int c = 0; c < classes; ++c) {
            const int n = 2 + static_cast<int>(rng.index(40));
            for (int i = 0; i < n; ++i) y.push_back(c);
        }
        rng.shuffle(std::span<int>(y));
        Matrix f(static_cast<Eigen::Index>(y.size()), 1);
        for (Eigen::Index i = 0; i < f.rows(); ++i) f(i, 0) = static_cast<double>(i);
        const Dataset ds(f, y);
        const double fraction = rng.uniform(0.05, 0.95);
        const auto s = split_random(ds, fraction, rng.next());
        CHECK(s.train.size() + s.test.size() == ds.size());
        std::vector<double> all;
        for (Eigen::Index i = 0; i < s.train.size(); ++i) all.push_back(s.train.x(i)(0));
        for (Eigen::Index i = 0; i < s.test.size(); ++i) all.push_back(s.test.x(i)(0));
        std::sort(all.begin(), all.end());
        CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
        const auto total = ds.class_counts();
        const auto train = s.train.class_counts();
        for (int c = 0; c < classes; ++c) {
            CHECK(std::abs(static_cast<double>(train[c]) - fraction * static_cast<double>(total[c])) <= 1.0);
            CHECK(train[c] >= 1);
            CHECK(train[c] <= total[c] - 1);
        }
    }
}

TEST_CASE("raster round trip") {
    lcc::testing::TempDir dir("raster");
    RasterCube ones(4, 4, 1, 1.0f);
    save_raster(ones, dir / "ones.tcr");
    const std::string bytes = io::read_file(dir / "ones.tcr");
    CHECK(bytes.substr(0, 15) == "TCRASTER 4 4 1\n");
    CHECK(bytes.size() == 15 + 16 * 4);
    CHECK(load_raster(dir / "ones.tcr") == ones);

    Rng rng(2);
    std::vector<float> values(3 * 5 * 65);
    for (auto& v : values) v = static_cast<float>(rng.normal() * 1e6);
    values[7] = -0.0f;
    values[8] = std::numeric_limits<float>::denorm_min();
    const RasterCube cube(3, 5, 65, values);
    const auto back = parse_raster(encode_raster(cube));
    CHECK(back.bands() == 65);
    CHECK(std::memcmp(back.data().data(), values.data(), values.size() * sizeof(float)) == 0);
    CHECK(cube.at(2, 4, 1) == values[2 * 15 + 4 * 3 + 1]);
    CHECK(cube.band(2)(4, 1) == cube.at(2, 4, 1));
}

TEST_CASE("raster errors") {
    RasterCube two(2, 2, 2, 1.0f);
    std::string bytes = encode_raster(two);
    bytes.resize(bytes.size() - 16);
    CHECK_THROWS_AS(parse_raster(bytes), DataError);
    CHECK_THROWS_AS(parse_raster("NOTRASTER 1 1 1\n"), DataError);

    std::string bad = encode_raster(RasterCube(2, 2, 1, 0.0f));
    const float nan = std::numeric_limits<float>::quiet_NaN();
    std::memcpy(bad.data() + bad.size() - 4, &nan, 4);
    try {
        parse_raster(bad, "x.tcr");
        FAIL("expected error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
}

TEST_CASE("number formatting round-trips") {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.normal() * std::pow(10.0, rng.uniform(-300, 300));
        double back = 0.0;
        REQUIRE(io::parse_double(io::format_double(v), back));
        CHECK(back == v);
    }
    double out = 0.0;
    CHECK_FALSE(io::parse_double("1.5x", out));
    long long n = 0;
    CHECK_FALSE(io::parse_int("", n));
}

TEST_CASE("sha256 known answer") {
    CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

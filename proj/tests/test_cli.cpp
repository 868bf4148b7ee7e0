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

#include "lcc/cli.hpp"
#include "lcc/data.hpp"
#include "lcc/synth.hpp"
#include "lcc/text_io.hpp"
#include "support/oracles.hpp"

#include <set>
#include <sstream>

using namespace lcc;
using lcc::testing::TempDir;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result lcc_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

// Seven tight clusters in two dimensions, three samples each.
void write_toy(const std::filesystem::path& path) {
    Matrix f(21, 2);
    std::vector<int> y;
    for (int c = 0; c < 7; ++c) {
        for (int i = 0; i < 3; ++i) {
            f(c * 3 + i, 0) = 3.0 * c + 0.1 * i;
            f(c * 3 + i, 1) = (c % 2) * 2.0 - 0.1 * i;
            y.push_back(c);
        }
    }
    save_samples(Dataset(f, y), path);
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
    std::string text = "label\n";
    for (int v : labels) text += std::to_string(v) + "\n";
    io::write_file_atomic(path, text);
}

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(lcc_run({"--help"}).code == 0);
    CHECK(lcc_run({"train", "--help"}).code == 0);
    CHECK(lcc_run({}).code == 2);
    CHECK(lcc_run({"bogus"}).code == 2);
    CHECK(lcc_run({"train", "--input", "x.csv"}).code == 2);
}

TEST_CASE("train and classify an SVM") {
    TempDir dir("cli_train");
    write_toy(dir / "toy.csv");
    const auto r = lcc_run({"train", "-i", (dir / "toy.csv").string(), "-o", (dir / "m.txt").string(), "--classifier",
                            "svm", "--gamma", "2", "--c", "5000"});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "21 binary classifiers"));
    CHECK(contains(r.out, "training time"));
    CHECK(std::filesystem::exists(dir / "m.txt.manifest.json"));

    const auto c = lcc_run({"classify", "-m", (dir / "m.txt").string(), "-i", (dir / "toy.csv").string(), "-o",
                            (dir / "pred.csv").string()});
    REQUIRE(c.code == 0);
    const auto e = lcc_run({"evaluate", "-t", (dir / "toy.csv").string(), "-p", (dir / "pred.csv").string()});
    REQUIRE(e.code == 0);
    CHECK(contains(e.out, "overall accuracy: 1.0000"));
    CHECK(contains(e.out, "kappa: 1.0000"));
}

TEST_CASE("exit codes for data, usage and training failures") {
    TempDir dir("cli_codes");
    write_toy(dir / "toy.csv");
    const auto missing = (dir / "nope.csv").string();
    const auto r = lcc_run({"train", "-i", missing, "-o", (dir / "m.txt").string()});
    CHECK(r.code == 3);
    CHECK(contains(r.err, missing));

    const auto c = lcc_run({"train", "-i", (dir / "toy.csv").string(), "-o", (dir / "m.txt").string(), "--c", "-1"});
    CHECK(c.code == 2);
    CHECK(contains(c.err, "C must be > 0"));
    CHECK(lcc_run({"train", "-i", (dir / "toy.csv").string(), "-o", (dir / "m.txt").string(), "--classifier", "tree"})
              .code == 2);
    CHECK(lcc_run({"train", "-i", (dir / "toy.csv").string(), "-o", (dir / "m.txt").string(), "--gamma", "0"}).code ==
          2);

    const auto t = lcc_run({"train", "-i", (dir / "toy.csv").string(), "-o", (dir / "m.txt").string(),
                            "--max-passes", "1"});
    CHECK(t.code == 4);
    CHECK_FALSE(std::filesystem::exists(dir / "m.txt"));

    io::write_file_atomic(dir / "bad.csv", "f1,label\n1,0\nx,1\n");
    const auto p = lcc_run({"train", "-i", (dir / "bad.csv").string(), "-o", (dir / "m.txt").string()});
    CHECK(p.code == 3);
    CHECK(contains(p.err, ":3:"));
}

TEST_CASE("MLC and MLP models through the CLI") {
    TempDir dir("cli_models");
    write_toy(dir / "toy.csv");
    for (std::string kind : {"mlc", "mlp"}) {
        const auto model = (dir / (kind + ".txt")).string();
        const auto r = lcc_run({"train", "-i", (dir / "toy.csv").string(), "-o", model, "--classifier", kind,
                                "--epochs", "200"});
        REQUIRE(r.code == 0);
        const auto c = lcc_run({"classify", "-m", model, "-i", (dir / "toy.csv").string(), "-o",
                                (dir / (kind + ".csv")).string()});
        CHECK(c.code == 0);
    }
    CHECK(contains(io::read_file(dir / "mlc.txt"), "mlc"));
    CHECK(io::read_file(dir / "mlp.txt").rfind("mlp", 0) == 0);
}

TEST_CASE("classifying rasters") {
    TempDir dir("cli_raster");
    REQUIRE(lcc_run({"synth", "--kind", "samples", "-o", (dir / "s").string(), "--test-per-class", "2"}).code == 0);
    REQUIRE(lcc_run({"synth", "--kind", "raster", "-o", (dir / "r").string(), "--width", "16", "--height", "4"}).code ==
            0);
    REQUIRE(lcc_run({"train", "-i", (dir / "s" / "train.csv").string(), "-o", (dir / "m.txt").string()}).code == 0);
    const auto c = lcc_run({"classify", "-m", (dir / "m.txt").string(), "-i", (dir / "r" / "scene.tcr").string(), "-o",
                            (dir / "labels.tcr").string()});
    REQUIRE(c.code == 0);
    const auto labels = load_raster(dir / "labels.tcr");
    CHECK(labels.bands() == 1);
    CHECK(labels.width() == 16);
    std::set<float> distinct(labels.data().begin(), labels.data().end());
    CHECK(distinct.size() <= 8);
    CHECK(*distinct.rbegin() <= 7.0f);

    save_raster(RasterCube(4, 4, 6, 1.0f), dir / "six.tcr");
    Matrix f = Matrix::Random(6, 5);
    save_samples(Dataset(f, {0, 0, 0, 1, 1, 1}), dir / "five.csv");
    REQUIRE(lcc_run({"train", "-i", (dir / "five.csv").string(), "-o", (dir / "five.txt").string()}).code == 0);
    const auto bad = lcc_run({"classify", "-m", (dir / "five.txt").string(), "-i", (dir / "six.tcr").string(), "-o",
                              (dir / "x.tcr").string()});
    CHECK(bad.code == 3);
    CHECK(contains(bad.err, "expects 5"));
    CHECK(contains(bad.err, "6 bands"));
}

TEST_CASE("evaluation reports") {
    TempDir dir("cli_eval");
    std::vector<int> truth, pred;
    auto fill = [&](int t, int p, int n) {
        for (int i = 0; i < n; ++i) {
            truth.push_back(t);
            pred.push_back(p);
        }
    };
    fill(0, 0, 40);
    fill(0, 1, 10);
    fill(1, 0, 20);
    fill(1, 1, 30);
    write_labels(dir / "truth.csv", truth);
    write_labels(dir / "a.csv", pred);
    write_labels(dir / "b.csv", pred);
    const auto r = lcc_run({"evaluate", "-t", (dir / "truth.csv").string(), "-p", (dir / "a.csv").string(), "-p",
                            (dir / "b.csv").string(), "--names", "first,second", "--csv", (dir / "r.csv").string()});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "overall accuracy: 0.7000"));
    CHECK(contains(r.out, "kappa: 0.4000"));
    CHECK(contains(r.out, "first vs second: Z = 0.0000 (not significant)"));
    CHECK(std::filesystem::exists(dir / "r.csv"));

    write_labels(dir / "short.csv", {0, 1});
    CHECK(lcc_run({"evaluate", "-t", (dir / "truth.csv").string(), "-p", (dir / "short.csv").string()}).code == 3);
    CHECK(lcc_run({"evaluate", "-t", (dir / "truth.csv").string(), "-p", (dir / "a.csv").string(), "--names", "x,y"})
              .code == 2);
}

TEST_CASE("destripe command") {
    TempDir dir("cli_destripe");
    save_raster(RasterCube(256, 256, 1, 100.0f), dir / "flat.tcr");
    const auto flat = lcc_run({"destripe", "-i", (dir / "flat.tcr").string()});
    REQUIRE(flat.code == 0);
    CHECK(contains(flat.out, "0 bins suppressed"));
    const auto out = load_raster(dir / "flat_destriped.tcr");
    float worst = 0.0f;
    for (float v : out.data()) worst = std::max(worst, std::abs(v - 100.0f));
    CHECK(worst < 1e-4f);

    REQUIRE(lcc_run({"synth", "--kind", "striped", "-o", dir.path().string(), "--width", "256", "--height", "256"})
                .code == 0);
    const auto striped = lcc_run({"destripe", "-i", (dir / "striped.tcr").string(), "-o", (dir / "clean_out.tcr").string(),
                                  "--period", "4"});
    REQUIRE(striped.code == 0);
    CHECK(contains(striped.out, "stripe energy"));
    CHECK_FALSE(contains(striped.out, " 0 bins suppressed"));
    CHECK(lcc_run({"destripe", "-i", (dir / "striped.tcr").string(), "--block", "100"}).code == 2);
    save_raster(RasterCube(64, 64, 1, 1.0f), dir / "small.tcr");
    CHECK(lcc_run({"destripe", "-i", (dir / "small.tcr").string()}).code == 3);
}

TEST_CASE("experiment output and rerun") {
    TempDir dir("cli_exp");
    const auto r = lcc_run({"experiment", "-o", (dir / "e").string(), "--classifiers", "svm,mlc", "--per-class-test",
                            "10"});
    REQUIRE(r.code == 0);
    const std::string csv = io::read_file(dir / "e" / "results.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 14);
    CHECK(std::filesystem::exists(dir / "e" / "figure.svg"));
    CHECK(lcc_run({"experiment", "-o", (dir / "x").string(), "--feature-counts", "10,5"}).code == 2);

    const auto again = lcc_run({"rerun", (dir / "e" / "manifest.json").string(), "-o", (dir / "e2").string()});
    REQUIRE(again.code == 0);
    CHECK(io::read_file(dir / "e2" / "results.csv") == csv);
    CHECK(io::read_file(dir / "e2" / "figure.svg") == io::read_file(dir / "e" / "figure.svg"));
}

TEST_CASE("rerun refuses changed inputs") {
    TempDir dir("cli_rerun");
    write_toy(dir / "toy.csv");
    REQUIRE(lcc_run({"train", "-i", (dir / "toy.csv").string(), "-o", (dir / "m.txt").string()}).code == 0);
    REQUIRE(lcc_run({"rerun", (dir / "m.txt.manifest.json").string(), "-o", (dir / "m2.txt").string()}).code == 0);
    CHECK(io::read_file(dir / "m.txt") == io::read_file(dir / "m2.txt"));
    io::write_file_atomic(dir / "toy.csv", "f1,f2,label\n0,0,0\n1,1,1\n");
    const auto r = lcc_run({"rerun", (dir / "m.txt.manifest.json").string(), "-o", (dir / "m3.txt").string()});
    CHECK(r.code == 3);
    CHECK(contains(r.err, "changed"));
}

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

#include "lcc/synth.hpp"

#include "lcc/metrics.hpp"
#include "lcc/mlc.hpp"
#include "lcc/mlp.hpp"
#include "lcc/multiclass.hpp"
#include "lcc/parallel.hpp"
#include "lcc/random.hpp"
#include "lcc/text_io.hpp"

#include <Eigen/Cholesky>
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace lcc {

void SceneSpec::validate() const {
    if (n_classes() < 2) throw InvalidArgument("scene needs at least 2 classes");
    if (dims() < 1) throw InvalidArgument("scene needs at least 1 feature");
    if (train_per_class < 2 || test_per_class < 2) throw InvalidArgument("scene needs at least 2 samples per class");
    for (std::size_t k = 0; k < classes.size(); ++k) {
        const auto& c = classes[k];
        if (c.mean.size() != dims() || c.covariance.rows() != dims() || c.covariance.cols() != dims()) {
            throw InvalidArgument("scene class " + std::to_string(k) + " has inconsistent dimensions");
        }
        if (!c.mean.allFinite() || !c.covariance.allFinite()) {
            throw InvalidArgument("scene class " + std::to_string(k) + " has non-finite parameters");
        }
    }
}

SceneSpec default_scene_spec(const DefaultSceneParams& p, std::uint64_t seed) {
    if (p.n_classes < 2 || p.dims < 1) throw InvalidArgument("default scene needs >= 2 classes and >= 1 feature");
    if (p.class_noise_scale.empty()) throw InvalidArgument("class noise scales must not be empty");
    const int k = p.n_classes;
    const int d = p.dims;
    Matrix simplex = Matrix::Identity(k, k).array() - 1.0 / k;
    simplex /= simplex.row(0).norm();

    Rng rng(p.geometry_seed);
    Matrix projection(k, d);
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < d; ++c) projection(r, c) = rng.normal();
    }
    projection.array().rowwise() /= projection.colwise().norm().array();

    Matrix means = simplex * projection;
    for (int j = 0; j < d; ++j) means.col(j) *= p.signal / std::sqrt(static_cast<double>(j + 1));
    means.array() += p.base;

    Matrix correlation(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) correlation(i, j) = std::pow(p.band_correlation, std::abs(i - j));
    }
    SceneSpec spec;
    spec.seed = seed;
    for (int c = 0; c < k; ++c) {
        const double s = p.noise * p.class_noise_scale[static_cast<std::size_t>(c) % p.class_noise_scale.size()];
        spec.classes.push_back({means.row(c).transpose(), s * s * correlation});
    }
    return spec;
}

namespace {

std::vector<Matrix> class_factors(const SceneSpec& spec) {
    std::vector<Matrix> factors;
    for (std::size_t k = 0; k < spec.classes.size(); ++k) {
        Eigen::LLT<Matrix> llt(spec.classes[k].covariance);
        if (llt.info() != Eigen::Success) {
            throw InvalidArgument("scene class " + std::to_string(k) + ": covariance is not positive definite");
        }
        factors.emplace_back(llt.matrixL());
    }
    return factors;
}

void draw_into(const SceneSpec& spec, const std::vector<Matrix>& factors, int per_class, Rng& rng, Matrix& x,
               std::vector<int>& y) {
    const auto d = spec.dims();
    x.resize(static_cast<Eigen::Index>(per_class) * spec.n_classes(), d);
    y.clear();
    Vector z(d);
    Eigen::Index row = 0;
    for (int k = 0; k < spec.n_classes(); ++k) {
        for (int i = 0; i < per_class; ++i, ++row) {
            for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
            Vector v = spec.classes[static_cast<std::size_t>(k)].mean + factors[static_cast<std::size_t>(k)] * z;
            if (spec.warp != 0.0) v = v.array() + spec.warp * (std::numbers::pi * v.array()).sin();
            x.row(row) = v.transpose();
            y.push_back(k);
        }
    }
}

constexpr std::uint64_t kTestStream = 0x9E3779B97F4A7C15ull;

}  // namespace

Split generate_scene(const SceneSpec& spec) {
    spec.validate();
    const auto factors = class_factors(spec);
    Rng train_rng(spec.seed);
    Rng test_rng(spec.seed ^ kTestStream);
    Matrix xtr;
    Matrix xte;
    std::vector<int> ytr;
    std::vector<int> yte;
    draw_into(spec, factors, spec.train_per_class, train_rng, xtr, ytr);
    draw_into(spec, factors, spec.test_per_class, test_rng, xte, yte);
    return {Dataset(std::move(xtr), std::move(ytr), spec.n_classes()),
            Dataset(std::move(xte), std::move(yte), spec.n_classes())};
}

Matrix add_stripes(const Eigen::Ref<const Matrix>& band, double period_px, double amplitude, StripeAxis axis) {
    if (!(period_px >= 2.0)) throw InvalidArgument("stripe period must be >= 2 pixels");
    Matrix out = band;
    const double w = 2.0 * std::numbers::pi / period_px;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            const double index = static_cast<double>(axis == StripeAxis::rows ? r : c);
            out(r, c) += amplitude * std::sin(w * index);
        }
    }
    return out;
}

Matrix textured_background(int rows, int cols, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw InvalidArgument("background dimensions must be positive");
    Rng rng(seed);
    Matrix out = Matrix::Constant(rows, cols, 100.0);
    struct Wave {
        double fr, fc, phase, amp;
    };
    std::vector<Wave> waves;
    for (int i = 0; i < 4; ++i) {
        // At most one cycle per 64 px along each axis.
        waves.push_back({rng.uniform(-1.0, 1.0) / 64.0, rng.uniform(-1.0, 1.0) / 64.0,
                         rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(3.0, 8.0)});
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            double v = 0.0;
            for (const auto& w : waves) {
                v += w.amp * std::sin(2.0 * std::numbers::pi * (w.fr * static_cast<double>(r) + w.fc * static_cast<double>(c)) + w.phase);
            }
            out(r, c) += v + rng.normal();
        }
    }
    return out;
}

RasterCube scene_raster(const SceneSpec& spec, int width, int height, std::vector<int>& truth) {
    spec.validate();
    if (width < 1 || height < 1) throw InvalidArgument("raster dimensions must be positive");
    const auto factors = class_factors(spec);
    Rng rng(spec.seed);
    const int bands = static_cast<int>(spec.dims());
    RasterCube cube(width, height, bands);
    truth.assign(static_cast<std::size_t>(width) * height, 0);
    Vector z(bands);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const int k = std::min(spec.n_classes() - 1, c * spec.n_classes() / width);
            truth[static_cast<std::size_t>(r) * width + c] = k;
            for (int j = 0; j < bands; ++j) z[j] = rng.normal();
            Vector v = spec.classes[static_cast<std::size_t>(k)].mean + factors[static_cast<std::size_t>(k)] * z;
            if (spec.warp != 0.0) v = v.array() + spec.warp * (std::numbers::pi * v.array()).sin();
            for (int b = 0; b < bands; ++b) cube.at(b, r, c) = static_cast<float>(v[b]);
        }
    }
    return cube;
}

std::string classifier_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::svm: return "svm";
        case ClassifierKind::mlc: return "mlc";
        case ClassifierKind::mlp: return "mlp";
    }
    return "?";
}

ClassifierKind parse_classifier(const std::string& name) {
    if (name == "svm") return ClassifierKind::svm;
    if (name == "mlc") return ClassifierKind::mlc;
    if (name == "mlp") return ClassifierKind::mlp;
    throw InvalidArgument("unknown classifier '" + name + "' (expected svm, mlc or mlp)");
}

const std::vector<ExperimentCell>& ExperimentResult::curve(ClassifierKind kind) const {
    for (std::size_t i = 0; i < classifiers.size(); ++i) {
        if (classifiers[i] == kind) return cells[i];
    }
    throw InvalidArgument("classifier " + classifier_name(kind) + " was not part of the experiment");
}

ExperimentResult hughes_experiment(const SceneSpec& base_spec, const ExperimentConfig& config) {
    if (config.feature_counts.empty()) throw InvalidArgument("experiment needs at least one feature count");
    for (std::size_t i = 0; i < config.feature_counts.size(); ++i) {
        if (config.feature_counts[i] < 1) throw InvalidArgument("feature counts must be positive");
        if (i > 0 && config.feature_counts[i] <= config.feature_counts[i - 1]) {
            throw InvalidArgument("feature counts must be strictly increasing");
        }
    }
    if (config.feature_counts.back() > base_spec.dims()) {
        throw InvalidArgument("largest feature count " + std::to_string(config.feature_counts.back()) +
                              " exceeds the scene's " + std::to_string(base_spec.dims()) + " features");
    }
    if (config.classifiers.empty()) throw InvalidArgument("experiment needs at least one classifier");
    config.svm.validate();
    config.kernel.validate();

    SceneSpec spec = base_spec;
    spec.train_per_class = config.per_class_train;
    const Split scene = generate_scene(spec);

    ExperimentResult result;
    result.feature_counts = config.feature_counts;
    result.classifiers = config.classifiers;
    result.per_class_train = spec.train_per_class;
    result.per_class_test = spec.test_per_class;
    result.scene_seed = spec.seed;
    result.mlp_seed = config.mlp_seed;
    const std::size_t n_counts = config.feature_counts.size();
    result.cells.assign(config.classifiers.size(), std::vector<ExperimentCell>(n_counts));

    parallel_for(config.classifiers.size() * n_counts, config.threads, [&](std::size_t job) {
        const std::size_t ci = job / n_counts;
        const std::size_t fi = job % n_counts;
        ExperimentCell& cell = result.cells[ci][fi];
        const int d = config.feature_counts[fi];
        const Dataset train = scene.train.truncate_features(d);
        const Dataset test = scene.test.truncate_features(d);
        const auto start = std::chrono::steady_clock::now();
        try {
            std::vector<int> predicted;
            switch (config.classifiers[ci]) {
                case ClassifierKind::svm: {
                    const auto model = train_one_vs_one(train, config.svm, config.kernel);
                    predicted = predict_all(model, test.features());
                    break;
                }
                case ClassifierKind::mlc: {
                    const auto model = fit_mlc(train);
                    cell.regularized = model.any_regularized();
                    predicted = classify_mlc_all(model, test.features());
                    break;
                }
                case ClassifierKind::mlp: {
                    const auto arch = MlpArchitecture::with_hidden(d, config.mlp_hidden, train.n_classes());
                    const auto model = train_mlp(train, arch, config.mlp_rate, config.mlp_epochs, config.mlp_seed);
                    predicted = predict_mlp_all(model, test.features());
                    break;
                }
            }
            cell.accuracy = overall_accuracy(confusion_matrix(test.labels(), predicted, test.n_classes()));
        } catch (const Error& e) {
            cell.accuracy = std::numeric_limits<double>::quiet_NaN();
            cell.error = e.what();
        }
        cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });
    return result;
}

std::string experiment_csv(const ExperimentResult& result) {
    std::string out = "features";
    bool has_mlc = false;
    for (auto k : result.classifiers) {
        out += "," + classifier_name(k);
        has_mlc = has_mlc || k == ClassifierKind::mlc;
    }
    if (has_mlc) out += ",mlc_regularized";
    out += "\n";
    for (std::size_t fi = 0; fi < result.feature_counts.size(); ++fi) {
        out += std::to_string(result.feature_counts[fi]);
        for (std::size_t ci = 0; ci < result.classifiers.size(); ++ci) {
            out += "," + io::format_double(result.cells[ci][fi].accuracy);
        }
        if (has_mlc) out += result.curve(ClassifierKind::mlc)[fi].regularized ? ",1" : ",0";
        out += "\n";
    }
    return out;
}

std::string experiment_svg(const ExperimentResult& result) {
    constexpr double width = 640;
    constexpr double height = 420;
    constexpr double left = 70;
    constexpr double right = 150;
    constexpr double top = 30;
    constexpr double bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const double x_min = result.feature_counts.front();
    const double x_max = std::max(result.feature_counts.back(), result.feature_counts.front() + 1);
    const auto px = [&](double f) { return left + (f - x_min) / (x_max - x_min) * plot_w; };
    const auto py = [&](double acc) { return top + (1.0 - acc) * plot_h; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n",
        width, height);
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
    for (int t = 0; t <= 10; ++t) {
        const double acc = t / 10.0;
        svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n", left,
                           py(acc), left + plot_w, py(acc));
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.0f}</text>\n", left - 6,
                           py(acc) + 4, acc * 100);
    }
    for (int f : result.feature_counts) {
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", px(f),
                           top + plot_h + 18, f);
    }
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left,
                       top, plot_w, plot_h);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">Number of features</text>\n",
                       left + plot_w / 2, height - 15);
    svg += fmt::format(
        "<text x=\"18\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1f})\">Overall accuracy "
        "(%)</text>\n",
        top + plot_h / 2, top + plot_h / 2);

    static constexpr const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd"};
    for (std::size_t ci = 0; ci < result.classifiers.size(); ++ci) {
        const char* color = colors[ci % 4];
        std::string points;
        for (std::size_t fi = 0; fi < result.feature_counts.size(); ++fi) {
            const double acc = result.cells[ci][fi].accuracy;
            if (std::isnan(acc)) continue;
            points += fmt::format("{:.1f},{:.1f} ", px(result.feature_counts[fi]), py(acc));
            svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"{}\"/>\n",
                               px(result.feature_counts[fi]), py(acc), color);
        }
        svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n", points, color);
        const double ly = top + 20 + 20 * static_cast<double>(ci);
        svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           left + plot_w + 15, ly, left + plot_w + 40, ly, color);
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", left + plot_w + 46, ly + 4,
                           classifier_name(result.classifiers[ci]));
    }
    svg += fmt::format("<text x=\"{:.1f}\" y=\"18\" text-anchor=\"middle\">Accuracy vs. features ({} training "
                       "samples/class)</text>\n",
                       left + plot_w / 2, result.per_class_train);
    svg += "</svg>\n";
    return svg;
}

}  // namespace lcc

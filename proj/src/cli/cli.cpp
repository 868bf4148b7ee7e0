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

#include "lcc/cli.hpp"

#include "lcc/data.hpp"
#include "lcc/destripe.hpp"
#include "lcc/metrics.hpp"
#include "lcc/mlc.hpp"
#include "lcc/mlp.hpp"
#include "lcc/multiclass.hpp"
#include "lcc/synth.hpp"
#include "lcc/text_io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <variant>

namespace lcc::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// A parameter failed validation before any work began.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

template <typename Fn>
void as_usage(Fn&& fn) {
    try {
        fn();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto part : io::split(text, ',')) {
        if (!part.empty()) out.emplace_back(part);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (const auto& part : split_list(text)) {
        long long v = 0;
        if (!io::parse_int(part, v) || v < 1 || v > 1'000'000) {
            throw UsageError(what + ": '" + part + "' is not a positive integer");
        }
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw UsageError(what + " must not be empty");
    return out;
}

// Label file: header line, then one row per sample whose last field is the label.
// Label rasters (single band of class ids) are accepted as well.
std::vector<int> read_labels(const fs::path& path) {
    if (!fs::exists(path)) throw DataError("no such file: " + path.string());
    std::vector<int> labels;
    if (is_raster_file(path)) {
        const auto cube = load_raster(path);
        for (std::size_t i = 0; i < cube.pixel_count(); ++i) {
            const float v = cube.data()[i];
            if (v < 0.0f || v != static_cast<float>(static_cast<int>(v))) {
                throw DataError(path.string() + ": pixel " + std::to_string(i) + " is not a class id");
            }
            labels.push_back(static_cast<int>(v));
        }
        return labels;
    }
    std::istringstream in(io::read_file(path));
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (io::trim(line).empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto fields = io::split(line, ',');
        long long v = 0;
        if (!io::parse_int(fields.back(), v) || v < 0) throw ParseError(path.string(), line_no, "label is not a class id");
        labels.push_back(static_cast<int>(v));
    }
    if (labels.empty()) throw DataError(path.string() + ": no labels");
    return labels;
}

std::string format_labels(const std::vector<int>& labels) {
    std::string out = "label\n";
    for (int y : labels) {
        out += std::to_string(y);
        out.push_back('\n');
    }
    return out;
}

std::string digest_file(const fs::path& path) { return io::sha256_hex(io::read_file(path)); }

struct Invocation {
    std::string command;
    std::vector<std::string> argv;  // fully resolved, absolute paths
    std::string output_option;
    std::vector<fs::path> inputs;
};

// Every option of the subcommand with its effective value, defaults included.
Invocation resolve(const CLI::App* sub, const std::set<std::string>& path_options, std::string output_option) {
    Invocation inv;
    inv.command = sub->get_name();
    inv.argv.push_back(inv.command);
    inv.output_option = std::move(output_option);
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string name = "--" + opt->get_lnames().front();
        if (name == "--help") continue;
        std::vector<std::string> values = opt->results();
        if (values.empty() && !opt->get_default_str().empty()) values.push_back(opt->get_default_str());
        for (auto v : values) {
            if (path_options.count(name) && !v.empty()) {
                const fs::path p = fs::absolute(v).lexically_normal();
                v = p.string();
                if (name != inv.output_option && name != "--out-dir" && name != "--csv") inv.inputs.push_back(p);
            }
            inv.argv.push_back(name);
            inv.argv.push_back(v);
        }
    }
    return inv;
}

void write_manifest(const fs::path& path, const Invocation& inv, const std::vector<fs::path>& outputs,
                    const json& extra = json::object()) {
    json m;
    m["tool"] = "lcc";
    m["command"] = inv.command;
    m["argv"] = inv.argv;
    m["output_option"] = inv.output_option;
    json inputs = json::object();
    for (const auto& p : inv.inputs) inputs[p.string()] = digest_file(p);
    m["inputs"] = inputs;
    json outs = json::object();
    for (const auto& p : outputs) outs[fs::absolute(p).lexically_normal().string()] = digest_file(p);
    m["outputs"] = outs;
    if (!extra.empty()) m["details"] = extra;
    io::write_file_atomic(path, m.dump(2) + "\n");
}

fs::path manifest_for(const fs::path& output) {
    fs::path p = output;
    p += ".manifest.json";
    return p;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

using AnyModel = std::variant<MulticlassModel, MlcModel, MlpModel>;

AnyModel load_model(const fs::path& path) {
    if (!fs::exists(path)) throw DataError("no such file: " + path.string());
    std::istringstream in(io::read_file(path));
    io::KeyValueReader reader(in, path.string());
    std::string first;
    {
        std::istringstream peek(io::read_file(path));
        peek >> first;
    }
    if (first == "svm_one_vs_one") return read_multiclass_model(reader);
    if (first == "mlc") return read_mlc_model(reader);
    if (first == "mlp") return read_mlp_model(reader);
    throw DataError(path.string() + ": unrecognized model format '" + first + "'");
}

Eigen::Index model_dim(const AnyModel& model) {
    return std::visit(
        [](const auto& m) -> Eigen::Index {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MlpModel>) {
                return m.arch.inputs();
            } else {
                return m.dim();
            }
        },
        model);
}

std::vector<int> predict_rows(const AnyModel& model, const Eigen::Ref<const Matrix>& rows) {
    return std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MulticlassModel>) {
                return predict_all(m, rows);
            } else if constexpr (std::is_same_v<T, MlcModel>) {
                return classify_mlc_all(m, rows);
            } else {
                return predict_mlp_all(m, rows);
            }
        },
        model);
}

// ---------------------------------------------------------------- train

struct TrainParams {
    std::string input;
    std::string output;
    std::string classifier = "svm";
    std::string kernel = "rbf";
    double gamma = 2.0;
    double c = 5000.0;
    double tolerance = 1e-3;
    long long max_passes = 100000;
    unsigned threads = 1;
    std::string priors = "uniform";
    std::string hidden = "16";
    double rate = 2.0;
    int epochs = 3000;
    std::uint64_t seed = 1;
};

void add_train(CLI::App& app, TrainParams& p) {
    auto* sub = app.add_subcommand("train", "Train a classifier on a sample CSV and save the model");
    sub->add_option("--input,-i", p.input, "Training samples (CSV: f1,...,fn,label)")->required();
    sub->add_option("--output,-o", p.output, "Model file to write")->required();
    sub->add_option("--classifier", p.classifier, "svm | mlc | mlp")->capture_default_str();
    sub->add_option("--kernel", p.kernel, "SVM kernel: rbf | linear")->capture_default_str();
    sub->add_option("--gamma", p.gamma, "RBF kernel width gamma")->capture_default_str();
    sub->add_option("--c", p.c, "SVM misclassification penalty C")->capture_default_str();
    sub->add_option("--tolerance", p.tolerance, "SVM KKT stopping tolerance")->capture_default_str();
    sub->add_option("--max-passes", p.max_passes, "SVM pair-update limit")->capture_default_str();
    sub->add_option("--threads", p.threads, "Worker threads for pair training (0 = all cores)")->capture_default_str();
    sub->add_option("--priors", p.priors, "MLC priors: uniform | frequency")->capture_default_str();
    sub->add_option("--hidden", p.hidden, "MLP hidden layer sizes, comma separated")->capture_default_str();
    sub->add_option("--rate", p.rate, "MLP learning rate")->capture_default_str();
    sub->add_option("--epochs", p.epochs, "MLP full-batch epochs")->capture_default_str();
    sub->add_option("--seed", p.seed, "MLP initialization seed")->capture_default_str();
}

int cmd_train(const CLI::App* sub, const TrainParams& p, std::ostream& out) {
    TrainConfig cfg;
    KernelSpec kernel;
    std::vector<int> hidden;
    ClassifierKind kind{};
    as_usage([&] {
        kind = parse_classifier(p.classifier);
        cfg.C = p.c;
        cfg.kkt_tolerance = p.tolerance;
        cfg.max_passes = p.max_passes;
        cfg.validate();
        kernel.kind = parse_kernel_kind(p.kernel);
        kernel.gamma = p.gamma;
        kernel.validate();
        if (p.priors != "uniform" && p.priors != "frequency") throw InvalidArgument("--priors must be uniform or frequency");
        if (!(p.rate >= 0.0)) throw InvalidArgument("--rate must be >= 0");
        if (p.epochs < 0) throw InvalidArgument("--epochs must be >= 0");
    });
    hidden = parse_int_list(p.hidden, "--hidden");
    const auto inv = resolve(sub, {"--input", "--output"}, "--output");

    const Dataset ds = load_samples(p.input);
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream model_text;
    std::string summary;
    switch (kind) {
        case ClassifierKind::svm: {
            const auto model = train_one_vs_one(ds, cfg, kernel, p.threads);
            write_multiclass_model(model_text, model);
            summary = fmt::format("svm: {} classes, {} binary classifiers, {} support vectors", model.n_classes,
                                  model.pairs.size(), model.support_vector_total());
            break;
        }
        case ClassifierKind::mlc: {
            const auto model = fit_mlc(ds, p.priors == "uniform" ? PriorMode::uniform : PriorMode::frequency);
            write_mlc_model(model_text, model);
            int regularized = 0;
            for (const auto& c : model.classes) regularized += c.regularized ? 1 : 0;
            summary = fmt::format("mlc: {} classes, {} features, {} regularized covariance(s)", model.n_classes(),
                                  model.dim(), regularized);
            break;
        }
        case ClassifierKind::mlp: {
            const auto arch = MlpArchitecture::with_hidden(static_cast<int>(ds.dim()), hidden, ds.n_classes());
            const auto model = train_mlp(ds, arch, p.rate, p.epochs, p.seed);
            write_mlp_model(model_text, model);
            summary = fmt::format("mlp: {} epochs, loss {:.6g} -> {:.6g}", model.epochs_run, model.initial_loss,
                                  model.final_loss);
            break;
        }
    }
    const double elapsed = seconds_since(start);
    io::write_file_atomic(p.output, model_text.str());
    write_manifest(manifest_for(p.output), inv, {p.output});
    out << summary << "\n";
    out << fmt::format("training time: {:.3f} s ({:.4f} min)\n", elapsed, elapsed / 60.0);
    out << "model written to " << p.output << "\n";
    return kOk;
}

// ---------------------------------------------------------------- classify

struct ClassifyParams {
    std::string model;
    std::string input;
    std::string output;
};

void add_classify(CLI::App& app, ClassifyParams& p) {
    auto* sub = app.add_subcommand("classify", "Apply a saved model to a sample CSV or a raster cube");
    sub->add_option("--model,-m", p.model, "Model file from `train`")->required();
    sub->add_option("--input,-i", p.input, "Sample CSV or TCRASTER cube")->required();
    sub->add_option("--output,-o", p.output, "Label CSV (for CSV input) or label raster (for raster input)")->required();
}

int cmd_classify(const CLI::App* sub, const ClassifyParams& p, std::ostream& out) {
    const auto inv = resolve(sub, {"--model", "--input", "--output"}, "--output");
    const AnyModel model = load_model(p.model);
    const Eigen::Index dim = model_dim(model);
    if (!fs::exists(p.input)) throw DataError("no such file: " + p.input);
    if (is_raster_file(p.input)) {
        const RasterCube cube = load_raster(p.input);
        if (cube.bands() != dim) {
            throw DataError(fmt::format("model expects {} features but raster has {} bands", dim, cube.bands()));
        }
        Matrix rows(static_cast<Eigen::Index>(cube.pixel_count()), cube.bands());
        for (int b = 0; b < cube.bands(); ++b) {
            const auto band = cube.band(b);
            for (int r = 0; r < cube.height(); ++r) {
                for (int c = 0; c < cube.width(); ++c) rows(static_cast<Eigen::Index>(r) * cube.width() + c, b) = band(r, c);
            }
        }
        const auto labels = predict_rows(model, rows);
        std::vector<float> data(labels.begin(), labels.end());
        const RasterCube result(cube.width(), cube.height(), 1, std::move(data));
        save_raster(result, p.output);
        std::set<int> distinct(labels.begin(), labels.end());
        out << fmt::format("classified {}x{} pixels into {} distinct classes\n", cube.width(), cube.height(),
                           distinct.size());
    } else {
        const Dataset ds = load_samples(p.input);
        if (ds.dim() != dim) {
            throw DataError(fmt::format("model expects {} features but {} has {}", dim, p.input, ds.dim()));
        }
        const auto labels = predict_rows(model, ds.features());
        io::write_file_atomic(p.output, format_labels(labels));
        out << fmt::format("classified {} samples\n", labels.size());
    }
    write_manifest(manifest_for(p.output), inv, {p.output});
    out << "labels written to " << p.output << "\n";
    return kOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateParams {
    std::string truth;
    std::vector<std::string> predictions;
    std::string names;
    std::string output;
    std::string csv;
};

void add_evaluate(CLI::App& app, EvaluateParams& p) {
    auto* sub = app.add_subcommand("evaluate", "Accuracy report: confusion matrix, overall accuracy, kappa, Z test");
    sub->add_option("--truth,-t", p.truth, "Reference labels (label CSV, sample CSV or label raster)")->required();
    sub->add_option("--pred,-p", p.predictions, "Predicted labels; repeat to compare classifiers")->required();
    sub->add_option("--names", p.names, "Comma-separated display names for the prediction files");
    sub->add_option("--output,-o", p.output, "Also write the text report here");
    sub->add_option("--csv", p.csv, "Also write the report as CSV here");
}

int cmd_evaluate(const CLI::App* sub, const EvaluateParams& p, std::ostream& out) {
    auto names = split_list(p.names);
    if (!names.empty() && names.size() != p.predictions.size()) {
        throw UsageError("--names lists " + std::to_string(names.size()) + " names for " +
                         std::to_string(p.predictions.size()) + " prediction files");
    }
    for (std::size_t i = names.size(); i < p.predictions.size(); ++i) names.push_back(fs::path(p.predictions[i]).stem().string());
    const auto inv = resolve(sub, {"--truth", "--pred", "--output", "--csv"}, "--output");

    const auto truth = read_labels(p.truth);
    std::vector<std::vector<int>> preds;
    int n_classes = 0;
    for (int y : truth) n_classes = std::max(n_classes, y + 1);
    for (const auto& path : p.predictions) {
        preds.push_back(read_labels(path));
        if (preds.back().size() != truth.size()) {
            throw DataError(fmt::format("{} holds {} labels but {} holds {}", path, preds.back().size(), p.truth,
                                        truth.size()));
        }
        for (int y : preds.back()) n_classes = std::max(n_classes, y + 1);
    }
    std::vector<AccuracyReport> reports;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        reports.push_back(make_report(names[i], confusion_matrix(truth, preds[i], n_classes)));
    }
    std::vector<ZEntry> z;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        for (std::size_t j = i + 1; j < reports.size(); ++j) z.push_back(compare_reports(reports[i], reports[j]));
    }
    const std::string text = format_report_text(reports, z);
    out << text;
    std::vector<fs::path> written;
    if (!p.output.empty()) {
        io::write_file_atomic(p.output, text);
        written.emplace_back(p.output);
    }
    if (!p.csv.empty()) {
        io::write_file_atomic(p.csv, format_report_csv(reports, z));
        written.emplace_back(p.csv);
    }
    if (!written.empty()) write_manifest(manifest_for(written.front()), inv, written);
    return kOk;
}

// ---------------------------------------------------------------- destripe

struct DestripeParams {
    std::string input;
    std::string output;
    int block = 128;
    double overlap = 0.5;
    double threshold = 4.0;
    std::string bands;
    double period = 0.0;
    std::string axis = "cols";
};

void add_destripe(CLI::App& app, DestripeParams& p) {
    auto* sub = app.add_subcommand("destripe", "Remove periodic striping by block-averaged power-spectral filtering");
    sub->add_option("--input,-i", p.input, "TCRASTER cube")->required();
    sub->add_option("--output,-o", p.output, "Output cube (default: <input>_destriped<ext>)");
    sub->add_option("--block", p.block, "Block size in pixels (power of two)")->capture_default_str();
    sub->add_option("--overlap", p.overlap, "Block overlap fraction in [0, 1)")->capture_default_str();
    sub->add_option("--threshold", p.threshold, "Peak threshold in robust standard deviations")->capture_default_str();
    sub->add_option("--bands", p.bands, "Comma-separated 0-based bands to filter (default: all)");
    sub->add_option("--period", p.period, "Report stripe energy at this period (pixels; 0 = off)")->capture_default_str();
    sub->add_option("--axis", p.axis, "Axis the reported stripes vary along: rows | cols")->capture_default_str();
}

int cmd_destripe(CLI::App* sub, DestripeParams& p, std::ostream& out) {
    if (p.output.empty()) {
        const fs::path in(p.input);
        p.output = (in.parent_path() / (in.stem().string() + "_destriped" + in.extension().string())).string();
        sub->get_option("--output")->default_str(p.output);
    }
    BlockSpectrumParams bp{p.block, p.overlap};
    PeakParams pk;
    pk.threshold_sigmas = p.threshold;
    as_usage([&] {
        if (p.block < 2 || (p.block & (p.block - 1)) != 0) throw InvalidArgument("--block must be a power of two");
        if (!(p.overlap >= 0.0 && p.overlap < 1.0)) throw InvalidArgument("--overlap must lie in [0, 1)");
        if (!(p.threshold > 0.0)) throw InvalidArgument("--threshold must be > 0");
        if (p.period != 0.0 && !(p.period >= 2.0)) throw InvalidArgument("--period must be >= 2 pixels");
        if (p.axis != "rows" && p.axis != "cols") throw InvalidArgument("--axis must be rows or cols");
    });
    const auto inv = resolve(sub, {"--input", "--output"}, "--output");
    RasterCube cube = load_raster(p.input);
    std::vector<int> bands;
    if (p.bands.empty()) {
        for (int b = 0; b < cube.bands(); ++b) bands.push_back(b);
    } else {
        for (const auto& t : split_list(p.bands)) {
            long long b = -1;
            if (!io::parse_int(t, b) || b < 0 || b >= cube.bands()) {
                throw DataError("band '" + t + "' not in [0, " + std::to_string(cube.bands()) + ")");
            }
            bands.push_back(static_cast<int>(b));
        }
    }
    const StripeAxis axis = p.axis == "rows" ? StripeAxis::rows : StripeAxis::cols;
    json report = json::array();
    std::size_t total_bins = 0;
    for (int b : bands) {
        const Matrix band = cube.band_as_matrix(b);
        const Matrix avg = averaged_log_spectrum(band, bp);
        const StripeFilter filter = build_filter(avg, cube.height(), cube.width(), pk);
        const Matrix cleaned = destripe_band(band, filter);
        const double before = spectral_energy(band);
        const double after = spectral_energy(cleaned);
        total_bins += filter.suppressed_bins();
        std::string line = fmt::format("band {}: {} bins suppressed, non-DC energy removed {:.2f}%", b,
                                       filter.suppressed_bins(), before > 0 ? 100.0 * (before - after) / before : 0.0);
        json entry = {{"band", b}, {"suppressed_bins", filter.suppressed_bins()}};
        if (p.period > 0.0) {
            const double e0 = stripe_energy(band, axis, p.period);
            const double e1 = stripe_energy(cleaned, axis, p.period);
            line += fmt::format(", stripe energy {:.4g} -> {:.4g}", e0, e1);
            entry["stripe_energy_before"] = e0;
            entry["stripe_energy_after"] = e1;
        }
        out << line << "\n";
        report.push_back(entry);
        cube.set_band(b, cleaned);
    }
    save_raster(cube, p.output);
    write_manifest(manifest_for(p.output), inv, {p.output}, report);
    out << fmt::format("{} bins suppressed in total; destriped cube written to {}\n", total_bins, p.output);
    return kOk;
}

// ---------------------------------------------------------------- synth

struct SynthParams {
    std::string kind = "samples";
    std::string out_dir;
    int classes = 8;
    int dims = 65;
    int train_per_class = 20;
    int test_per_class = 250;
    std::uint64_t seed = 1;
    int width = 64;
    int height = 64;
    double period = 4.0;
    double amplitude = 50.0;
    std::string axis = "cols";
    int bands = 1;
};

void add_synth(CLI::App& app, SynthParams& p) {
    auto* sub = app.add_subcommand("synth", "Generate synthetic scenes: samples, raster, or striped");
    sub->add_option("--kind", p.kind, "samples | raster | striped")->capture_default_str();
    sub->add_option("--out-dir,-o", p.out_dir, "Output directory")->required();
    sub->add_option("--classes", p.classes, "Class count")->capture_default_str();
    sub->add_option("--dims", p.dims, "Feature (band) count")->capture_default_str();
    sub->add_option("--train-per-class", p.train_per_class, "Training samples per class")->capture_default_str();
    sub->add_option("--test-per-class", p.test_per_class, "Test samples per class")->capture_default_str();
    sub->add_option("--seed", p.seed, "Random seed")->capture_default_str();
    sub->add_option("--width", p.width, "Raster width")->capture_default_str();
    sub->add_option("--height", p.height, "Raster height")->capture_default_str();
    sub->add_option("--period", p.period, "Stripe period in pixels (striped)")->capture_default_str();
    sub->add_option("--amplitude", p.amplitude, "Stripe amplitude (striped)")->capture_default_str();
    sub->add_option("--axis", p.axis, "Axis the stripes vary along: rows | cols")->capture_default_str();
    sub->add_option("--bands", p.bands, "Band count (striped)")->capture_default_str();
}

int cmd_synth(const CLI::App* sub, const SynthParams& p, std::ostream& out) {
    as_usage([&] {
        if (p.kind != "samples" && p.kind != "raster" && p.kind != "striped") {
            throw InvalidArgument("--kind must be samples, raster or striped");
        }
        if (p.classes < 2 || p.dims < 1) throw InvalidArgument("--classes must be >= 2 and --dims >= 1");
        if (p.train_per_class < 2 || p.test_per_class < 2) throw InvalidArgument("per-class sample counts must be >= 2");
        if (p.width < 1 || p.height < 1 || p.bands < 1) throw InvalidArgument("raster dimensions must be positive");
        if (!(p.period >= 2.0)) throw InvalidArgument("--period must be >= 2 pixels");
        if (p.axis != "rows" && p.axis != "cols") throw InvalidArgument("--axis must be rows or cols");
    });
    const auto inv = resolve(sub, {"--out-dir"}, "--out-dir");
    const fs::path dir(p.out_dir);
    fs::create_directories(dir);
    DefaultSceneParams scene;
    scene.n_classes = p.classes;
    scene.dims = p.dims;
    SceneSpec spec = default_scene_spec(scene, p.seed);
    spec.train_per_class = p.train_per_class;
    spec.test_per_class = p.test_per_class;
    std::vector<fs::path> written;
    if (p.kind == "samples") {
        const Split split = generate_scene(spec);
        save_samples(split.train, dir / "train.csv");
        save_samples(split.test, dir / "test.csv");
        written = {dir / "train.csv", dir / "test.csv"};
        out << fmt::format("{} training and {} test samples, {} classes, {} features\n", split.train.size(),
                           split.test.size(), p.classes, p.dims);
    } else if (p.kind == "raster") {
        std::vector<int> truth;
        const RasterCube cube = scene_raster(spec, p.width, p.height, truth);
        save_raster(cube, dir / "scene.tcr");
        io::write_file_atomic(dir / "truth.csv", format_labels(truth));
        written = {dir / "scene.tcr", dir / "truth.csv"};
        out << fmt::format("{}x{} raster with {} bands, {} classes\n", p.width, p.height, p.dims, p.classes);
    } else {
        const StripeAxis axis = p.axis == "rows" ? StripeAxis::rows : StripeAxis::cols;
        RasterCube clean(p.width, p.height, p.bands);
        RasterCube striped(p.width, p.height, p.bands);
        for (int b = 0; b < p.bands; ++b) {
            const Matrix bg = textured_background(p.height, p.width, p.seed + static_cast<std::uint64_t>(b));
            clean.set_band(b, bg);
            striped.set_band(b, add_stripes(bg, p.period, p.amplitude, axis));
        }
        save_raster(striped, dir / "striped.tcr");
        save_raster(clean, dir / "clean.tcr");
        written = {dir / "striped.tcr", dir / "clean.tcr"};
        out << fmt::format("{}x{} striped raster, {} band(s), period {} px, amplitude {}\n", p.width, p.height,
                           p.bands, p.period, p.amplitude);
    }
    write_manifest(dir / "manifest.json", inv, written);
    out << "written to " << dir.string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------- experiment

struct ExperimentParams {
    std::string out_dir;
    std::string feature_counts = "5,10,15,20,25,30,35,40,45,50,55,60,65";
    std::string classifiers = "svm,mlc,mlp";
    int per_class_train = 20;
    int per_class_test = 250;
    int classes = 8;
    int dims = 65;
    std::uint64_t seed = 1;
    double gamma = 2.0;
    double c = 5000.0;
    double tolerance = 1e-3;
    std::string mlp_hidden = "16";
    double mlp_rate = 2.0;
    int mlp_epochs = 3000;
    std::uint64_t mlp_seed = 1;
    unsigned threads = 1;
};

void add_experiment(CLI::App& app, ExperimentParams& p) {
    auto* sub = app.add_subcommand("experiment", "Accuracy against feature count at fixed training size");
    sub->add_option("--out-dir,-o", p.out_dir, "Output directory for results.csv, figure.svg, manifest.json")->required();
    sub->add_option("--feature-counts", p.feature_counts, "Comma-separated increasing feature counts")->capture_default_str();
    sub->add_option("--classifiers", p.classifiers, "Comma-separated subset of svm,mlc,mlp")->capture_default_str();
    sub->add_option("--per-class-train", p.per_class_train, "Training samples per class")->capture_default_str();
    sub->add_option("--per-class-test", p.per_class_test, "Test samples per class")->capture_default_str();
    sub->add_option("--classes", p.classes, "Class count")->capture_default_str();
    sub->add_option("--dims", p.dims, "Scene feature count")->capture_default_str();
    sub->add_option("--seed", p.seed, "Scene seed")->capture_default_str();
    sub->add_option("--gamma", p.gamma, "SVM RBF gamma")->capture_default_str();
    sub->add_option("--c", p.c, "SVM C")->capture_default_str();
    sub->add_option("--tolerance", p.tolerance, "SVM KKT tolerance")->capture_default_str();
    sub->add_option("--mlp-hidden", p.mlp_hidden, "MLP hidden layer sizes")->capture_default_str();
    sub->add_option("--mlp-rate", p.mlp_rate, "MLP learning rate")->capture_default_str();
    sub->add_option("--mlp-epochs", p.mlp_epochs, "MLP epochs")->capture_default_str();
    sub->add_option("--mlp-seed", p.mlp_seed, "MLP initialization seed")->capture_default_str();
    sub->add_option("--threads", p.threads, "Worker threads for sweep cells (0 = all cores)")->capture_default_str();
}

int cmd_experiment(const CLI::App* sub, const ExperimentParams& p, std::ostream& out) {
    ExperimentConfig cfg;
    cfg.feature_counts = parse_int_list(p.feature_counts, "--feature-counts");
    cfg.classifiers.clear();
    as_usage([&] {
        for (const auto& name : split_list(p.classifiers)) cfg.classifiers.push_back(parse_classifier(name));
        if (cfg.classifiers.empty()) throw InvalidArgument("--classifiers must not be empty");
        cfg.svm.C = p.c;
        cfg.svm.kkt_tolerance = p.tolerance;
        cfg.svm.validate();
        cfg.kernel = KernelSpec::rbf(p.gamma);
        cfg.kernel.validate();
        if (p.per_class_train < 2 || p.per_class_test < 2) throw InvalidArgument("per-class sample counts must be >= 2");
        if (p.classes < 2) throw InvalidArgument("--classes must be >= 2");
        if (cfg.feature_counts.back() > p.dims) throw InvalidArgument("largest feature count exceeds --dims");
        for (std::size_t i = 1; i < cfg.feature_counts.size(); ++i) {
            if (cfg.feature_counts[i] <= cfg.feature_counts[i - 1]) {
                throw InvalidArgument("--feature-counts must be strictly increasing");
            }
        }
        if (!(p.mlp_rate >= 0.0) || p.mlp_epochs < 0) throw InvalidArgument("MLP rate and epochs must be non-negative");
    });
    cfg.per_class_train = p.per_class_train;
    cfg.mlp_hidden = parse_int_list(p.mlp_hidden, "--mlp-hidden");
    cfg.mlp_rate = p.mlp_rate;
    cfg.mlp_epochs = p.mlp_epochs;
    cfg.mlp_seed = p.mlp_seed;
    cfg.threads = p.threads;
    const auto inv = resolve(sub, {"--out-dir"}, "--out-dir");

    DefaultSceneParams scene;
    scene.n_classes = p.classes;
    scene.dims = p.dims;
    SceneSpec spec = default_scene_spec(scene, p.seed);
    spec.test_per_class = p.per_class_test;

    const auto start = std::chrono::steady_clock::now();
    const ExperimentResult result = hughes_experiment(spec, cfg);
    const double elapsed = seconds_since(start);

    const fs::path dir(p.out_dir);
    fs::create_directories(dir);
    io::write_file_atomic(dir / "results.csv", experiment_csv(result));
    io::write_file_atomic(dir / "figure.svg", experiment_svg(result));
    json failures = json::array();
    for (std::size_t ci = 0; ci < result.classifiers.size(); ++ci) {
        for (std::size_t fi = 0; fi < result.feature_counts.size(); ++fi) {
            const auto& cell = result.cells[ci][fi];
            if (!cell.error.empty()) {
                failures.push_back({{"classifier", classifier_name(result.classifiers[ci])},
                                    {"features", result.feature_counts[fi]},
                                    {"error", cell.error}});
            }
        }
    }
    write_manifest(dir / "manifest.json", inv, {dir / "results.csv", dir / "figure.svg"},
                   json{{"failed_cells", failures}});

    out << fmt::format("{:>8}", "features");
    for (auto k : result.classifiers) out << fmt::format("{:>10}", classifier_name(k));
    out << "\n";
    for (std::size_t fi = 0; fi < result.feature_counts.size(); ++fi) {
        out << fmt::format("{:>8}", result.feature_counts[fi]);
        for (std::size_t ci = 0; ci < result.classifiers.size(); ++ci) {
            const auto& cell = result.cells[ci][fi];
            out << fmt::format("{:>9.2f}{}", 100.0 * cell.accuracy, cell.regularized ? "*" : " ");
        }
        out << "\n";
    }
    out << "(* = regularized covariance)\n";
    for (std::size_t ci = 0; ci < result.classifiers.size(); ++ci) {
        double total = 0.0;
        for (const auto& cell : result.cells[ci]) total += cell.seconds;
        out << fmt::format("{} training+testing time: {:.3f} s\n", classifier_name(result.classifiers[ci]), total);
    }
    out << fmt::format("sweep wall time: {:.3f} s; results in {}\n", elapsed, dir.string());
    return kOk;
}

// ---------------------------------------------------------------- rerun

struct RerunParams {
    std::string manifest;
    std::string output;
};

void add_rerun(CLI::App& app, RerunParams& p) {
    auto* sub = app.add_subcommand("rerun", "Re-execute a command from its manifest");
    sub->add_option("manifest", p.manifest, "manifest JSON written by an earlier run")->required();
    sub->add_option("--output,-o", p.output, "Redirect the primary output (file or directory) here");
}

int cmd_rerun(const RerunParams& p, std::ostream& out, std::ostream& err) {
    json m;
    try {
        m = json::parse(io::read_file(p.manifest));
    } catch (const json::exception& e) {
        throw DataError(p.manifest + ": not a manifest: " + e.what());
    }
    if (!m.contains("argv") || !m["argv"].is_array() || m["argv"].empty()) throw DataError(p.manifest + ": missing argv");
    auto argv = m["argv"].get<std::vector<std::string>>();
    if (m.contains("inputs")) {
        for (const auto& [path, digest] : m["inputs"].items()) {
            if (!fs::exists(path)) throw DataError("input recorded in manifest is missing: " + path);
            if (digest_file(path) != digest.get<std::string>()) throw DataError("input changed since the manifest was written: " + path);
        }
    }
    if (!p.output.empty()) {
        const std::string key = m.value("output_option", std::string("--output"));
        bool replaced = false;
        for (std::size_t i = 1; i + 1 < argv.size(); ++i) {
            if (argv[i] == key) {
                argv[i + 1] = fs::absolute(p.output).lexically_normal().string();
                replaced = true;
            }
        }
        if (!replaced) {
            argv.push_back(key);
            argv.push_back(fs::absolute(p.output).lexically_normal().string());
        }
    }
    if (argv.front() == "rerun") throw DataError("manifest points at another rerun");
    return run(argv, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"lcc: land-cover classification toolkit (SVM, maximum likelihood, neural network; destriping; "
                 "accuracy assessment)",
                 "lcc"};
    app.require_subcommand(1);
    TrainParams train;
    ClassifyParams classify;
    EvaluateParams evaluate;
    DestripeParams destripe;
    SynthParams synth;
    ExperimentParams experiment;
    RerunParams rerun;
    add_train(app, train);
    add_classify(app, classify);
    add_evaluate(app, evaluate);
    add_destripe(app, destripe);
    add_synth(app, synth);
    add_experiment(app, experiment);
    add_rerun(app, rerun);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "train") return cmd_train(sub, train, out);
        if (name == "classify") return cmd_classify(sub, classify, out);
        if (name == "evaluate") return cmd_evaluate(sub, evaluate, out);
        if (name == "destripe") return cmd_destripe(sub, destripe, out);
        if (name == "synth") return cmd_synth(sub, synth, out);
        if (name == "experiment") return cmd_experiment(sub, experiment, out);
        if (name == "rerun") return cmd_rerun(rerun, out, err);
        err << "unknown command " << name << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const TrainingError& e) {
        err << "training failed: " << e.what() << "\n";
        return kComputation;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    } catch (const InvalidArgument& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    } catch (const fs::filesystem_error& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        err << "computation failed: " << e.what() << "\n";
        return kComputation;
    }
}

}  // namespace lcc::cli

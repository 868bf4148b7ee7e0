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

#include "lcc/data.hpp"
#include "lcc/destripe.hpp"
#include "lcc/svm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lcc {

struct ClassGaussian {
    Vector mean;
    Matrix covariance;
};

struct SceneSpec {
    std::vector<ClassGaussian> classes;
    int train_per_class = 20;
    int test_per_class = 250;
    // Optional smooth warp applied per feature after sampling: x + warp * sin(pi * x).
    double warp = 0.0;
    std::uint64_t seed = 1;

    int n_classes() const { return static_cast<int>(classes.size()); }
    Eigen::Index dims() const { return classes.empty() ? 0 : classes.front().mean.size(); }
    void validate() const;
};

struct DefaultSceneParams {
    int n_classes = 8;
    int dims = 65;
    double signal = 0.35;   // mean offset scale; feature j carries signal / sqrt(j)
    double base = 0.3;      // common reflectance-like level
    double noise = 0.05;    // within-class standard deviation before class scaling
    double band_correlation = 0.5;  // AR(1) correlation between adjacent features
    std::vector<double> class_noise_scale = {0.6, 1.5, 0.8, 1.3, 1.0, 0.7, 1.2, 0.9};
    std::uint64_t geometry_seed = 2003;
};

// Class means on a scaled simplex, projected to `dims` features by a seeded
// column-normalized Gaussian matrix; feature j (1-based) is scaled by 1/sqrt(j).
SceneSpec default_scene_spec(const DefaultSceneParams& params = {}, std::uint64_t seed = 1);

// Per-class Gaussian draws; train and test come from separate streams so they are disjoint draws.
Split generate_scene(const SceneSpec& spec);

// Adds amplitude * sin(2 pi index / period) where index runs along the axis.
Matrix add_stripes(const Eigen::Ref<const Matrix>& band, double period_px, double amplitude, StripeAxis axis);

// 100 plus low-frequency texture (periods >= 64 px) plus unit white noise.
Matrix textured_background(int rows, int cols, std::uint64_t seed);

// Pixels drawn from the scene classes laid out in vertical strips; `truth` receives the class map.
RasterCube scene_raster(const SceneSpec& spec, int width, int height, std::vector<int>& truth);

enum class ClassifierKind { svm, mlc, mlp };

std::string classifier_name(ClassifierKind kind);
ClassifierKind parse_classifier(const std::string& name);

struct ExperimentConfig {
    std::vector<int> feature_counts = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60, 65};
    std::vector<ClassifierKind> classifiers = {ClassifierKind::svm, ClassifierKind::mlc, ClassifierKind::mlp};
    int per_class_train = 20;
    TrainConfig svm;  // C = 5000 by default
    KernelSpec kernel = KernelSpec::rbf(2.0);
    std::vector<int> mlp_hidden = {16};
    double mlp_rate = 2.0;
    int mlp_epochs = 3000;
    std::uint64_t mlp_seed = 1;
    unsigned threads = 1;
};

struct ExperimentCell {
    double accuracy = 0.0;  // NaN when training failed
    bool regularized = false;
    std::string error;
    double seconds = 0.0;
};

struct ExperimentResult {
    std::vector<int> feature_counts;
    std::vector<ClassifierKind> classifiers;
    std::vector<std::vector<ExperimentCell>> cells;  // [classifier][feature count]
    int per_class_train = 0;
    int per_class_test = 0;
    std::uint64_t scene_seed = 0;
    std::uint64_t mlp_seed = 0;

    const std::vector<ExperimentCell>& curve(ClassifierKind kind) const;
};

// For each feature count d: keep the first d features, train every requested
// classifier on the fixed per-class training set, record test accuracy.
// A failing cell records its error and the sweep continues.
ExperimentResult hughes_experiment(const SceneSpec& base_spec, const ExperimentConfig& config);

// Rows = feature count, columns = classifier accuracy, plus an MLC regularization flag column when MLC ran.
std::string experiment_csv(const ExperimentResult& result);

// Line chart of accuracy against feature count.
std::string experiment_svg(const ExperimentResult& result);

}  // namespace lcc

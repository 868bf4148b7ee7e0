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

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace lcc {

struct Sample {
    Vector features;
    int label = 0;
};

// Labeled feature vectors. Row i of `features` is sample i.
//
// Labels are class ids used as-is; the class dictionary spans 0..max label,
// so a class may be declared (by a higher id) yet hold no samples. Training
// entry points reject such empty classes.
class Dataset {
  public:
    Dataset() = default;
    Dataset(Matrix features, std::vector<int> labels, int n_classes = -1);
    static Dataset from_samples(const std::vector<Sample>& samples, int n_classes = -1);

    Eigen::Index size() const noexcept { return features_.rows(); }
    Eigen::Index dim() const noexcept { return features_.cols(); }
    int n_classes() const noexcept { return static_cast<int>(class_names_.size()); }
    bool empty() const noexcept { return size() == 0; }

    const Matrix& features() const noexcept { return features_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }

    auto x(Eigen::Index i) const { return features_.row(i); }
    int y(Eigen::Index i) const { return labels_[static_cast<std::size_t>(i)]; }
    Sample sample(Eigen::Index i) const { return {features_.row(i).transpose(), y(i)}; }

    std::vector<Eigen::Index> class_counts() const;
    std::vector<Eigen::Index> indices_of(int label) const;

    // Subset in the given row order; keeps the class dictionary.
    Dataset subset(const std::vector<Eigen::Index>& rows) const;

    // First `d` feature columns.
    Dataset truncate_features(Eigen::Index d) const;

    // Throws InvalidArgument naming the first class with fewer than `min_count` samples.
    void require_class_counts(Eigen::Index min_count, const std::string& context) const;

  private:
    Matrix features_;
    std::vector<int> labels_;
    std::vector<std::string> class_names_;
};

// CSV: header `f1,...,fn,label`, then n reals and an integer label per row.
Dataset load_samples(const std::filesystem::path& path);
Dataset parse_samples(const std::string& text, const std::string& source = "<memory>");
std::string format_samples(const Dataset& ds);
void save_samples(const Dataset& ds, const std::filesystem::path& path);

struct Split {
    Dataset train;
    Dataset test;
};

// Stratified random split. Per class, round(train_fraction * n_c) samples go
// to train (clamped so each part keeps at least one). Rows keep their input
// order within each part. Identical inputs and seed give identical splits.
Split split_random(const Dataset& ds, double train_fraction, std::uint64_t seed);

// Row indices of the train part chosen by split_random; the test part is the complement.
std::vector<Eigen::Index> split_train_indices(const Dataset& ds, double train_fraction, std::uint64_t seed);

// Multi-band image, band-sequential float32 storage.
class RasterCube {
  public:
    using BandMap = Eigen::Map<Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    using ConstBandMap = Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

    RasterCube() = default;
    RasterCube(int width, int height, int bands, float fill = 0.0f);
    RasterCube(int width, int height, int bands, std::vector<float> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int bands() const noexcept { return bands_; }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }

    const std::vector<float>& data() const noexcept { return data_; }
    std::vector<float>& data() noexcept { return data_; }

    float& at(int band, int row, int col);
    float at(int band, int row, int col) const;

    // height x width view of one band.
    BandMap band(int b);
    ConstBandMap band(int b) const;

    Matrix band_as_matrix(int b) const;
    void set_band(int b, const Matrix& values);

    // Feature vector (one value per band) at a pixel.
    Vector pixel(int row, int col) const;

    bool operator==(const RasterCube&) const = default;

  private:
    int width_ = 0;
    int height_ = 0;
    int bands_ = 0;
    std::vector<float> data_;
};

// `TCRASTER width height bands\n` then little-endian float32 payload, band-sequential.
RasterCube load_raster(const std::filesystem::path& path);
RasterCube parse_raster(const std::string& bytes, const std::string& source = "<memory>");
std::string encode_raster(const RasterCube& cube);
void save_raster(const RasterCube& cube, const std::filesystem::path& path);

// True when the file starts with the raster magic.
bool is_raster_file(const std::filesystem::path& path);

}  // namespace lcc

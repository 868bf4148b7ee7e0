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

#include "lcc/data.hpp"

#include "lcc/random.hpp"
#include "lcc/text_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

namespace lcc {

Dataset::Dataset(Matrix features, std::vector<int> labels, int n_classes)
    : features_(std::move(features)), labels_(std::move(labels)) {
    if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
        throw InvalidArgument("dataset: " + std::to_string(features_.rows()) + " feature rows but " +
                              std::to_string(labels_.size()) + " labels");
    }
    if (features_.rows() > 0 && features_.cols() == 0) throw InvalidArgument("dataset: samples need at least one feature");
    if (!features_.allFinite()) throw DataError("dataset: non-finite feature value");
    int max_label = -1;
    for (int y : labels_) {
        if (y < 0) throw InvalidArgument("dataset: negative class label " + std::to_string(y));
        max_label = std::max(max_label, y);
    }
    if (n_classes < 0) n_classes = max_label + 1;
    if (max_label >= n_classes) {
        throw InvalidArgument("dataset: label " + std::to_string(max_label) + " outside class dictionary of size " +
                              std::to_string(n_classes));
    }
    class_names_.reserve(static_cast<std::size_t>(n_classes));
    for (int k = 0; k < n_classes; ++k) class_names_.push_back(std::to_string(k));
}

Dataset Dataset::from_samples(const std::vector<Sample>& samples, int n_classes) {
    if (samples.empty()) return Dataset(Matrix(0, 0), {}, n_classes < 0 ? 0 : n_classes);
    const auto d = samples.front().features.size();
    Matrix x(static_cast<Eigen::Index>(samples.size()), d);
    std::vector<int> y;
    y.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].features.size() != d) {
            throw InvalidArgument("dataset: sample " + std::to_string(i) + " has " +
                                  std::to_string(samples[i].features.size()) + " features, expected " +
                                  std::to_string(d));
        }
        x.row(static_cast<Eigen::Index>(i)) = samples[i].features.transpose();
        y.push_back(samples[i].label);
    }
    return Dataset(std::move(x), std::move(y), n_classes);
}

std::vector<Eigen::Index> Dataset::class_counts() const {
    std::vector<Eigen::Index> counts(class_names_.size(), 0);
    for (int y : labels_) ++counts[static_cast<std::size_t>(y)];
    return counts;
}

std::vector<Eigen::Index> Dataset::indices_of(int label) const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
    Matrix x(static_cast<Eigen::Index>(rows.size()), dim());
    std::vector<int> y;
    y.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = features_.row(rows[i]);
        y.push_back(labels_[static_cast<std::size_t>(rows[i])]);
    }
    return Dataset(std::move(x), std::move(y), n_classes());
}

Dataset Dataset::truncate_features(Eigen::Index d) const {
    if (d < 1 || d > dim()) {
        throw InvalidArgument("truncate_features: " + std::to_string(d) + " not in [1, " + std::to_string(dim()) + "]");
    }
    return Dataset(features_.leftCols(d), labels_, n_classes());
}

void Dataset::require_class_counts(Eigen::Index min_count, const std::string& context) const {
    const auto counts = class_counts();
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] < min_count) {
            throw InvalidArgument(context + ": class " + class_names_[k] + " has " + std::to_string(counts[k]) +
                                  " sample(s), needs at least " + std::to_string(min_count));
        }
    }
}

Dataset parse_samples(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    Eigen::Index dim = -1;
    std::vector<double> values;
    std::vector<int> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (io::trim(line).empty()) continue;
        const auto fields = io::split(line, ',');
        if (dim < 0) {
            if (fields.size() < 2 || fields.back() != "label") {
                throw ParseError(source, line_no, "header must be f1,...,fn,label");
            }
            dim = static_cast<Eigen::Index>(fields.size() - 1);
            continue;
        }
        if (static_cast<Eigen::Index>(fields.size()) != dim + 1) {
            throw ParseError(source, line_no,
                             "expected " + std::to_string(dim + 1) + " fields, found " + std::to_string(fields.size()));
        }
        for (Eigen::Index j = 0; j < dim; ++j) {
            double v = 0.0;
            const auto& f = fields[static_cast<std::size_t>(j)];
            if (!io::parse_double(f, v)) throw ParseError(source, line_no, "non-numeric feature '" + std::string(f) + "'");
            if (!std::isfinite(v)) throw ParseError(source, line_no, "non-finite feature '" + std::string(f) + "'");
            values.push_back(v);
        }
        long long label = 0;
        if (!io::parse_int(fields.back(), label) || label < 0 || label > 1'000'000) {
            throw ParseError(source, line_no, "label must be a non-negative integer, found '" + std::string(fields.back()) + "'");
        }
        labels.push_back(static_cast<int>(label));
    }
    if (dim < 0) throw DataError(source + ": empty sample file");
    if (labels.empty()) throw DataError(source + ": sample file has a header but no rows");
    const auto n = static_cast<Eigen::Index>(labels.size());
    Matrix x = Eigen::Map<const RowMatrix>(values.data(), n, dim);
    return Dataset(std::move(x), std::move(labels));
}

Dataset load_samples(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
    return parse_samples(io::read_file(path), path.string());
}

std::string format_samples(const Dataset& ds) {
    std::string out;
    for (Eigen::Index j = 0; j < ds.dim(); ++j) out += "f" + std::to_string(j + 1) + ",";
    out += "label\n";
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        for (Eigen::Index j = 0; j < ds.dim(); ++j) {
            out += io::format_double(ds.features()(i, j));
            out.push_back(',');
        }
        out += std::to_string(ds.y(i));
        out.push_back('\n');
    }
    return out;
}

void save_samples(const Dataset& ds, const std::filesystem::path& path) { io::write_file_atomic(path, format_samples(ds)); }

std::vector<Eigen::Index> split_train_indices(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidArgument("split_random: train fraction must lie in (0, 1), got " + io::format_double(train_fraction));
    }
    const auto counts = ds.class_counts();
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 1) {
            throw InvalidArgument("split_random: class " + ds.class_names()[k] + " has a single sample");
        }
    }
    Rng rng(seed);
    std::vector<Eigen::Index> train;
    for (int k = 0; k < ds.n_classes(); ++k) {
        auto idx = ds.indices_of(k);
        if (idx.empty()) continue;
        const auto n = static_cast<double>(idx.size());
        auto n_train = static_cast<Eigen::Index>(std::llround(train_fraction * n));
        n_train = std::clamp<Eigen::Index>(n_train, 1, static_cast<Eigen::Index>(idx.size()) - 1);
        rng.shuffle(std::span<Eigen::Index>(idx));
        train.insert(train.end(), idx.begin(), idx.begin() + n_train);
    }
    std::sort(train.begin(), train.end());
    return train;
}

Split split_random(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    const auto train = split_train_indices(ds, train_fraction, seed);
    std::vector<Eigen::Index> test;
    std::size_t t = 0;
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        if (t < train.size() && train[t] == i) {
            ++t;
        } else {
            test.push_back(i);
        }
    }
    return {ds.subset(train), ds.subset(test)};
}

RasterCube::RasterCube(int width, int height, int bands, float fill)
    : RasterCube(width, height, bands,
                 std::vector<float>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0) *
                                        std::max(bands, 0),
                                    fill)) {}

RasterCube::RasterCube(int width, int height, int bands, std::vector<float> data)
    : width_(width), height_(height), bands_(bands), data_(std::move(data)) {
    if (width < 1 || height < 1 || bands < 1) {
        throw InvalidArgument("raster: dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(width) * height * bands) {
        throw InvalidArgument("raster: payload holds " + std::to_string(data_.size()) + " values, header implies " +
                              std::to_string(static_cast<std::size_t>(width) * height * bands));
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) throw DataError("raster: non-finite value at index " + std::to_string(i));
    }
}

float& RasterCube::at(int band, int row, int col) {
    return data_[(static_cast<std::size_t>(band) * height_ + row) * width_ + col];
}

float RasterCube::at(int band, int row, int col) const {
    return data_[(static_cast<std::size_t>(band) * height_ + row) * width_ + col];
}

RasterCube::BandMap RasterCube::band(int b) {
    return BandMap(data_.data() + static_cast<std::size_t>(b) * pixel_count(), height_, width_);
}

RasterCube::ConstBandMap RasterCube::band(int b) const {
    return ConstBandMap(data_.data() + static_cast<std::size_t>(b) * pixel_count(), height_, width_);
}

Matrix RasterCube::band_as_matrix(int b) const { return band(b).cast<double>(); }

void RasterCube::set_band(int b, const Matrix& values) {
    if (values.rows() != height_ || values.cols() != width_) throw InvalidArgument("raster: band shape mismatch");
    if (!values.allFinite()) throw DataError("raster: non-finite band values");
    band(b) = values.cast<float>();
}

Vector RasterCube::pixel(int row, int col) const {
    Vector v(bands_);
    for (int b = 0; b < bands_; ++b) v[b] = at(b, row, col);
    return v;
}

namespace {

constexpr std::string_view kRasterMagic = "TCRASTER";

std::uint32_t to_little(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
    }
    return v;
}

}  // namespace

std::string encode_raster(const RasterCube& cube) {
    std::string out = std::string(kRasterMagic) + " " + std::to_string(cube.width()) + " " +
                      std::to_string(cube.height()) + " " + std::to_string(cube.bands()) + "\n";
    const std::size_t header = out.size();
    out.resize(header + cube.data().size() * 4);
    for (std::size_t i = 0; i < cube.data().size(); ++i) {
        const auto bits = to_little(std::bit_cast<std::uint32_t>(cube.data()[i]));
        std::memcpy(out.data() + header + 4 * i, &bits, 4);
    }
    return out;
}

RasterCube parse_raster(const std::string& bytes, const std::string& source) {
    const auto eol = bytes.find('\n');
    if (eol == std::string::npos) throw ParseError(source, 1, "missing raster header line");
    const auto tokens = io::split_ws(std::string_view(bytes).substr(0, eol));
    if (tokens.size() != 4 || tokens[0] != kRasterMagic) {
        throw ParseError(source, 1, "header must be 'TCRASTER width height bands'");
    }
    long long dims[3];
    for (int k = 0; k < 3; ++k) {
        if (!io::parse_int(tokens[static_cast<std::size_t>(k) + 1], dims[k]) || dims[k] < 1 || dims[k] > (1 << 20)) {
            throw ParseError(source, 1, "invalid raster dimension '" + std::string(tokens[static_cast<std::size_t>(k) + 1]) + "'");
        }
    }
    const auto count = static_cast<std::size_t>(dims[0] * dims[1] * dims[2]);
    const std::size_t payload = bytes.size() - eol - 1;
    if (payload != count * 4) {
        throw DataError(source + ": raster size mismatch: header declares " + std::to_string(count) +
                        " values, payload holds " + std::to_string(payload / 4) +
                        (payload % 4 ? " (plus a partial value)" : ""));
    }
    std::vector<float> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t bits = 0;
        std::memcpy(&bits, bytes.data() + eol + 1 + 4 * i, 4);
        data[i] = std::bit_cast<float>(to_little(bits));
        if (!std::isfinite(data[i])) {
            const auto pix = static_cast<std::size_t>(dims[0] * dims[1]);
            const auto band = i / pix;
            const auto rem = i % pix;
            throw DataError(source + ": non-finite raster value at band " + std::to_string(band) + ", row " +
                            std::to_string(rem / static_cast<std::size_t>(dims[0])) + ", col " +
                            std::to_string(rem % static_cast<std::size_t>(dims[0])) + " (index " + std::to_string(i) + ")");
        }
    }
    return RasterCube(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]), std::move(data));
}

RasterCube load_raster(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
    return parse_raster(io::read_file(path), path.string());
}

void save_raster(const RasterCube& cube, const std::filesystem::path& path) {
    io::write_file_atomic(path, encode_raster(cube));
}

bool is_raster_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    char buf[8] = {};
    in.read(buf, 8);
    return in.gcount() == 8 && std::string_view(buf, 8) == kRasterMagic;
}

}  // namespace lcc

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

#include "lcc/destripe.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace lcc {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Signed frequency index of bin k in an n-point transform.
int signed_bin(int k, int n) { return k <= n / 2 ? k : k - n; }

int wrap(int k, int n) { return ((k % n) + n) % n; }

}  // namespace

ComplexMatrix fft2(const Eigen::Ref<const Matrix>& grid) {
    Eigen::FFT<double> fft;
    const Eigen::Index rows = grid.rows();
    const Eigen::Index cols = grid.cols();
    ComplexMatrix out(rows, cols);
    std::vector<double> rin(static_cast<std::size_t>(cols));
    std::vector<std::complex<double>> cout_(static_cast<std::size_t>(cols));
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) rin[static_cast<std::size_t>(c)] = grid(r, c);
        fft.fwd(cout_, rin);
        for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = cout_[static_cast<std::size_t>(c)];
    }
    std::vector<std::complex<double>> cin(static_cast<std::size_t>(rows));
    std::vector<std::complex<double>> cres(static_cast<std::size_t>(rows));
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) cin[static_cast<std::size_t>(r)] = out(r, c);
        fft.fwd(cres, cin);
        for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = cres[static_cast<std::size_t>(r)];
    }
    return out;
}

ComplexMatrix ifft2(const ComplexMatrix& spectrum) {
    Eigen::FFT<double> fft;  // inverse is scaled by 1/n per axis
    const Eigen::Index rows = spectrum.rows();
    const Eigen::Index cols = spectrum.cols();
    ComplexMatrix out = spectrum;
    std::vector<std::complex<double>> in(static_cast<std::size_t>(std::max(rows, cols)));
    std::vector<std::complex<double>> res;
    for (Eigen::Index r = 0; r < rows; ++r) {
        in.assign(static_cast<std::size_t>(cols), {});
        for (Eigen::Index c = 0; c < cols; ++c) in[static_cast<std::size_t>(c)] = out(r, c);
        fft.inv(res, in);
        for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = res[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
        in.assign(static_cast<std::size_t>(rows), {});
        for (Eigen::Index r = 0; r < rows; ++r) in[static_cast<std::size_t>(r)] = out(r, c);
        fft.inv(res, in);
        for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = res[static_cast<std::size_t>(r)];
    }
    return out;
}

Matrix averaged_log_spectrum(const Eigen::Ref<const Matrix>& band, const BlockSpectrumParams& params) {
    const int block = params.block;
    if (!is_power_of_two(block)) throw InvalidArgument("block size must be a power of two, got " + std::to_string(block));
    if (!(params.overlap >= 0.0 && params.overlap < 1.0)) throw InvalidArgument("overlap fraction must lie in [0, 1)");
    if (band.rows() < block || band.cols() < block) {
        throw InvalidArgument("band of " + std::to_string(band.rows()) + "x" + std::to_string(band.cols()) +
                              " is smaller than the " + std::to_string(block) + "-pixel block");
    }
    const int step = std::max(1, static_cast<int>(std::lround(block * (1.0 - params.overlap))));
    Matrix acc = Matrix::Zero(block, block);
    int count = 0;
    for (Eigen::Index r = 0; r + block <= band.rows(); r += step) {
        for (Eigen::Index c = 0; c + block <= band.cols(); c += step) {
            acc += fft2(band.block(r, c, block, block)).cwiseAbs().array().log1p().matrix();
            ++count;
        }
    }
    return acc / count;
}

StripeFilter build_filter(const Eigen::Ref<const Matrix>& avg_spectrum, int full_rows, int full_cols,
                          const PeakParams& params) {
    if (avg_spectrum.rows() != avg_spectrum.cols() || !is_power_of_two(static_cast<int>(avg_spectrum.rows()))) {
        throw InvalidArgument("averaged spectrum must be square with a power-of-two side");
    }
    if (full_rows < 1 || full_cols < 1) throw InvalidArgument("filter dimensions must be positive");
    const int n = static_cast<int>(avg_spectrum.rows());
    const int w = params.window_radius;

    StripeFilter filter;
    filter.block = n;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> notch =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
    std::vector<double> window;
    window.reserve(static_cast<std::size_t>((2 * w + 1) * (2 * w + 1)));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int fr = signed_bin(r, n);
            const int fc = signed_bin(c, n);
            if (fr * fr + fc * fc <= params.dc_radius * params.dc_radius) continue;
            window.clear();
            for (int dr = -w; dr <= w; ++dr) {
                for (int dc = -w; dc <= w; ++dc) window.push_back(avg_spectrum(wrap(r + dr, n), wrap(c + dc, n)));
            }
            const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
            std::nth_element(window.begin(), mid, window.end());
            const double median = *mid;
            for (auto& v : window) v = std::abs(v - median);
            std::nth_element(window.begin(), mid, window.end());
            const double sigma = std::max(1.4826 * *mid, params.min_deviation);
            if (avg_spectrum(r, c) > median + params.threshold_sigmas * sigma) notch(r, c) = true;
        }
    }
    // Symmetrize in block space so the detection list is conjugate-closed.
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (notch(r, c)) notch(wrap(-r, n), wrap(-c, n)) = true;
        }
    }
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (notch(r, c)) filter.suppressed.push_back({r, c});
        }
    }

    filter.mask = Matrix::Ones(full_rows, full_cols);
    if (filter.suppressed.empty()) return filter;
    const auto to_block_bin = [n](int k, int full) {
        const double f = static_cast<double>(signed_bin(k, full)) / full;  // cycles per pixel
        return wrap(static_cast<int>(std::lround(f * n)), n);
    };
    std::vector<int> row_map(static_cast<std::size_t>(full_rows));
    std::vector<int> col_map(static_cast<std::size_t>(full_cols));
    for (int r = 0; r < full_rows; ++r) row_map[static_cast<std::size_t>(r)] = to_block_bin(r, full_rows);
    for (int c = 0; c < full_cols; ++c) col_map[static_cast<std::size_t>(c)] = to_block_bin(c, full_cols);
    for (int r = 0; r < full_rows; ++r) {
        for (int c = 0; c < full_cols; ++c) {
            if (notch(row_map[static_cast<std::size_t>(r)], col_map[static_cast<std::size_t>(c)])) filter.mask(r, c) = 0.0;
        }
    }
    // Rounding at half bins can break conjugate symmetry; keep a bin only if its mirror is kept.
    for (int r = 0; r < full_rows; ++r) {
        for (int c = 0; c < full_cols; ++c) {
            const int mr = wrap(-r, full_rows);
            const int mc = wrap(-c, full_cols);
            const double m = std::min(filter.mask(r, c), filter.mask(mr, mc));
            filter.mask(r, c) = filter.mask(mr, mc) = m;
        }
    }
    filter.mask(0, 0) = 1.0;
    return filter;
}

namespace {

ComplexMatrix filtered_inverse(const Eigen::Ref<const Matrix>& band, const StripeFilter& filter) {
    if (filter.mask.rows() != band.rows() || filter.mask.cols() != band.cols()) {
        throw InvalidArgument("filter is " + std::to_string(filter.mask.rows()) + "x" +
                              std::to_string(filter.mask.cols()) + " but band is " + std::to_string(band.rows()) + "x" +
                              std::to_string(band.cols()));
    }
    ComplexMatrix spec = fft2(band);
    spec.array() *= filter.mask.array().cast<std::complex<double>>();
    return ifft2(spec);
}

}  // namespace

Matrix destripe_band(const Eigen::Ref<const Matrix>& band, const StripeFilter& filter) {
    return filtered_inverse(band, filter).real();
}

double destripe_imaginary_residual(const Eigen::Ref<const Matrix>& band, const StripeFilter& filter) {
    return filtered_inverse(band, filter).imag().cwiseAbs().maxCoeff();
}

double spectral_energy(const Eigen::Ref<const Matrix>& band, bool include_dc) {
    const ComplexMatrix spec = fft2(band);
    double e = spec.cwiseAbs2().sum();
    if (!include_dc) e -= std::norm(spec(0, 0));
    return std::max(e, 0.0);
}

double stripe_energy(const Eigen::Ref<const Matrix>& band, StripeAxis axis, double period_px) {
    if (!(period_px >= 2.0)) throw InvalidArgument("stripe period must be >= 2 pixels");
    const Eigen::Index len = axis == StripeAxis::rows ? band.rows() : band.cols();
    if (period_px > static_cast<double>(len)) {
        throw InvalidArgument("stripe period exceeds the band extent along that axis");
    }
    const ComplexMatrix spec = fft2(band);
    double total = spec.cwiseAbs2().sum() - std::norm(spec(0, 0));
    // Relative to the largest bin, anything below round-off is no energy at all.
    const double scale = spec.cwiseAbs2().maxCoeff();
    if (total <= 1e-20 * scale || total <= 0.0) return 0.0;
    const auto k = static_cast<Eigen::Index>(std::lround(static_cast<double>(len) / period_px));
    const Eigen::Index mirror = (len - k) % len;
    double peak = 0.0;
    if (axis == StripeAxis::rows) {
        peak = std::norm(spec(k, 0)) + (mirror != k ? std::norm(spec(mirror, 0)) : 0.0);
    } else {
        peak = std::norm(spec(0, k)) + (mirror != k ? std::norm(spec(0, mirror)) : 0.0);
    }
    return peak / total;
}

}  // namespace lcc

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

#include <complex>
#include <vector>

namespace lcc {

using ComplexMatrix = Eigen::MatrixXcd;

// 2-D DFT of a real grid (rows x cols), unnormalized forward / normalized inverse.
ComplexMatrix fft2(const Eigen::Ref<const Matrix>& grid);
ComplexMatrix ifft2(const ComplexMatrix& spectrum);

struct BlockSpectrumParams {
    int block = 128;
    double overlap = 0.5;  // fraction of the block shared by neighbours, in [0, 1)
};

// Mean over overlapping blocks of ln(1 + |FFT(block)|), block x block.
// Blocks tile from the top-left; partial trailing blocks are dropped.
Matrix averaged_log_spectrum(const Eigen::Ref<const Matrix>& band, const BlockSpectrumParams& params = {});

struct PeakParams {
    double threshold_sigmas = 4.0;
    int dc_radius = 3;          // protected disk around DC, in block bins
    int window_radius = 5;      // local statistics window (2r+1)^2, wrapped
    double min_deviation = 0.05;  // floor on the robust deviation, log units
};

struct FrequencyBin {
    int row = 0;
    int col = 0;
    bool operator==(const FrequencyBin&) const = default;
};

// 0/1 attenuation mask at full-image size, conjugate-symmetric.
struct StripeFilter {
    Matrix mask;                       // rows x cols of the target image
    int block = 0;
    std::vector<FrequencyBin> suppressed;  // detected block bins

    std::size_t suppressed_bins() const { return suppressed.size(); }
};

// Peak-picks the averaged spectrum (local median + k * 1.4826 * MAD, DC disk
// protected) and maps the block-bin notches to the full image by nearest frequency.
StripeFilter build_filter(const Eigen::Ref<const Matrix>& avg_spectrum, int full_rows, int full_cols,
                          const PeakParams& params = {});

// Real part of ifft2(fft2(band) .* mask).
Matrix destripe_band(const Eigen::Ref<const Matrix>& band, const StripeFilter& filter);

// Largest |imag| of ifft2(fft2(band) .* mask); a diagnostic for mask symmetry.
double destripe_imaginary_residual(const Eigen::Ref<const Matrix>& band, const StripeFilter& filter);

enum class StripeAxis { rows, cols };

// Energy at the frequency pair of a sinusoid with the given period along the
// axis (rows: varies with row index, cols: varies with column index),
// divided by the total non-DC spectral energy. 0 for a constant band.
double stripe_energy(const Eigen::Ref<const Matrix>& band, StripeAxis axis, double period_px);

// Non-DC spectral energy sum |F|^2.
double spectral_energy(const Eigen::Ref<const Matrix>& band, bool include_dc = false);

}  // namespace lcc

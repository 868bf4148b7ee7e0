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

#include "kernel_cache.hpp"

#include <algorithm>

namespace lcc::detail {

KernelCache::KernelCache(const KernelSpec& spec, const Eigen::Ref<const Matrix>& x, Eigen::Index full_limit,
                         std::size_t cache_bytes)
    : spec_(spec), x_(x), diag_(x.rows()) {
    const Eigen::Index n = x_.rows();
    for (Eigen::Index i = 0; i < n; ++i) diag_[i] = kernel_eval(spec_, x_.row(i), x_.row(i));
    full_ = n <= full_limit;
    if (full_) {
        gram_ = gram_matrix(spec_, x_);
    } else {
        const std::size_t row_bytes = static_cast<std::size_t>(n) * sizeof(double);
        capacity_ = std::max<std::size_t>(2, cache_bytes / std::max<std::size_t>(row_bytes, 1));
    }
}

void KernelCache::compute_row(Eigen::Index i, double* dst) const {
    for (Eigen::Index j = 0; j < x_.rows(); ++j) dst[j] = kernel_eval(spec_, x_.row(i), x_.row(j));
}

const double* KernelCache::row(Eigen::Index i) {
    if (full_) return gram_.col(i).data();
    if (auto it = index_.find(i); it != index_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second);
        return it->second->second.data();
    }
    if (lru_.size() >= capacity_) {
        index_.erase(lru_.back().first);
        lru_.pop_back();
    }
    lru_.emplace_front(i, Vector(x_.rows()));
    compute_row(i, lru_.front().second.data());
    ++computed_rows_;
    index_[i] = lru_.begin();
    return lru_.front().second.data();
}

}  // namespace lcc::detail

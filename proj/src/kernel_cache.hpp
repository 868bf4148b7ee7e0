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

#include "lcc/svm.hpp"

#include <list>
#include <unordered_map>

namespace lcc::detail {

// Kernel rows for the SMO solver: the full Gram matrix for small problems,
// otherwise an LRU cache of rows. A returned row stays valid until two more
// distinct rows have been requested.
class KernelCache {
  public:
    KernelCache(const KernelSpec& spec, const Eigen::Ref<const Matrix>& x, Eigen::Index full_limit,
                std::size_t cache_bytes);

    const double* row(Eigen::Index i);
    double diag(Eigen::Index i) const { return diag_[i]; }
    bool is_full() const noexcept { return full_; }
    std::size_t computed_rows() const noexcept { return computed_rows_; }

  private:
    void compute_row(Eigen::Index i, double* dst) const;

    KernelSpec spec_;
    Matrix x_;
    Vector diag_;
    bool full_ = false;
    Matrix gram_;  // column i holds row i (symmetric)
    std::size_t capacity_ = 0;
    std::list<std::pair<Eigen::Index, Vector>> lru_;
    std::unordered_map<Eigen::Index, std::list<std::pair<Eigen::Index, Vector>>::iterator> index_;
    std::size_t computed_rows_ = 0;
};

}  // namespace lcc::detail

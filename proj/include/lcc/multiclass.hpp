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
#include "lcc/svm.hpp"

#include <iosfwd>
#include <vector>

namespace lcc {

struct PairModel {
    int class_a = 0;  // mapped to +1
    int class_b = 0;  // mapped to -1
    BinarySvmModel model;
};

// One-against-one ensemble: n(n-1)/2 binary models, pairs ordered (0,1), (0,2), ..., (n-2,n-1).
struct MulticlassModel {
    int n_classes = 0;
    KernelSpec kernel;
    double C = 0.0;
    std::vector<PairModel> pairs;

    Eigen::Index dim() const;
    std::size_t support_vector_total() const;
};

inline std::size_t pair_count(int n_classes) {
    return static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(n_classes - 1) / 2;
}

// Trains every class pair on the samples of those two classes only, in input
// order. Pairs may train concurrently (`threads`, 0 = hardware); assembly is by pair index.
MulticlassModel train_one_vs_one(const Dataset& train, const TrainConfig& cfg, const KernelSpec& kernel,
                                 unsigned threads = 1);

// Votes per class; a non-negative decision value votes for class_a.
std::vector<int> vote_tally(const MulticlassModel& model, const Eigen::Ref<const Vector>& x);

// Class with the most votes; ties go to the lowest class id.
int predict(const MulticlassModel& model, const Eigen::Ref<const Vector>& x);

std::vector<int> predict_all(const MulticlassModel& model, const Eigen::Ref<const Matrix>& rows);

int argmax_lowest(const std::vector<int>& votes);

void write_multiclass_model(std::ostream& out, const MulticlassModel& model);
MulticlassModel read_multiclass_model(io::KeyValueReader& in);

}  // namespace lcc

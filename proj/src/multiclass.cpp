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

#include "lcc/multiclass.hpp"

#include "lcc/parallel.hpp"
#include "lcc/text_io.hpp"

#include <ostream>

namespace lcc {

Eigen::Index MulticlassModel::dim() const {
    for (const auto& p : pairs) {
        if (p.model.sv_count() > 0) return p.model.dim();
    }
    return 0;
}

std::size_t MulticlassModel::support_vector_total() const {
    std::size_t total = 0;
    for (const auto& p : pairs) total += static_cast<std::size_t>(p.model.sv_count());
    return total;
}

MulticlassModel train_one_vs_one(const Dataset& train, const TrainConfig& cfg, const KernelSpec& kernel,
                                 unsigned threads) {
    cfg.validate();
    kernel.validate();
    if (train.n_classes() < 2) throw InvalidArgument("one-vs-one training needs at least 2 classes");
    train.require_class_counts(1, "one-vs-one training");

    MulticlassModel out;
    out.n_classes = train.n_classes();
    out.kernel = kernel;
    out.C = cfg.C;
    for (int a = 0; a < out.n_classes; ++a) {
        for (int b = a + 1; b < out.n_classes; ++b) out.pairs.push_back({a, b, {}});
    }

    parallel_for(out.pairs.size(), threads, [&](std::size_t p) {
        auto& pair = out.pairs[p];
        std::vector<Eigen::Index> rows;
        std::vector<int> y;
        for (Eigen::Index i = 0; i < train.size(); ++i) {
            if (train.y(i) == pair.class_a || train.y(i) == pair.class_b) {
                rows.push_back(i);
                y.push_back(train.y(i) == pair.class_a ? 1 : -1);
            }
        }
        Matrix x(static_cast<Eigen::Index>(rows.size()), train.dim());
        for (std::size_t r = 0; r < rows.size(); ++r) x.row(static_cast<Eigen::Index>(r)) = train.x(rows[r]);
        try {
            pair.model = train_binary(x, y, cfg, kernel);
        } catch (const SvmConvergenceError& e) {
            throw SvmConvergenceError("pair (" + train.class_names()[static_cast<std::size_t>(pair.class_a)] + ", " +
                                          train.class_names()[static_cast<std::size_t>(pair.class_b)] + "): " + e.what(),
                                      e.diagnostics());
        } catch (const TrainingError& e) {
            throw TrainingError("pair (" + std::to_string(pair.class_a) + ", " + std::to_string(pair.class_b) +
                                "): " + e.what());
        }
        // Support vector indices refer to the full training set.
        for (auto& idx : pair.model.sv_indices) idx = rows[static_cast<std::size_t>(idx)];
    });
    return out;
}

std::vector<int> vote_tally(const MulticlassModel& model, const Eigen::Ref<const Vector>& x) {
    const auto d = model.dim();
    if (d > 0 && x.size() != d) {
        throw InvalidArgument("vote_tally: model expects " + std::to_string(d) + " features, got " +
                              std::to_string(x.size()));
    }
    std::vector<int> votes(static_cast<std::size_t>(model.n_classes), 0);
    for (const auto& p : model.pairs) {
        const int winner = decision_value(p.model, x) >= 0.0 ? p.class_a : p.class_b;
        ++votes[static_cast<std::size_t>(winner)];
    }
    return votes;
}

int argmax_lowest(const std::vector<int>& votes) {
    int best = 0;
    for (std::size_t k = 1; k < votes.size(); ++k) {
        if (votes[k] > votes[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
    }
    return best;
}

int predict(const MulticlassModel& model, const Eigen::Ref<const Vector>& x) {
    return argmax_lowest(vote_tally(model, x));
}

std::vector<int> predict_all(const MulticlassModel& model, const Eigen::Ref<const Matrix>& rows) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) out.push_back(predict(model, rows.row(i).transpose()));
    return out;
}

void write_multiclass_model(std::ostream& out, const MulticlassModel& model) {
    out << "svm_one_vs_one\n";
    out << "classes " << model.n_classes << "\n";
    out << "kernel " << model.kernel.name() << "\n";
    out << "gamma " << io::format_double(model.kernel.gamma) << "\n";
    out << "C " << io::format_double(model.C) << "\n";
    out << "pairs " << model.pairs.size() << "\n";
    for (const auto& p : model.pairs) {
        out << "pair " << p.class_a << ' ' << p.class_b << "\n";
        write_binary_model(out, p.model);
    }
}

MulticlassModel read_multiclass_model(io::KeyValueReader& in) {
    in.expect("svm_one_vs_one", 0);
    MulticlassModel m;
    const long long n = in.expect_int("classes");
    if (n < 2 || n > 100000) in.fail("class count must be >= 2");
    m.n_classes = static_cast<int>(n);
    m.kernel.kind = parse_kernel_kind(in.expect_word("kernel"));
    m.kernel.gamma = in.expect_double("gamma");
    m.C = in.expect_double("C");
    const long long count = in.expect_int("pairs");
    if (count != static_cast<long long>(pair_count(m.n_classes))) {
        in.fail("expected " + std::to_string(pair_count(m.n_classes)) + " pairs for " + std::to_string(n) +
                " classes, found " + std::to_string(count));
    }
    for (int a = 0; a < m.n_classes; ++a) {
        for (int b = a + 1; b < m.n_classes; ++b) {
            const auto ids = in.expect("pair", 2);
            if (ids[0] != std::to_string(a) || ids[1] != std::to_string(b)) {
                in.fail("expected pair " + std::to_string(a) + " " + std::to_string(b));
            }
            m.pairs.push_back({a, b, read_binary_model(in)});
        }
    }
    return m;
}

}  // namespace lcc

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

// Independent reference computations used by the tests.

#include "lcc/common.hpp"
#include "lcc/random.hpp"
#include "lcc/svm.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace lcc::testing {

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    }
    return m;
}

inline Vector random_vector(Rng& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
    return v;
}

// Kernel matrix computed entry by entry from the textbook definitions.
inline Matrix reference_gram(const KernelSpec& k, const Matrix& x) {
    const Eigen::Index n = x.rows();
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double v = 0.0;
            if (k.kind == KernelKind::linear) {
                for (Eigen::Index d = 0; d < x.cols(); ++d) v += x(i, d) * x(j, d);
            } else {
                double s = 0.0;
                for (Eigen::Index d = 0; d < x.cols(); ++d) s += (x(i, d) - x(j, d)) * (x(i, d) - x(j, d));
                v = std::exp(-k.gamma * s);
            }
            g(i, j) = v;
        }
    }
    return g;
}

inline Matrix signed_gram(const KernelSpec& k, const Matrix& x, const std::vector<int>& y) {
    Matrix q = reference_gram(k, x);
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        for (Eigen::Index j = 0; j < q.cols(); ++j) q(i, j) *= y[i] * y[j];
    }
    return q;
}

inline double dual_value(const Matrix& q, const Vector& a) { return a.sum() - 0.5 * a.dot(q * a); }

// Euclidean projection onto {0 <= a <= C, y.a = 0}: a = clip(v - mu y), mu by bisection.
inline Vector project_feasible(const Vector& v, const std::vector<int>& y, double C) {
    auto clipped = [&](double mu) {
        Vector a(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) a(i) = std::clamp(v(i) - mu * y[i], 0.0, C);
        return a;
    };
    auto balance = [&](double mu) {
        const Vector a = clipped(mu);
        double s = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) s += y[i] * a(i);
        return s;
    };
    double lo = -(v.cwiseAbs().maxCoeff() + C + 1.0);
    double hi = -lo;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (balance(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return clipped(0.5 * (lo + hi));
}

// Maximum of the dual by accelerated projected-gradient ascent from several starts.
inline double pg_oracle_max(const Matrix& q, const std::vector<int>& y, double C, Rng& rng, int restarts = 8,
                            double tol = 1e-10, int max_iter = 200000) {
    const Eigen::Index n = q.rows();
    const double lipschitz = std::max(Eigen::SelfAdjointEigenSolver<Matrix>(q).eigenvalues().maxCoeff(), 1e-12);
    const double step = 1.0 / lipschitz;
    double best = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        Vector start(n);
        for (Eigen::Index i = 0; i < n; ++i) start(i) = r == 0 ? 0.0 : rng.uniform(0.0, C);
        Vector a = project_feasible(start, y, C);
        Vector prev = a;
        double t = 1.0;
        double value = dual_value(q, a);
        for (int it = 0; it < max_iter; ++it) {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            const Vector z = a + ((t - 1.0) / t_next) * (a - prev);
            const Vector grad = Vector::Ones(n) - q * z;
            Vector next = project_feasible(z + step * grad, y, C);
            double next_value = dual_value(q, next);
            if (next_value < value) {  // adaptive restart keeps the sequence monotone
                next = project_feasible(a + step * (Vector::Ones(n) - q * a), y, C);
                next_value = dual_value(q, next);
                t = 1.0;
            } else {
                t = t_next;
            }
            prev = a;
            a = next;
            const bool settled = (a - prev).norm() <= tol * std::max(1.0, a.norm());
            value = next_value;
            if (settled) break;
        }
        best = std::max(best, value);
    }
    return best;
}

// Exact maximum by enumerating which multipliers sit at 0, at C, or strictly inside.
// Each free set gives a linear KKT system; feasible stationary points are compared.
inline double enumerated_max(const Matrix& q, const std::vector<int>& y, double C) {
    const int n = static_cast<int>(q.rows());
    int combos = 1;
    for (int i = 0; i < n; ++i) combos *= 3;
    double best = -std::numeric_limits<double>::infinity();
    for (int code = 0; code < combos; ++code) {
        std::vector<int> state(n);
        int c = code;
        for (int i = 0; i < n; ++i) {
            state[i] = c % 3;  // 0: zero, 1: at C, 2: free
            c /= 3;
        }
        std::vector<int> free;
        Vector a = Vector::Zero(n);
        for (int i = 0; i < n; ++i) {
            if (state[i] == 1) a(i) = C;
            if (state[i] == 2) free.push_back(i);
        }
        const int m = static_cast<int>(free.size());
        if (m > 0) {
            // [Q_ff  -y_f] [a_f]   [1 - Q_fb a_b]
            // [y_f^T   0 ] [mu ] = [-y_b . a_b  ]
            Matrix sys = Matrix::Zero(m + 1, m + 1);
            Vector rhs(m + 1);
            double yb = 0.0;
            for (int i = 0; i < n; ++i) yb += y[i] * (state[i] == 1 ? C : 0.0);
            for (int r = 0; r < m; ++r) {
                double fixed = 0.0;
                for (int i = 0; i < n; ++i) fixed += q(free[r], i) * a(i);
                rhs(r) = 1.0 - fixed;
                for (int s = 0; s < m; ++s) sys(r, s) = q(free[r], free[s]);
                sys(r, m) = -y[free[r]];
                sys(m, r) = y[free[r]];
            }
            rhs(m) = -yb;
            Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sys);
            const Vector sol = cod.solve(rhs);
            if ((sys * sol - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm())) continue;
            for (int r = 0; r < m; ++r) a(free[r]) = sol(r);
        }
        bool feasible = true;
        double balance = 0.0;
        for (int i = 0; i < n; ++i) {
            if (a(i) < -1e-9 || a(i) > C + 1e-9) feasible = false;
            balance += y[i] * a(i);
        }
        if (!feasible || std::abs(balance) > 1e-7 * std::max(1.0, C)) continue;
        for (int i = 0; i < n; ++i) a(i) = std::clamp(a(i), 0.0, C);
        best = std::max(best, dual_value(q, a));
    }
    return best;
}

// Scratch directory removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        Rng rng(std::hash<std::string>{}(tag) ^ static_cast<std::uint64_t>(
                    std::filesystem::file_time_type::clock::now().time_since_epoch().count()));
        path_ = std::filesystem::temp_directory_path() / ("lcc_" + tag + "_" + std::to_string(rng.next() % 1000000007));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

}  // namespace lcc::testing

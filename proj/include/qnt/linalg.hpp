// Copyright 2026 The qnt Authors
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

#include <cmath>
#include <cstddef>
#include <vector>

namespace qnt {

/// Dense symmetric matrix stored row-major. Only the sizes that arise here
/// (parameter counts up to a few hundred) are targeted.
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const std::vector<double>& data() const { return a_; }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += at(i, i);
        return t;
    }

    SymMatrix& operator+=(const SymMatrix& other) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
        return *this;
    }

  private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

struct EigenDecomposition {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column k (row-major n x n) is the eigenvector of values[k]
};

/// Cyclic Jacobi rotations for real symmetric matrices. Deterministic and
/// accurate for the small dense systems assembled in this project.
inline EigenDecomposition eigen_symmetric(const SymMatrix& m) {
    const std::size_t n = m.size();
    std::vector<double> a(m.data());
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto off = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        return s;
    };

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off() > 1e-300; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::fabs(apq) == 0.0) continue;
                double app = a[p * n + p], aqq = a[q * n + q];
                double scale = std::fabs(app) + std::fabs(aqq) + std::fabs(apq);
                if (scale + std::fabs(apq) == scale) {
                    a[p * n + q] = a[q * n + p] = 0.0;
                    continue;
                }
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v[k * n + p], vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenDecomposition out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a[i * n + i];

    // Sort ascending, permuting eigenvector columns along.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (out.values[order[j]] < out.values[order[i]]) std::swap(order[i], order[j]);

    EigenDecomposition sorted;
    sorted.values.resize(n);
    sorted.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted.values[k] = out.values[order[k]];
        for (std::size_t r = 0; r < n; ++r) sorted.vectors[r * n + k] = v[r * n + order[k]];
    }
    return sorted;
}

/// Inverse of a symmetric positive definite matrix through its eigensystem.
/// Returns false (leaving `inv` untouched) when an eigenvalue falls below
/// `rel_tol * max(|lambda_max|, 1)`.
inline bool invert_spd(const SymMatrix& m, SymMatrix& inv, double rel_tol = 1e-12) {
    const std::size_t n = m.size();
    EigenDecomposition ed = eigen_symmetric(m);
    double lmax = 0.0;
    for (double l : ed.values) lmax = std::max(lmax, std::fabs(l));
    double cutoff = rel_tol * std::max(lmax, 1.0);
    for (double l : ed.values)
        if (l <= cutoff) return false;

    inv = SymMatrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += ed.vectors[i * n + k] * ed.vectors[j * n + k] / ed.values[k];
            inv.at(i, j) = s;
            inv.at(j, i) = s;
        }
    }
    return true;
}

}  // namespace qnt

// Copyright 2026 The qisim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Small dense complex matrices and the Hermitian eigenproblem.
 *
 * Dimensions here never exceed a few dozen, so everything is a plain
 * row-major std::vector and the eigensolver is a cyclic complex Jacobi
 * iteration.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qisim/errors.hpp"

namespace qisim {

using Amplitude = std::complex<double>;

class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Amplitude> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("CMatrix: data size does not match shape");
        }
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static CMatrix diagonal(const std::vector<double> &values) {
        CMatrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            m(i, i) = values[i];
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    Amplitude &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Amplitude &operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    [[nodiscard]] const std::vector<Amplitude> &data() const noexcept { return data_; }

    [[nodiscard]] CMatrix adjoint() const {
        CMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    [[nodiscard]] CMatrix conjugate() const {
        CMatrix out = *this;
        for (auto &v : out.data_) {
            v = std::conj(v);
        }
        return out;
    }

    [[nodiscard]] Amplitude trace() const {
        Amplitude t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    CMatrix &operator+=(const CMatrix &o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += o.data_[i];
        }
        return *this;
    }

    CMatrix &operator-=(const CMatrix &o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] -= o.data_[i];
        }
        return *this;
    }

    CMatrix &operator*=(Amplitude k) {
        for (auto &v : data_) {
            v *= k;
        }
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix &b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix &b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, Amplitude k) { return a *= k; }
    friend CMatrix operator*(Amplitude k, CMatrix a) { return a *= k; }

    friend CMatrix operator*(const CMatrix &a, const CMatrix &b) {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("CMatrix: inner dimensions differ");
        }
        CMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Amplitude aik = a(i, k);
                if (aik == Amplitude{}) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out(i, j) += aik * b(k, j);
                }
            }
        }
        return out;
    }

  private:
    void check_same_shape(const CMatrix &o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument("CMatrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Amplitude> data_;
};

/// Kronecker product, a's index most significant.
inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

/// Largest element-wise modulus.
inline double max_abs(const CMatrix &m) {
    double best = 0.0;
    for (const auto &v : m.data()) {
        best = std::max(best, std::abs(v));
    }
    return best;
}

inline double hermiticity_error(const CMatrix &m) {
    if (!m.square()) {
        return INFINITY;
    }
    double err = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i; j < m.cols(); ++j) {
            err = std::max(err, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return err;
}

struct Eigensystem {
    std::vector<double> values;  // descending
    CMatrix vectors;             // column k pairs with values[k]
};

/**
 * Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
 * rotations.
 *
 * Each rotation first removes the phase of the pivot a_pq with a diagonal
 * unitary, then applies the classic real Jacobi rotation to the resulting
 * real symmetric 2x2 block. Sweeps stop once the off-diagonal Frobenius
 * mass drops below machine precision relative to the total.
 */
inline Eigensystem hermitian_eigensystem(const CMatrix &input) {
    constexpr double kHermitianTol = 1e-10;
    constexpr std::size_t kMaxDim = 64;
    constexpr int kMaxSweeps = 100;

    if (!input.square()) {
        throw ValidationError("hermitian_eigensystem: matrix is not square");
    }
    const std::size_t n = input.rows();
    if (n > kMaxDim) {
        throw ValidationError("hermitian_eigensystem: dimension exceeds 64");
    }
    if (hermiticity_error(input) > kHermitianTol) {
        throw ValidationError("hermitian_eigensystem: matrix is not Hermitian");
    }

    // Symmetrize so round-off in the input cannot accumulate.
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = input(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Amplitude v = 0.5 * (input(i, j) + std::conj(input(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }
    CMatrix v = CMatrix::identity(n);

    auto off_norm2 = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                s += std::norm(a(i, j));
            }
        }
        return s;
    };
    double total = 0.0;
    for (const auto &x : a.data()) {
        total += std::norm(x);
    }
    const double threshold = 1e-32 * std::max(total, 1e-300);

    for (int sweep = 0; sweep < kMaxSweeps && off_norm2() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) {
                    continue;
                }
                const Amplitude phase = a(p, q) / mag;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;

                // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
                const Amplitude jpp = c;
                const Amplitude jpq = s;
                const Amplitude jqp = -s * std::conj(phase);
                const Amplitude jqq = c * std::conj(phase);

                // A <- A J
                for (std::size_t k = 0; k < n; ++k) {
                    const Amplitude akp = a(k, p);
                    const Amplitude akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                // A <- J^dagger A
                for (std::size_t k = 0; k < n; ++k) {
                    const Amplitude apk = a(p, k);
                    const Amplitude aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                // V <- V J
                for (std::size_t k = 0; k < n; ++k) {
                    const Amplitude vkp = v(k, p);
                    const Amplitude vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() > a(y, y).real();
    });

    Eigensystem out{std::vector<double>(n), CMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

/// V diag(f(lambda)) V^dagger for an eigensystem.
template <typename F>
CMatrix spectral_apply(const Eigensystem &es, F &&f) {
    const std::size_t n = es.values.size();
    CMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = f(es.values[k]);
        if (w == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Amplitude vik = es.vectors(i, k) * w;
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += vik * std::conj(es.vectors(j, k));
            }
        }
    }
    return out;
}

/// Eigenvalues at or below this fraction of the largest one are round-off
/// from a rank-deficient input and are treated as exact zeros. Without the
/// cutoff a 1e-17 residue turns into a 3e-9 square root.
inline constexpr double kRankCutoff = 1e-13;

inline double rank_truncated(double lambda, double largest) {
    return lambda <= kRankCutoff * std::max(largest, 0.0) ? 0.0 : lambda;
}

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues in [-1e-10, 0) are treated as zero.
inline CMatrix matrix_sqrt_psd(const CMatrix &m) {
    constexpr double kPsdFloor = -1e-10;
    const Eigensystem es = hermitian_eigensystem(m);
    for (const double lambda : es.values) {
        if (lambda < kPsdFloor) {
            throw ValidationError("matrix_sqrt_psd: eigenvalue " + std::to_string(lambda) +
                                  " below PSD tolerance");
        }
    }
    const double largest = es.values.empty() ? 0.0 : es.values.front();
    return spectral_apply(es, [largest](double lambda) {
        return std::sqrt(rank_truncated(lambda, largest));
    });
}

}  // namespace qisim

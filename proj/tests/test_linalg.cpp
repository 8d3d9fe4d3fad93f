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

#include <gtest/gtest.h>

#include <random>

#include "qisim/linalg.hpp"
#include "test_support.hpp"

using namespace qisim;
using qisim::testing::random_hermitian;
using qisim::testing::random_unitary;

namespace {

double reconstruction_error(const CMatrix &m, const Eigensystem &es) {
    const CMatrix back = spectral_apply(es, [](double x) { return x; });
    return max_abs(back - m);
}

}  // namespace

TEST(HermitianEigensystem, IdentityHasUnitSpectrum) {
    const auto es = hermitian_eigensystem(CMatrix::identity(2));
    ASSERT_EQ(es.values.size(), 2U);
    EXPECT_DOUBLE_EQ(es.values[0], 1.0);
    EXPECT_DOUBLE_EQ(es.values[1], 1.0);
}

TEST(HermitianEigensystem, SortsDescending) {
    const auto es = hermitian_eigensystem(CMatrix::diagonal({3.0, 1.0, 2.0}));
    EXPECT_DOUBLE_EQ(es.values[0], 3.0);
    EXPECT_DOUBLE_EQ(es.values[1], 2.0);
    EXPECT_DOUBLE_EQ(es.values[2], 1.0);
}

TEST(HermitianEigensystem, PauliX) {
    const CMatrix sx(2, 2, {0.0, 1.0, 1.0, 0.0});
    const auto es = hermitian_eigensystem(sx);
    EXPECT_NEAR(es.values[0], 1.0, 1e-14);
    EXPECT_NEAR(es.values[1], -1.0, 1e-14);
    const double r = 1.0 / std::sqrt(2.0);
    // Eigenvectors up to phase: |v0> ~ (1, 1)/sqrt2, |v1> ~ (1, -1)/sqrt2.
    EXPECT_NEAR(std::abs(es.vectors(0, 0) * r + es.vectors(1, 0) * r), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(es.vectors(0, 1) * r - es.vectors(1, 1) * r), 1.0, 1e-14);
    EXPECT_LE(reconstruction_error(sx, es), 1e-10);
}

TEST(HermitianEigensystem, ComplexOffDiagonal) {
    const CMatrix sy(2, 2, {0.0, Amplitude(0, -1), Amplitude(0, 1), 0.0});
    const auto es = hermitian_eigensystem(sy);
    EXPECT_NEAR(es.values[0], 1.0, 1e-14);
    EXPECT_NEAR(es.values[1], -1.0, 1e-14);
    EXPECT_LE(reconstruction_error(sy, es), 1e-12);
}

TEST(HermitianEigensystem, RejectsNonHermitian) {
    const CMatrix m(2, 2, {1.0, 2.0, 0.0, 1.0});
    EXPECT_THROW(hermitian_eigensystem(m), ValidationError);
    EXPECT_THROW(hermitian_eigensystem(CMatrix(2, 3)), ValidationError);
    EXPECT_THROW(hermitian_eigensystem(CMatrix::identity(65)), ValidationError);
}

TEST(HermitianEigensystem, RandomReconstructionUpToDimension64) {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1U, 2U, 3U, 4U, 8U, 17U, 32U, 64U}) {
        const CMatrix m = random_hermitian(n, rng);
        const auto es = hermitian_eigensystem(m);
        EXPECT_LE(reconstruction_error(m, es), 1e-10) << "n=" << n;
        for (std::size_t k = 1; k < n; ++k) {
            EXPECT_GE(es.values[k - 1], es.values[k]);
        }
        // V is unitary.
        EXPECT_LE(max_abs(es.vectors.adjoint() * es.vectors - CMatrix::identity(n)), 1e-12);
    }
}

TEST(HermitianEigensystem, SpectrumInvariantUnderUnitaryConjugation) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
        const CMatrix m = random_hermitian(n, rng);
        const CMatrix u = random_unitary(n, rng);
        const auto a = hermitian_eigensystem(m);
        const auto b = hermitian_eigensystem(u * m * u.adjoint() * Amplitude(1.0));
        for (std::size_t k = 0; k < n; ++k) {
            EXPECT_NEAR(a.values[k], b.values[k], 1e-9);
        }
    }
}

TEST(HermitianEigensystem, DegenerateSpectrum) {
    std::mt19937_64 rng(13);
    const CMatrix u = random_unitary(4, rng);
    const CMatrix m = u * CMatrix::diagonal({2.0, 2.0, -1.0, -1.0}) * u.adjoint();
    const CMatrix sym = (m + m.adjoint()) * Amplitude(0.5);
    const auto es = hermitian_eigensystem(sym);
    EXPECT_NEAR(es.values[0], 2.0, 1e-12);
    EXPECT_NEAR(es.values[1], 2.0, 1e-12);
    EXPECT_NEAR(es.values[2], -1.0, 1e-12);
    EXPECT_NEAR(es.values[3], -1.0, 1e-12);
    EXPECT_LE(reconstruction_error(sym, es), 1e-10);
}

TEST(MatrixSqrtPsd, Diagonal) {
    const CMatrix s = matrix_sqrt_psd(CMatrix::diagonal({4.0, 9.0}));
    EXPECT_NEAR(s(0, 0).real(), 2.0, 1e-14);
    EXPECT_NEAR(s(1, 1).real(), 3.0, 1e-14);
    EXPECT_NEAR(std::abs(s(0, 1)), 0.0, 1e-14);
}

TEST(MatrixSqrtPsd, IdentityAndProjector) {
    EXPECT_LE(max_abs(matrix_sqrt_psd(CMatrix::identity(3)) - CMatrix::identity(3)), 1e-14);
    const CMatrix plus(2, 2, {0.5, 0.5, 0.5, 0.5});
    EXPECT_LE(max_abs(matrix_sqrt_psd(plus) - plus), 1e-14);
}

TEST(MatrixSqrtPsd, RandomSquaresBack) {
    std::mt19937_64 rng(14);
    for (std::size_t n : {2U, 4U, 8U, 16U}) {
        const CMatrix rho = qisim::testing::random_density(n, rng);
        const CMatrix s = matrix_sqrt_psd(rho);
        EXPECT_LE(max_abs(s * s - rho), 1e-9);
        EXPECT_LE(hermiticity_error(s), 1e-12);
        for (double v : hermitian_eigensystem((s + s.adjoint()) * Amplitude(0.5)).values) {
            EXPECT_GE(v, -1e-12);
        }
    }
}

TEST(MatrixSqrtPsd, ClampsSmallNegativesRejectsLarge) {
    const CMatrix tiny = CMatrix::diagonal({1.0, -1e-12});
    const CMatrix s = matrix_sqrt_psd(tiny);
    EXPECT_NEAR(s(0, 0).real(), 1.0, 1e-15);
    EXPECT_EQ(s(1, 1), Amplitude{});
    EXPECT_THROW(matrix_sqrt_psd(CMatrix::diagonal({1.0, -1e-6})), ValidationError);
}

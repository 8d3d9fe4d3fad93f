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
 * Fidelity, concurrence / tangle, and the three-qubit residual tangle.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qisim/errors.hpp"
#include "qisim/linalg.hpp"
#include "qisim/state.hpp"

namespace qisim {

struct ConcurrenceResult {
    double value = 0.0;          // clamped to [0, 1]
    double unclamped = 0.0;      // lambda_1 - lambda_2 - lambda_3 - lambda_4
    std::array<double, 4> lambdas{};  // descending
};

struct ThreeTangleResult {
    double value = 0.0;  // clamped to [0, 1]
    double unclamped = 0.0;
    double tau_a_bc = 0.0;
    double tau_ab = 0.0;
    double tau_ac = 0.0;
};

/// F = |<a|b>| (amplitude convention, not squared).
inline double fidelity_pure(const PureState &a, const PureState &b) {
    return std::abs(inner_product(a, b));
}

/// F = sqrt(<target|rho|target>). Target components outside rho's basis
/// contribute nothing.
inline double fidelity_mixed(const DensityMatrix &rho, const PureState &target) {
    std::vector<std::pair<std::size_t, Amplitude>> support;
    for (const auto &[label, amp] : target.terms()) {
        if (auto i = rho.index_of(label)) {
            support.emplace_back(*i, amp);
        }
    }
    Amplitude s = 0.0;
    for (const auto &[i, ai] : support) {
        for (const auto &[j, aj] : support) {
            s += std::conj(ai) * rho.entries()(i, j) * aj;
        }
    }
    return std::sqrt(std::max(s.real(), 0.0));
}

/// sigma_y (x) sigma_y rho^* sigma_y (x) sigma_y in the {00, 01, 10, 11} basis.
inline CMatrix spin_flip(const CMatrix &rho) {
    const CMatrix sy(2, 2, {0.0, Amplitude(0, -1), Amplitude(0, 1), 0.0});
    const CMatrix yy = kron(sy, sy);
    return yy * rho.conjugate() * yy;
}

/**
 * Wootters concurrence of a two-qubit density matrix.
 *
 * The lambda_i are square roots of the eigenvalues of rho * rho~. That
 * product is not Hermitian, so the spectrum is taken from the similar
 * Hermitian matrix sqrt(rho) rho~ sqrt(rho). Sub-normalized input is
 * rescaled to unit trace first.
 */
inline ConcurrenceResult concurrence(const CMatrix &rho_in) {
    if (rho_in.rows() != 4 || rho_in.cols() != 4) {
        throw ValidationError("concurrence: expected a 4x4 density matrix");
    }
    const double tr = rho_in.trace().real();
    if (!(tr > 0.0)) {
        throw ValidationError("concurrence: density matrix has zero trace");
    }
    const CMatrix rho = rho_in * Amplitude(1.0 / tr);
    const CMatrix root = matrix_sqrt_psd(rho);
    CMatrix r = root * spin_flip(rho) * root;
    // Clean round-off so the Hermitian check sees an exactly Hermitian matrix.
    r = (r + r.adjoint()) * Amplitude(0.5);
    const Eigensystem es = hermitian_eigensystem(r);

    ConcurrenceResult out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.lambdas[i] = std::sqrt(rank_truncated(es.values[i], es.values[0]));
    }
    std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());
    out.unclamped = out.lambdas[0] - out.lambdas[1] - out.lambdas[2] - out.lambdas[3];
    out.value = std::clamp(out.unclamped, 0.0, 1.0);
    return out;
}

inline ConcurrenceResult concurrence(const DensityMatrix &rho) {
    if (rho.dim() != 4) {
        throw ValidationError("concurrence: expected a two-qubit density matrix, got dimension " +
                              std::to_string(rho.dim()));
    }
    return concurrence(rho.entries());
}

/// tau = C^2.
inline double tangle(const DensityMatrix &rho) {
    const double c = concurrence(rho).value;
    return c * c;
}

inline double tangle(const CMatrix &rho) {
    const double c = concurrence(rho).value;
    return c * c;
}

/// Tangle between two registers of a pure state (logical sector only).
inline double pair_tangle(const PureState &psi, Register a, Register b) {
    const std::array<Register, 2> keep{a, b};
    return tangle(reduced_density_matrix(psi, keep));
}

/**
 * Residual three-way tangle tau_A(BC) - tau_AB - tau_AC of a pure
 * three-qubit state, with tau_A(BC) = 4 det(rho_A).
 *
 * The qubits are the state's registers in order (atoms, then photons);
 * `focus` picks which one plays A. Values below -1e-9 signal an invalid
 * input and raise; smaller negatives are round-off and clamp to zero.
 */
inline ThreeTangleResult three_tangle(const PureState &psi, std::size_t focus = 0) {
    constexpr double kNegativeFloor = -1e-9;
    constexpr double kNormTol = 1e-9;
    const auto regs = psi.registers();
    if (regs.size() != 3) {
        throw ValidationError("three_tangle: expected exactly three qubit registers");
    }
    if (focus >= 3) {
        throw RegisterError("three_tangle: focus index out of range");
    }
    for (const auto &[label, amp] : psi.terms()) {
        if (label.has_scatter() ||
            std::any_of(label.photons.begin(), label.photons.end(),
                        [](PhotonSlot p) { return p == PhotonSlot::lost; })) {
            throw ValidationError("three_tangle: state is not confined to the logical sector");
        }
    }
    if (std::abs(psi.norm2() - 1.0) > kNormTol) {
        throw ValidationError("three_tangle: state is not normalized");
    }

    const Register a = regs[focus];
    const Register b = regs[(focus + 1) % 3];
    const Register c = regs[(focus + 2) % 3];

    const std::array<Register, 1> keep_a{a};
    const DensityMatrix rho_a = reduced_density_matrix(psi, keep_a);
    const Amplitude det = rho_a.entries()(0, 0) * rho_a.entries()(1, 1) -
                          rho_a.entries()(0, 1) * rho_a.entries()(1, 0);

    ThreeTangleResult out;
    out.tau_a_bc = 4.0 * det.real();
    out.tau_ab = pair_tangle(psi, a, b);
    out.tau_ac = pair_tangle(psi, a, c);
    out.unclamped = out.tau_a_bc - out.tau_ab - out.tau_ac;
    if (out.unclamped < kNegativeFloor) {
        throw ValidationError("three_tangle: residual tangle " + std::to_string(out.unclamped) +
                              " is negative beyond round-off");
    }
    out.value = std::clamp(out.unclamped, 0.0, 1.0);
    return out;
}

}  // namespace qisim

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

#include <array>
#include <random>

#include "qisim/state.hpp"
#include "test_support.hpp"

using namespace qisim;
using qisim::testing::basis_state;
using qisim::testing::label;
using qisim::testing::max_amplitude_diff;

namespace {

constexpr PhotonSlot k0 = PhotonSlot::mode0;
constexpr PhotonSlot k1 = PhotonSlot::mode1;
constexpr PhotonSlot kL = PhotonSlot::lost;
const double kR = 1.0 / std::sqrt(2.0);

PureState make(Signature sig, std::initializer_list<std::pair<BasisLabel, Amplitude>> terms) {
    TermMap t;
    for (const auto &[l, a] : terms) {
        t.emplace(l, a);
    }
    return PureState(sig, std::move(t));
}

}  // namespace

TEST(ProductState, SingleBasisTerm) {
    const std::pair<Amplitude, Amplitude> atoms[] = {{1.0, 0.0}};
    const PhotonSlot photons[] = {k0};
    const PureState s = make_product_state(atoms, photons);
    ASSERT_EQ(s.size(), 1U);
    EXPECT_EQ(s.amplitude(label({0}, {k0})), Amplitude(1.0));
}

TEST(ProductState, SymmetricPairGivesFourQuarterTerms) {
    const std::pair<Amplitude, Amplitude> atoms[] = {{kR, kR}, {kR, kR}};
    const PhotonSlot photons[] = {k0};
    const PureState s = make_product_state(atoms, photons);
    ASSERT_EQ(s.size(), 4U);
    for (const auto &[l, a] : s.terms()) {
        EXPECT_NEAR(a.real(), 0.5, 1e-15);
        EXPECT_TRUE(l.scatter.empty());
    }
    EXPECT_NEAR(s.norm2(), 1.0, 1e-15);
}

TEST(ProductState, NoPhotons) {
    const std::pair<Amplitude, Amplitude> atoms[] = {{0.6, 0.8}};
    const PureState s = make_product_state(atoms, {});
    EXPECT_EQ(s.amplitude(label({0})), Amplitude(0.6));
    EXPECT_EQ(s.amplitude(label({1})), Amplitude(0.8));
}

TEST(ProductState, RejectsUnnormalizedPair) {
    const std::pair<Amplitude, Amplitude> atoms[] = {{1.0, 1.0}};
    EXPECT_THROW(make_product_state(atoms, {}), NormalizationError);
}

TEST(SingleQubitGate, HadamardOnAtom) {
    const PureState s = apply_single_qubit_gate(basis_state({0}, {}), Register::atom(0), gates::hadamard());
    EXPECT_NEAR(s.amplitude(label({0})).real(), kR, 1e-15);
    EXPECT_NEAR(s.amplitude(label({1})).real(), kR, 1e-15);
}

TEST(SingleQubitGate, PauliZOnPhoton) {
    const PureState plus = make({0, 1}, {{label({}, {k0}), kR}, {label({}, {k1}), kR}});
    const PureState s = apply_single_qubit_gate(plus, Register::photon(0), gates::pauli_z());
    EXPECT_NEAR(s.amplitude(label({}, {k0})).real(), kR, 1e-15);
    EXPECT_NEAR(s.amplitude(label({}, {k1})).real(), -kR, 1e-15);
}

TEST(SingleQubitGate, LostPhotonUntouched) {
    const ScatterEvent ev{0, 0, 3};
    const PureState lost = make({1, 1}, {{label({0}, {kL}, {ev}), 1.0}});
    const PureState s = apply_single_qubit_gate(lost, Register::photon(0), gates::pauli_z());
    EXPECT_EQ(max_amplitude_diff(s, lost), 0.0);
    const PureState h = apply_single_qubit_gate(lost, Register::photon(0), gates::hadamard());
    EXPECT_EQ(max_amplitude_diff(h, lost), 0.0);
}

TEST(SingleQubitGate, Errors) {
    const PureState s = basis_state({0}, {k0});
    EXPECT_THROW(apply_single_qubit_gate(s, Register::atom(1), gates::pauli_x()), RegisterError);
    EXPECT_THROW(apply_single_qubit_gate(s, Register::photon(1), gates::pauli_x()), RegisterError);
    EXPECT_THROW(apply_single_qubit_gate(s, Register::atom(0), Gate2{1.0, 1.0, 0.0, 1.0}), ValidationError);
}

TEST(SingleQubitGate, NormConservedUnderRandomGates) {
    std::mt19937_64 rng(21);
    const std::pair<Amplitude, Amplitude> atoms[] = {qisim::testing::random_atom_pair(rng),
                                                     qisim::testing::random_atom_pair(rng)};
    const PhotonSlot photons[] = {k0, k1};
    PureState s = make_product_state(atoms, photons);
    // Sprinkle in a lost sector so gates see it too.
    s = s + make(s.signature(), {{label({0, 0}, {kL, k0}, {{0, 0, 0}}), 0.3}});
    s = s.normalized();
    for (int i = 0; i < 200; ++i) {
        const Register r = i % 2 ? Register::atom(static_cast<std::size_t>(i % 3 == 0))
                                 : Register::photon(static_cast<std::size_t>(i % 4 == 0));
        s = apply_single_qubit_gate(s, r, qisim::testing::random_unitary2(rng));
        ASSERT_NEAR(s.norm2(), 1.0, 1e-12);
    }
}

TEST(ProjectPhotons, SymmetricSuperposition) {
    const PureState s = make({1, 1}, {{label({0}, {k0}), kR}, {label({1}, {k1}), kR}});
    const std::pair<std::size_t, PhotonSlot> req[] = {{0, k0}};
    const Projection p = project_photons(s, req);
    EXPECT_NEAR(p.probability, 0.5, 1e-15);
    ASSERT_FALSE(p.empty());
    EXPECT_NEAR(p.conditioned->amplitude(label({0}, {k0})).real(), 1.0, 1e-15);
    EXPECT_EQ(p.conditioned->size(), 1U);
}

TEST(ProjectPhotons, LostEverywhereIsEmpty) {
    const PureState s = make({1, 1}, {{label({0}, {kL}, {{0, 0, 0}}), kR}, {label({0}, {kL}, {{0, 0, 1}}), kR}});
    const std::pair<std::size_t, PhotonSlot> req[] = {{0, k0}};
    const Projection p = project_photons(s, req);
    EXPECT_EQ(p.probability, 0.0);
    EXPECT_TRUE(p.empty());
}

TEST(ProjectPhotons, InvalidIndex) {
    const std::pair<std::size_t, PhotonSlot> req[] = {{2, k0}};
    EXPECT_THROW(project_photons(basis_state({0}, {k0}), req), RegisterError);
}

TEST(ProjectPhotons, CompletenessOverSectors) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        TermMap t;
        const BasisLabel labels[] = {label({0}, {k0, k0}),           label({1}, {k1, k0}),
                                     label({0}, {kL, k1}, {{0, 1, 2}}), label({0}, {kL, k0}, {{0, 1, 3}}),
                                     label({1}, {k0, kL}, {{1, 0, 0}}), label({1}, {k1, k1})};
        for (const auto &l : labels) {
            t.emplace(l, qisim::testing::gaussian_amplitude(rng));
        }
        const PureState s = PureState({1, 2}, std::move(t)).normalized();
        for (std::size_t photon = 0; photon < 2; ++photon) {
            const std::pair<std::size_t, PhotonSlot> r0[] = {{photon, k0}};
            const std::pair<std::size_t, PhotonSlot> r1[] = {{photon, k1}};
            double lost = 0.0;
            for (const auto &[l, a] : s.terms()) {
                if (l.photons[photon] == kL) {
                    lost += std::norm(a);
                }
            }
            EXPECT_NEAR(project_photons(s, r0).probability + project_photons(s, r1).probability + lost, 1.0,
                        1e-12);
        }
    }
}

TEST(MeasureAtom, EqualSuperposition) {
    const PureState s = make({1, 0}, {{label({0}), kR}, {label({1}), kR}});
    const auto b = measure_atom_branches(s, 0);
    ASSERT_EQ(b.size(), 2U);
    EXPECT_EQ(b[0].outcome, 0);
    EXPECT_NEAR(b[0].probability, 0.5, 1e-15);
    EXPECT_NEAR(b[0].branch.amplitude(label({0})).real(), 1.0, 1e-15);
    EXPECT_EQ(b[1].outcome, 1);
    EXPECT_NEAR(b[1].probability, 0.5, 1e-15);
}

TEST(MeasureAtom, EigenstateHasOneBranch) {
    const auto b = measure_atom_branches(basis_state({1}, {}), 0);
    ASSERT_EQ(b.size(), 1U);
    EXPECT_EQ(b[0].outcome, 1);
    EXPECT_DOUBLE_EQ(b[0].probability, 1.0);
}

TEST(MeasureAtom, IdealPhotonSchemeBranches) {
    const PureState pre =
        make({1, 2}, {{label({0}, {k0, k0}), kR}, {label({1}, {k1, k1}), kR}});
    const PureState s = apply_single_qubit_gate(pre, Register::atom(0), gates::hadamard());
    const auto b = measure_atom_branches(s, 0);
    ASSERT_EQ(b.size(), 2U);
    for (const auto &br : b) {
        EXPECT_NEAR(br.probability, 0.5, 1e-15);
        const double sign = br.outcome == 0 ? 1.0 : -1.0;
        EXPECT_NEAR(br.branch.amplitude(label({static_cast<std::uint8_t>(br.outcome)}, {k0, k0})).real(), kR,
                    1e-15);
        EXPECT_NEAR(br.branch.amplitude(label({static_cast<std::uint8_t>(br.outcome)}, {k1, k1})).real(),
                    sign * kR, 1e-15);
    }
    EXPECT_THROW(measure_atom_branches(s, 1), RegisterError);
}

TEST(ReducedDensityMatrix, BellMarginal) {
    const PureState bell = PureState::from_qubit_amplitudes(2, std::array<Amplitude, 4>{kR, 0, 0, kR});
    const std::array keep{Register::atom(0)};
    const DensityMatrix rho = reduced_density_matrix(bell, keep);
    ASSERT_EQ(rho.dim(), 2U);
    EXPECT_NEAR(rho.entries()(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(rho.entries()(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(rho.entries()(0, 1)), 0.0, 1e-15);
}

TEST(ReducedDensityMatrix, ProductMarginal) {
    const PureState s = PureState::from_qubit_amplitudes(2, std::array<Amplitude, 4>{0, 1, 0, 0});
    const std::array keep{Register::atom(1)};
    const DensityMatrix rho = reduced_density_matrix(s, keep);
    EXPECT_EQ(rho.entries()(1, 1), Amplitude(1.0));
    EXPECT_EQ(rho.entries()(0, 0), Amplitude(0.0));
}

TEST(ReducedDensityMatrix, WPairReduction) {
    const double r3 = 1.0 / std::sqrt(3.0);
    const PureState w = PureState::from_qubit_amplitudes(3, std::array<Amplitude, 8>{0, r3, r3, 0, r3, 0, 0, 0});
    const std::array keep{Register::atom(0), Register::atom(1)};
    const DensityMatrix rho = reduced_density_matrix(w, keep);
    EXPECT_NEAR(rho.element(label({0, 1}), label({1, 0})).real(), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(rho.element(label({0, 0}), label({0, 0})).real(), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(rho.element(label({1, 1}), label({1, 1})).real(), 0.0, 1e-15);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
}

TEST(ReducedDensityMatrix, KeepOrderSetsBasisOrder) {
    const PureState s = PureState::from_qubit_amplitudes(2, std::array<Amplitude, 4>{0, 1, 0, 0});  // |01>
    const std::array swapped{Register::atom(1), Register::atom(0)};
    const DensityMatrix rho = reduced_density_matrix(s, swapped);
    // In (atom1, atom0) order the state reads |10>, index 2.
    EXPECT_EQ(rho.entries()(2, 2), Amplitude(1.0));
}

TEST(ReducedDensityMatrix, ScatterSectorsDoNotInterfere) {
    // Same atom/photon values, different scatter events: tracing gives a
    // diagonal mixture with no coherence.
    const PureState s = make({1, 1}, {{label({0}, {k0}), kR}, {label({1}, {k0}, {{0, 0, 1}}), kR}});
    const std::array keep{Register::atom(0)};
    const DensityMatrix rho = reduced_density_matrix(s, keep);
    EXPECT_NEAR(rho.entries()(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(rho.entries()(1, 1).real(), 0.5, 1e-15);
    EXPECT_EQ(rho.entries()(0, 1), Amplitude{});
}

TEST(ReducedDensityMatrix, TraceEqualsLogicalWeight) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        TermMap t;
        const BasisLabel labels[] = {label({0, 1}, {k0, k1}),           label({1, 1}, {k1, k0}),
                                     label({0, 0}, {kL, k1}, {{0, 0, 2}}), label({0, 1}, {kL, kL}, {{0, 0, 1}, {1, 1, 0}}),
                                     label({1, 0}, {k0, kL}, {{1, 1, 4}}), label({1, 1}, {k1, k1})};
        for (const auto &l : labels) {
            t.emplace(l, qisim::testing::gaussian_amplitude(rng));
        }
        const PureState s = PureState({2, 2}, std::move(t)).normalized();
        const std::vector<std::vector<Register>> keeps = {
            {Register::atom(0)},
            {Register::photon(0)},
            {Register::atom(1), Register::photon(1)},
            {Register::photon(1), Register::photon(0)},
            {Register::atom(0), Register::atom(1), Register::photon(0)}};
        for (const auto &keep : keeps) {
            const DensityMatrix rho = reduced_density_matrix(s, keep);
            EXPECT_NEAR(rho.trace(), logical_weight(s, keep), 1e-12);
            EXPECT_LE(hermiticity_error(rho.entries()), 1e-12);
            for (double v : hermitian_eigensystem(rho.entries()).values) {
                EXPECT_GE(v, -1e-10);
            }
            const DensityMatrix with_lost = reduced_density_matrix(s, keep, true);
            EXPECT_NEAR(with_lost.trace(), 1.0, 1e-12);
        }
    }
}

TEST(ReducedDensityMatrix, FromDensityMatrixMatchesPureRoute) {
    std::mt19937_64 rng(24);
    const auto amps = qisim::testing::random_qubit_amplitudes(3, rng);
    const PureState s = PureState::from_qubit_amplitudes(3, amps);
    const std::array keep{Register::atom(2), Register::atom(0)};
    const DensityMatrix direct = reduced_density_matrix(s, keep);
    const DensityMatrix via = reduced_density_matrix(to_density_matrix(s), keep);
    ASSERT_EQ(direct.dim(), via.dim());
    EXPECT_LE(max_abs(direct.entries() - via.entries()), 1e-14);
}

TEST(ReducedDensityMatrix, RejectsDuplicateAndOutOfRange) {
    const PureState s = basis_state({0, 1}, {});
    const std::array dup{Register::atom(0), Register::atom(0)};
    EXPECT_THROW(reduced_density_matrix(s, dup), RegisterError);
    const std::array bad{Register::photon(0)};
    EXPECT_THROW(reduced_density_matrix(s, bad), RegisterError);
}

TEST(PureState, SignatureChecked) {
    TermMap t;
    t.emplace(label({0, 1}), 1.0);
    EXPECT_THROW(PureState(Signature{1, 0}, t), SignatureMismatch);
    EXPECT_THROW(inner_product(basis_state({0}, {}), basis_state({0}, {k0})), SignatureMismatch);
}

TEST(PureState, StripPhotonsRequiresCleanSector) {
    const PureState ok = make({1, 1}, {{label({0}, {k0}), kR}, {label({1}, {k0}), kR}});
    const PureState atoms = strip_photons(ok);
    EXPECT_EQ(atoms.signature(), (Signature{1, 0}));
    const PureState dirty = make({1, 1}, {{label({0}, {kL}, {{0, 0, 0}}), 1.0}});
    EXPECT_THROW(strip_photons(dirty), ValidationError);
}

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
 * Entanglement-generation protocols built from interrogation gates.
 *
 * Three conditional schemes entangle atoms through a probe photon that is
 * post-selected in a fixed output mode (Bell, W, GHZ); one deterministic
 * scheme entangles photons through a probed atom that is then measured and
 * fed forward as a Z correction.
 *
 * Port plans. Which interrogations run as Q and which as Q_r is fixed so the
 * conditioned outputs reproduce the known closed forms term for term:
 *   bell  [Q, Q_r], photon conditioned on mode0
 *   w     [Q] x k,  photon conditioned on mode1
 *   ghz   [Q, Q_r] per photon, photon i probing atoms i and i+1, all
 *         photons conditioned on mode0
 *   photon [Q] x n, no conditioning
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qisim/errors.hpp"
#include "qisim/interrogation.hpp"
#include "qisim/measures.hpp"
#include "qisim/state.hpp"

namespace qisim {

enum class Scheme : std::uint8_t { bell, w, ghz, photon };

inline const char *to_string(Scheme s) {
    switch (s) {
    case Scheme::bell:
        return "bell";
    case Scheme::w:
        return "w";
    case Scheme::ghz:
        return "ghz";
    case Scheme::photon:
        return "photon";
    }
    return "?";
}

inline std::optional<Scheme> scheme_from_string(std::string_view name) {
    for (Scheme s : {Scheme::bell, Scheme::w, Scheme::ghz, Scheme::photon}) {
        if (name == to_string(s)) {
            return s;
        }
    }
    return std::nullopt;
}

enum class Pauli : std::uint8_t { x, y, z };

inline Gate2 gate_of(Pauli p) {
    switch (p) {
    case Pauli::x:
        return gates::pauli_x();
    case Pauli::y:
        return gates::pauli_y();
    case Pauli::z:
        return gates::pauli_z();
    }
    return gates::identity();
}

struct LocalOp {
    std::size_t atom = 0;
    Pauli pauli = Pauli::z;
};

using AtomAmplitudes = std::pair<Amplitude, Amplitude>;

/// Zero / empty fields select the per-scheme defaults (see resolve()).
struct SchemeConfig {
    Scheme scheme = Scheme::bell;
    int cycles = 1;
    std::size_t atoms = 0;
    std::size_t photons = 0;
    std::vector<AtomAmplitudes> atom_amps;  // default: 1/sqrt2 each
    std::vector<Variant> port_plan;
    std::optional<PhotonSlot> conditioning;
    std::vector<LocalOp> local_ops;  // applied to the conditioned atoms
    bool ideal_gates = false;        // infinite-N logic table instead of N cycles
    std::optional<int> photon_branch;  // photon scheme: keep one atom outcome only
};

inline std::size_t default_atoms(Scheme s) {
    switch (s) {
    case Scheme::bell:
        return 2;
    case Scheme::w:
    case Scheme::ghz:
        return 3;
    case Scheme::photon:
        return 1;
    }
    return 0;
}

inline std::vector<Variant> default_port_plan(Scheme s, std::size_t atoms, std::size_t photons) {
    switch (s) {
    case Scheme::bell:
        return {Variant::q, Variant::q_r};
    case Scheme::w:
        return std::vector<Variant>(atoms, Variant::q);
    case Scheme::ghz: {
        std::vector<Variant> plan;
        for (std::size_t i = 0; i + 1 < atoms; ++i) {
            plan.push_back(Variant::q);
            plan.push_back(Variant::q_r);
        }
        return plan;
    }
    case Scheme::photon:
        return std::vector<Variant>(photons, Variant::q);
    }
    return {};
}

inline std::optional<PhotonSlot> default_conditioning(Scheme s) {
    switch (s) {
    case Scheme::bell:
    case Scheme::ghz:
        return PhotonSlot::mode0;
    case Scheme::w:
        return PhotonSlot::mode1;
    case Scheme::photon:
        return std::nullopt;
    }
    return std::nullopt;
}

/// Fills defaults and validates; throws std::invalid_argument or
/// NormalizationError.
inline SchemeConfig resolve(SchemeConfig c) {
    if (c.cycles < 1) {
        throw std::invalid_argument("cycles must be >= 1");
    }
    if (c.atoms == 0) {
        c.atoms = c.atom_amps.empty() ? default_atoms(c.scheme) : c.atom_amps.size();
    }
    switch (c.scheme) {
    case Scheme::bell:
        if (c.atoms != 2) {
            throw std::invalid_argument("bell scheme uses exactly 2 atoms");
        }
        c.photons = 1;
        break;
    case Scheme::w:
        if (c.atoms < 3) {
            throw std::invalid_argument("w scheme needs at least 3 atoms");
        }
        c.photons = 1;
        break;
    case Scheme::ghz:
        if (c.atoms < 3) {
            throw std::invalid_argument("ghz scheme needs at least 3 atoms");
        }
        c.photons = c.atoms - 1;
        break;
    case Scheme::photon:
        if (c.atoms != 1) {
            throw std::invalid_argument("photon scheme uses exactly 1 atom");
        }
        if (c.photons == 0) {
            c.photons = 2;
        }
        if (c.photons < 2) {
            throw std::invalid_argument("photon scheme needs at least 2 photons");
        }
        break;
    }
    if (c.atom_amps.empty()) {
        const double r = 1.0 / std::sqrt(2.0);
        c.atom_amps.assign(c.atoms, {r, r});
    }
    if (c.atom_amps.size() != c.atoms) {
        throw std::invalid_argument("expected " + std::to_string(c.atoms) + " atom amplitude pairs, got " +
                                    std::to_string(c.atom_amps.size()));
    }
    for (std::size_t i = 0; i < c.atoms; ++i) {
        const double n = std::norm(c.atom_amps[i].first) + std::norm(c.atom_amps[i].second);
        if (std::abs(n - 1.0) > 1e-9) {
            throw NormalizationError("atom " + std::to_string(i) + " amplitudes are not normalized");
        }
    }
    const auto plan = default_port_plan(c.scheme, c.atoms, c.photons);
    if (c.port_plan.empty()) {
        c.port_plan = plan;
    } else if (c.port_plan.size() != plan.size()) {
        throw std::invalid_argument("port plan needs " + std::to_string(plan.size()) + " entries");
    }
    if (c.scheme == Scheme::photon) {
        if (c.conditioning) {
            throw std::invalid_argument("photon scheme is not post-selected");
        }
        if (!c.local_ops.empty()) {
            throw std::invalid_argument("photon scheme takes no atom local operations");
        }
    } else if (!c.conditioning) {
        c.conditioning = default_conditioning(c.scheme);
    } else if (*c.conditioning == PhotonSlot::lost) {
        throw std::invalid_argument("conditioning must be a logical mode");
    }
    for (const auto &op : c.local_ops) {
        if (op.atom >= c.atoms) {
            throw RegisterError("local operation on atom " + std::to_string(op.atom) + " out of range");
        }
    }
    if (c.photon_branch && (c.scheme != Scheme::photon || (*c.photon_branch != 0 && *c.photon_branch != 1))) {
        throw std::invalid_argument("photon_branch must be 0 or 1 and applies to the photon scheme only");
    }
    return c;
}

namespace detail {

inline PureState uniform_over(std::size_t qubits, std::span<const std::size_t> indices) {
    std::vector<Amplitude> amps(std::size_t{1} << qubits, 0.0);
    const double w = 1.0 / std::sqrt(static_cast<double>(indices.size()));
    for (auto i : indices) {
        amps[i] = w;
    }
    return PureState::from_qubit_amplitudes(qubits, amps);
}

}  // namespace detail

/// (|0...0> + |1...1>)/sqrt2 over k atoms.
inline PureState ghz_state(std::size_t k) {
    const std::size_t idx[] = {0, (std::size_t{1} << k) - 1};
    return detail::uniform_over(k, idx);
}

/// Uniform superposition of the k single-excitation strings.
inline PureState w_state(std::size_t k) {
    std::vector<std::size_t> idx;
    for (std::size_t q = 0; q < k; ++q) {
        idx.push_back(std::size_t{1} << q);
    }
    return detail::uniform_over(k, idx);
}

/// (|01> + |10>)/sqrt2.
inline PureState psi_plus_state() {
    const std::size_t idx[] = {1, 2};
    return detail::uniform_over(2, idx);
}

/// GHZ over n photons: (|0...0> + |1...1>)/sqrt2 in the photon modes.
inline PureState photon_ghz_state(std::size_t n) {
    const double r = 1.0 / std::sqrt(2.0);
    TermMap terms;
    BasisLabel l;
    l.photons.assign(n, PhotonSlot::mode0);
    terms.emplace(l, r);
    l.photons.assign(n, PhotonSlot::mode1);
    terms.emplace(l, r);
    return PureState(Signature{0, n}, std::move(terms));
}

inline PureState apply_local_ops(PureState s, std::span<const LocalOp> ops) {
    for (const auto &op : ops) {
        s = apply_single_qubit_gate(s, Register::atom(op.atom), gate_of(op.pauli));
    }
    return s;
}

/// The state a resolved configuration aims for, local operations included.
inline PureState target_state(const SchemeConfig &c) {
    switch (c.scheme) {
    case Scheme::bell: {
        PureState base = c.conditioning == PhotonSlot::mode1 ? psi_plus_state() : ghz_state(2);
        return apply_local_ops(std::move(base), c.local_ops);
    }
    case Scheme::w:
        return apply_local_ops(w_state(c.atoms), c.local_ops);
    case Scheme::ghz:
        return apply_local_ops(ghz_state(c.atoms), c.local_ops);
    case Scheme::photon:
        return photon_ghz_state(c.photons);
    }
    throw std::logic_error("target_state: unknown scheme");
}

struct PairTangle {
    std::size_t first;   // 0-based atom indices
    std::size_t second;
    double value;
};

struct SchemeReport {
    Scheme scheme = Scheme::bell;
    int cycles = 1;
    double prob_success = 0.0;
    double fidelity = 0.0;
    std::optional<double> tangle;                  // bell
    std::vector<PairTangle> pair_tangles;          // w
    std::optional<ThreeTangleResult> three_tangle;  // ghz, k = 3
    std::optional<PureState> conditioned;          // atom schemes, atoms only
    std::optional<DensityMatrix> photon_state;     // photon scheme
    double scatter_weight = 0.0;  // of the post-selected state; 0 for the atom schemes
};

namespace detail {

inline PureState probe(const PureState &s, const SchemeConfig &c, std::size_t atom, std::size_t photon,
                       Variant v, std::uint32_t index) {
    if (c.ideal_gates) {
        return ideal_interrogate(s, atom, photon, v, index);
    }
    return interrogate(s, InterrogationSpec{atom, photon, c.cycles, v, index});
}

inline PureState evolve_atom_scheme(const SchemeConfig &c) {
    const std::vector<PhotonSlot> photons(c.photons, PhotonSlot::mode0);
    PureState s = make_product_state(c.atom_amps, photons);
    std::uint32_t index = 0;
    switch (c.scheme) {
    case Scheme::bell:
    case Scheme::w:
        for (std::size_t a = 0; a < c.atoms; ++a, ++index) {
            s = probe(s, c, a, 0, c.port_plan[a], index);
        }
        break;
    case Scheme::ghz:
        for (std::size_t p = 0; p < c.photons; ++p) {
            s = probe(s, c, p, p, c.port_plan[2 * p], index++);
            s = probe(s, c, p + 1, p, c.port_plan[2 * p + 1], index++);
        }
        break;
    case Scheme::photon:
        throw std::logic_error("evolve_atom_scheme: photon scheme");
    }
    return s;
}

inline SchemeReport run_atom_scheme(const SchemeConfig &raw, Scheme expected) {
    if (raw.scheme != expected) {
        throw std::invalid_argument(std::string("configuration is not for the ") + to_string(expected) +
                                    " scheme");
    }
    const SchemeConfig c = resolve(raw);
    const PureState evolved = evolve_atom_scheme(c);

    std::vector<std::pair<std::size_t, PhotonSlot>> required;
    for (std::size_t p = 0; p < c.photons; ++p) {
        required.emplace_back(p, *c.conditioning);
    }
    const Projection proj = project_photons(evolved, required);
    if (proj.empty()) {
        throw EmptyConditionedState(std::string(to_string(c.scheme)) + " scheme at N=" +
                                        std::to_string(c.cycles) + " leaves no conditioned support",
                                    proj.probability);
    }

    SchemeReport r;
    r.scheme = c.scheme;
    r.cycles = c.cycles;
    r.prob_success = proj.probability;
    r.scatter_weight = proj.conditioned->scatter_weight();
    PureState atoms = apply_local_ops(strip_photons(*proj.conditioned), c.local_ops);
    r.fidelity = fidelity_pure(target_state(c), atoms);

    switch (c.scheme) {
    case Scheme::bell:
        r.tangle = pair_tangle(atoms, Register::atom(0), Register::atom(1));
        break;
    case Scheme::w:
        for (std::size_t i = 0; i < c.atoms; ++i) {
            for (std::size_t j = i + 1; j < c.atoms; ++j) {
                r.pair_tangles.push_back({i, j, pair_tangle(atoms, Register::atom(i), Register::atom(j))});
            }
        }
        break;
    case Scheme::ghz:
        if (c.atoms == 3) {
            r.three_tangle = three_tangle(atoms);
        }
        break;
    case Scheme::photon:
        break;
    }
    r.conditioned = std::move(atoms);
    return r;
}

}  // namespace detail

/**
 * Two atoms probed in turn by one photon, photon post-selected in mode0.
 * Conditioned state: N{a1 a2 |00> + b1 b2 c^{2N} |11> + s c^{N-1} a1 b2 |01>}.
 */
inline SchemeReport run_bell(const SchemeConfig &config) {
    return detail::run_atom_scheme(config, Scheme::bell);
}

/// k atoms probed in turn by one photon, photon post-selected in mode1.
/// A string with m >= 1 excitations carries c^N (s c^{N-1})^{m-1}.
inline SchemeReport run_w(const SchemeConfig &config) { return detail::run_atom_scheme(config, Scheme::w); }

/// Photon i probes atoms i and i+1; all k-1 photons post-selected in mode0.
inline SchemeReport run_ghz(const SchemeConfig &config) {
    return detail::run_atom_scheme(config, Scheme::ghz);
}

/**
 * One atom probed by n photons in turn, then H on the atom, a measurement,
 * and Z on photon 0 when the atom reads 1. Both outcomes are kept and mixed
 * with their probabilities; the atom and the scatter environment are traced
 * out. The photon density matrix spans logical and lost configurations.
 */
inline SchemeReport run_photon(const SchemeConfig &raw) {
    if (raw.scheme != Scheme::photon) {
        throw std::invalid_argument("configuration is not for the photon scheme");
    }
    const SchemeConfig c = resolve(raw);
    const std::vector<PhotonSlot> photons(c.photons, PhotonSlot::mode0);
    PureState s = make_product_state(c.atom_amps, photons);
    for (std::size_t p = 0; p < c.photons; ++p) {
        s = detail::probe(s, c, 0, p, c.port_plan[p], static_cast<std::uint32_t>(p));
    }
    s = apply_single_qubit_gate(s, Register::atom(0), gates::hadamard());

    std::vector<Register> keep;
    for (std::size_t p = 0; p < c.photons; ++p) {
        keep.push_back(Register::photon(p));
    }
    std::vector<std::pair<double, DensityMatrix>> parts;
    double kept_probability = 0.0;
    for (const auto &branch : measure_atom_branches(s, 0)) {
        if (c.photon_branch && branch.outcome != *c.photon_branch) {
            continue;
        }
        PureState corrected = branch.outcome == 1
                                  ? apply_single_qubit_gate(branch.branch, Register::photon(0), gates::pauli_z())
                                  : branch.branch;
        parts.emplace_back(branch.probability, reduced_density_matrix(corrected, keep, true));
        kept_probability += branch.probability;
    }
    if (c.photon_branch) {
        if (parts.empty()) {
            throw EmptyConditionedState("photon scheme: requested atom outcome has no support", 0.0);
        }
        parts.front().first = 1.0;
    }

    SchemeReport r;
    r.scheme = Scheme::photon;
    r.cycles = c.cycles;
    r.prob_success = c.photon_branch ? kept_probability : 1.0;
    DensityMatrix rho = mix(parts);
    r.fidelity = fidelity_mixed(rho, target_state(c));
    r.photon_state = std::move(rho);
    return r;
}

inline SchemeReport run_scheme(const SchemeConfig &config) {
    switch (config.scheme) {
    case Scheme::bell:
        return run_bell(config);
    case Scheme::w:
        return run_w(config);
    case Scheme::ghz:
        return run_ghz(config);
    case Scheme::photon:
        return run_photon(config);
    }
    throw std::logic_error("run_scheme: unknown scheme");
}

struct ClosedFormScheme {
    double probability = 0.0;
    std::optional<PureState> state;  // normalized; nullopt below 1e-14
};

namespace detail {

// Dense amplitudes (atom 0 most significant) of the unnormalized
// conditioned state for a resolved default configuration.
inline std::vector<Amplitude> closed_form_amplitudes(const SchemeConfig &c, double cc, double ss) {
    const int n = c.cycles;
    auto cp = [cc](int e) { return std::pow(cc, e); };
    const auto &a = c.atom_amps;
    auto al = [&](std::size_t i) { return a[i].first; };
    auto be = [&](std::size_t i) { return a[i].second; };

    std::vector<Amplitude> amps;
    switch (c.scheme) {
    case Scheme::bell:
        amps = {al(0) * al(1), ss * cp(n - 1) * al(0) * be(1), 0.0, be(0) * be(1) * cp(2 * n)};
        break;
    case Scheme::w: {
        const double single = cp(n);
        const double pair = ss * cp(2 * n - 1);
        const double triple = ss * ss * cp(3 * n - 2);
        amps = {
            0.0,                                  // 000
            single * al(0) * al(1) * be(2),       // 001
            single * al(0) * be(1) * al(2),       // 010
            pair * al(0) * be(1) * be(2),         // 011
            single * be(0) * al(1) * al(2),       // 100
            pair * be(0) * al(1) * be(2),         // 101
            pair * be(0) * be(1) * al(2),         // 110
            triple * be(0) * be(1) * be(2),       // 111
        };
        break;
    }
    case Scheme::ghz:
        amps = {
            al(0) * al(1) * al(2),                   // 000
            ss * cp(n - 1) * al(0) * al(1) * be(2),  // 001
            0.0,
            ss * cp(3 * n - 1) * al(0) * be(1) * be(2),  // 011
            0.0,
            0.0,
            0.0,
            cp(4 * n) * be(0) * be(1) * be(2),  // 111
        };
        break;
    case Scheme::photon:
        break;
    }

    return amps;
}

}  // namespace detail

/**
 * Conditioned state and success probability from the analytic expressions,
 * with c = cos(pi/2N), s = sin(pi/2N):
 *
 *   bell: a1a2|00> + b1b2 c^{2N}|11> + s c^{N-1} a1b2|01>
 *   w:    c^N (single excitations) + s c^{2N-1} (pairs) + s^2 c^{3N-2} b1b2b3|111>
 *   ghz:  a1a2a3|000> + c^{4N} b1b2b3|111> + s c^{N-1} a1a2b3|001>
 *         + s c^{3N-1} a1b2b3|011>
 *
 * Only the default port plan and conditioning, and k = 2 (bell) or
 * k = 3 (w, ghz), have closed forms.
 */
inline ClosedFormScheme closed_form_scheme_state(const SchemeConfig &raw) {
    if (raw.scheme == Scheme::photon) {
        throw UnsupportedVariant("closed_form_scheme_state: no closed-form state for the photon scheme");
    }
    const SchemeConfig c = resolve(raw);
    if ((c.scheme != Scheme::bell && c.atoms != 3) || c.ideal_gates || !c.local_ops.empty() ||
        c.port_plan != default_port_plan(c.scheme, c.atoms, c.photons) ||
        c.conditioning != default_conditioning(c.scheme)) {
        throw UnsupportedVariant("closed_form_scheme_state: only the default k=2/3 configurations have closed forms");
    }
    const CycleAngle ang = cycle_angle(c.cycles);
    const std::vector<Amplitude> amps = detail::closed_form_amplitudes(c, ang.cos, ang.sin);

    double p = 0.0;
    for (const auto &x : amps) {
        p += std::norm(x);
    }
    ClosedFormScheme out;
    out.probability = p;
    if (p >= kEmptyProbability) {
        out.state = PureState::from_qubit_amplitudes(c.atoms, amps).normalized();
    }
    return out;
}

/// Large-N limit (c -> 1, s -> 0) of the closed form for a default k = 2/3
/// configuration.
inline ClosedFormScheme closed_form_limit(const SchemeConfig &raw) {
    SchemeConfig c = raw;
    c.cycles = 1;  // the limit does not depend on it; keeps resolve() happy
    c = resolve(c);
    if (c.scheme == Scheme::photon || (c.scheme != Scheme::bell && c.atoms != 3)) {
        throw UnsupportedVariant("closed_form_limit: bell, or w/ghz with 3 atoms only");
    }
    const std::vector<Amplitude> amps = detail::closed_form_amplitudes(c, 1.0, 0.0);
    ClosedFormScheme out;
    for (const auto &x : amps) {
        out.probability += std::norm(x);
    }
    out.state = PureState::from_qubit_amplitudes(c.atoms, amps).normalized();
    return out;
}

/**
 * Photon-scheme fidelity from the logical sector alone: every scatter term
 * has a lost photon, and after the Z correction both atom outcomes leave
 * v = alpha|0...0> + beta c^{nN}|1...1> (weight 1/2 each), so
 * F = |alpha + beta c^{nN}| / sqrt2.
 */
inline double closed_form_photon_fidelity(const SchemeConfig &raw) {
    const SchemeConfig c = resolve(raw);
    if (c.scheme != Scheme::photon || c.photon_branch ||
        c.port_plan != default_port_plan(c.scheme, c.atoms, c.photons)) {
        throw UnsupportedVariant("closed_form_photon_fidelity: default photon scheme only");
    }
    const double survive =
        c.ideal_gates ? 1.0 : std::pow(cycle_angle(c.cycles).cos, static_cast<int>(c.photons) * c.cycles);
    return std::abs(c.atom_amps[0].first + c.atom_amps[0].second * survive) / std::sqrt(2.0);
}

/**
 * Configuration reaching another member of a scheme's entangled family.
 *
 * Bell: conditioning on mode1 switches the plan to [Q, Q] and the target to
 * (|01>+|10>)/sqrt2; local Paulis then move between the four Bell states.
 * W and GHZ: only local Paulis on the default conditioning.
 */
inline SchemeConfig variant_map(Scheme scheme, PhotonSlot conditioning, std::span<const LocalOp> local_ops) {
    SchemeConfig c;
    c.scheme = scheme;
    switch (scheme) {
    case Scheme::bell:
        if (conditioning == PhotonSlot::mode0) {
            c.port_plan = {Variant::q, Variant::q_r};
        } else if (conditioning == PhotonSlot::mode1) {
            c.port_plan = {Variant::q, Variant::q};
        } else {
            throw UnsupportedVariant("variant_map: conditioning must be mode0 or mode1");
        }
        break;
    case Scheme::w:
    case Scheme::ghz:
        if (conditioning != default_conditioning(scheme)) {
            throw UnsupportedVariant(std::string("variant_map: ") + to_string(scheme) +
                                     " variants are reached by local operations only");
        }
        break;
    case Scheme::photon:
        throw UnsupportedVariant("variant_map: the photon scheme has no variants");
    }
    c.conditioning = conditioning;
    c.local_ops.assign(local_ops.begin(), local_ops.end());
    for (const auto &op : c.local_ops) {
        if (op.atom >= default_atoms(scheme)) {
            throw UnsupportedVariant("variant_map: local operation on atom " + std::to_string(op.atom) +
                                     " outside the default register");
        }
    }
    return c;
}

}  // namespace qisim

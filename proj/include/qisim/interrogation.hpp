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
 * The N-cycle quantum interrogation gate and its closed-form input/output
 * maps.
 *
 * One interrogation is a chain of N Mach-Zehnder passes sharing one
 * absorber. In order it applies: a pi phase on photon mode1, then N times
 * [beam splitter at theta = pi/(2N), absorber], then a swap of the two
 * photon modes. With the atom transparent the chain is the identity; with
 * the atom absorbing, mode0 is driven to mode1 with amplitude cos^N(theta)
 * and the remainder scatters off the atom.
 */

#pragma once

#include <cmath>
#include <array>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qisim/state.hpp"

namespace qisim {

/// Q, or Q_r with the two photon ports swapped (X Q X on the photon).
enum class Variant : std::uint8_t { q, q_r };

inline const char *to_string(Variant v) { return v == Variant::q ? "Q" : "Q_r"; }

struct InterrogationSpec {
    std::size_t atom = 0;
    std::size_t photon = 0;
    int cycles = 1;
    Variant variant = Variant::q;
    std::uint32_t index = 0;  // stamped into scatter events
};

struct CycleAngle {
    double theta;
    double cos;
    double sin;
};

/// theta = pi/(2N). N = 1 is pinned to exact cos = 0, sin = 1.
inline CycleAngle cycle_angle(int cycles) {
    if (cycles < 1) {
        throw std::invalid_argument("cycle count must be >= 1, got " + std::to_string(cycles));
    }
    const double theta = std::numbers::pi / (2.0 * cycles);
    if (cycles == 1) {
        return {theta, 0.0, 1.0};
    }
    return {theta, std::cos(theta), std::sin(theta)};
}

/// R = cos^2(theta).
inline double reflectivity(int cycles) {
    const double c = cycle_angle(cycles).cos;
    return c * c;
}

namespace detail {

inline void rotate_photon(TermMap &terms, std::size_t photon, double c, double s) {
    TermMap out;
    for (const auto &[label, amp] : terms) {
        const PhotonSlot p = label.photons[photon];
        if (p == PhotonSlot::lost) {
            accumulate(out, label, amp);
            continue;
        }
        BasisLabel l = label;
        if (p == PhotonSlot::mode0) {
            // |0> -> c|0> + s|1>
            accumulate(out, l, c * amp);
            l.photons[photon] = PhotonSlot::mode1;
            accumulate(out, l, s * amp);
        } else {
            // |1> -> c|1> - s|0>
            accumulate(out, l, c * amp);
            l.photons[photon] = PhotonSlot::mode0;
            accumulate(out, l, -s * amp);
        }
    }
    terms = std::move(out);
}

inline BasisLabel scattered(BasisLabel l, std::size_t atom, std::size_t photon, ScatterEvent event) {
    l.atoms[atom] = 0;
    l.photons[photon] = PhotonSlot::lost;
    l.scatter.insert(std::upper_bound(l.scatter.begin(), l.scatter.end(), event), event);
    return l;
}

// Moves every |1>_a |mode1>_p term of `active` into `sink` as a scatter term.
inline void absorb(TermMap &active, TermMap &sink, std::size_t atom, std::size_t photon,
                   ScatterEvent event) {
    for (auto it = active.begin(); it != active.end();) {
        const BasisLabel &l = it->first;
        if (l.atoms[atom] == 1 && l.photons[photon] == PhotonSlot::mode1) {
            accumulate(sink, scattered(l, atom, photon, event), it->second);
            it = active.erase(it);
        } else {
            ++it;
        }
    }
}

inline void swap_modes(TermMap &terms, std::size_t photon) {
    TermMap out;
    for (const auto &[label, amp] : terms) {
        BasisLabel l = label;
        PhotonSlot &p = l.photons[photon];
        if (p != PhotonSlot::lost) {
            p = p == PhotonSlot::mode0 ? PhotonSlot::mode1 : PhotonSlot::mode0;
        }
        accumulate(out, l, amp);
    }
    terms = std::move(out);
}

inline void phase_mode1(TermMap &terms, std::size_t photon) {
    for (auto &[label, amp] : terms) {
        if (label.photons[photon] == PhotonSlot::mode1) {
            amp = -amp;
        }
    }
}

}  // namespace detail

/// B_theta on one photon: |0> -> cos|0> + sin|1>, |1> -> cos|1> - sin|0>.
inline PureState beam_splitter(const PureState &state, std::size_t photon, double theta) {
    detail::check_register(state.signature(), Register::photon(photon), "beam_splitter");
    TermMap terms = state.terms();
    detail::rotate_photon(terms, photon, std::cos(theta), std::sin(theta));
    return PureState(state.signature(), std::move(terms));
}

/**
 * Absorber A: |1>_a|1>_p -> |0>_a|s>_p, everything else unchanged.
 *
 * The scattered photon is recorded as `event`, which must name `photon` and
 * be unique within the run.
 */
inline PureState absorber(const PureState &state, std::size_t atom, std::size_t photon, ScatterEvent event) {
    detail::check_register(state.signature(), Register::atom(atom), "absorber");
    detail::check_register(state.signature(), Register::photon(photon), "absorber");
    if (event.photon != photon) {
        throw std::invalid_argument("absorber: scatter event names a different photon");
    }
    TermMap active = state.terms();
    TermMap sink;
    detail::absorb(active, sink, atom, photon, event);
    for (auto &[l, a] : sink) {
        detail::accumulate(active, l, a);
    }
    return PureState(state.signature(), std::move(active));
}

namespace detail {

// Output of the N-cycle gate on one basis input of a lone atom-photon pair.
struct KernelColumn {
    std::vector<std::pair<std::array<std::uint8_t, 2>, Amplitude>> logical;  // (atom, photon mode)
    std::vector<std::pair<std::uint32_t, Amplitude>> scattered;               // (cycle, amplitude)
};

// Steps P, N x (B, A), S cycle by cycle on the four basis inputs of a
// one-atom, one-photon system.
inline std::array<KernelColumn, 4> interrogation_kernel(const CycleAngle &angle, int cycles, Variant variant,
                                                        std::uint32_t index) {
    std::array<KernelColumn, 4> kernel;
    for (std::uint8_t a = 0; a < 2; ++a) {
        for (std::uint8_t p = 0; p < 2; ++p) {
            TermMap active;
            TermMap sink;
            active.emplace(BasisLabel{{a}, {static_cast<PhotonSlot>(p)}, {}}, 1.0);
            if (variant == Variant::q_r) {
                swap_modes(active, 0);
            }
            phase_mode1(active, 0);
            for (int j = 0; j < cycles; ++j) {
                rotate_photon(active, 0, angle.cos, angle.sin);
                absorb(active, sink, 0, 0, ScatterEvent{0, index, static_cast<std::uint32_t>(j)});
            }
            swap_modes(active, 0);
            if (variant == Variant::q_r) {
                swap_modes(active, 0);
            }
            KernelColumn &col = kernel[2 * a + p];
            for (const auto &[l, amp] : active) {
                col.logical.push_back({{l.atoms[0], static_cast<std::uint8_t>(l.photons[0])}, amp});
            }
            for (const auto &[l, amp] : sink) {
                col.scattered.emplace_back(l.scatter.front().cycle, amp);
            }
        }
    }
    return kernel;
}

}  // namespace detail

/**
 * Full N-cycle interrogation of `spec.atom` by `spec.photon`.
 *
 * The gate acts only on the addressed atom-photon pair, so the cycles are
 * stepped once on that pair's four basis inputs and the resulting columns
 * are applied to every term linearly. Terms where the photon is already lost
 * pass through untouched.
 */
inline PureState interrogate(const PureState &state, const InterrogationSpec &spec) {
    const Signature sig = state.signature();
    detail::check_register(sig, Register::atom(spec.atom), "interrogate");
    detail::check_register(sig, Register::photon(spec.photon), "interrogate");
    const CycleAngle angle = cycle_angle(spec.cycles);
    const auto kernel = detail::interrogation_kernel(angle, spec.cycles, spec.variant, spec.index);

    TermMap out;
    for (const auto &[label, amp] : state.terms()) {
        const PhotonSlot p = label.photons[spec.photon];
        if (p == PhotonSlot::lost) {
            detail::accumulate(out, label, amp);
            continue;
        }
        const detail::KernelColumn &col = kernel[2 * label.atoms[spec.atom] + static_cast<std::size_t>(p)];
        for (const auto &[bits, k] : col.logical) {
            BasisLabel l = label;
            l.atoms[spec.atom] = bits[0];
            l.photons[spec.photon] = static_cast<PhotonSlot>(bits[1]);
            detail::accumulate(out, l, k * amp);
        }
        for (const auto &[cycle, k] : col.scattered) {
            const ScatterEvent event{static_cast<std::uint32_t>(spec.photon), spec.index, cycle};
            detail::accumulate(out, detail::scattered(label, spec.atom, spec.photon, event), k * amp);
        }
    }
    return PureState(sig, std::move(out));
}

/**
 * Infinite-N limit of the interrogation (the logic table Q):
 * |00> -> |00>, |01> -> |01>, |10> -> |11>, and |11> -> absorption. The
 * absorption branch is recorded as a scatter event in cycle 0. Q_r swaps
 * the photon ports, so there |11> -> |10> and |10> is absorbed.
 */
inline PureState ideal_interrogate(const PureState &state, std::size_t atom, std::size_t photon,
                                   Variant variant, std::uint32_t index = 0) {
    detail::check_register(state.signature(), Register::atom(atom), "ideal_interrogate");
    detail::check_register(state.signature(), Register::photon(photon), "ideal_interrogate");
    TermMap out;
    const PhotonSlot probe = variant == Variant::q ? PhotonSlot::mode0 : PhotonSlot::mode1;
    const PhotonSlot flipped = variant == Variant::q ? PhotonSlot::mode1 : PhotonSlot::mode0;
    for (const auto &[label, amp] : state.terms()) {
        const PhotonSlot p = label.photons[photon];
        if (label.atoms[atom] == 0 || p == PhotonSlot::lost) {
            detail::accumulate(out, label, amp);
        } else if (p == probe) {
            BasisLabel l = label;
            l.photons[photon] = flipped;
            detail::accumulate(out, l, amp);
        } else {
            const ScatterEvent event{static_cast<std::uint32_t>(photon), index, 0};
            detail::accumulate(out, detail::scattered(label, atom, photon, event), amp);
        }
    }
    return PureState(state.signature(), std::move(out));
}

/// Closed-form output of one interrogation on a basis input.
struct ClosedFormMap {
    struct LogicalTerm {
        int atom;
        int photon;
        double amplitude;
    };
    struct ScatteredTerm {
        std::uint32_t cycle;  // 0-based cycle in which the photon was absorbed
        double amplitude;     // atom left in 0, photon lost
    };

    std::vector<LogicalTerm> logical;
    std::vector<ScatteredTerm> scattered;

    [[nodiscard]] double norm2() const {
        double s = 0.0;
        for (const auto &t : logical) {
            s += t.amplitude * t.amplitude;
        }
        for (const auto &t : scattered) {
            s += t.amplitude * t.amplitude;
        }
        return s;
    }
};

/**
 * Evaluates the analytic N-cycle maps, with c = cos(theta), s = sin(theta):
 *
 *   |0>|0> -> sin(N theta)|00> + cos(N theta)|01>
 *   |0>|1> -> sin(N theta)|01> - cos(N theta)|00>
 *   |1>|0> -> c^N |11> + s * sum_{j=0}^{N-1} c^j |0 s_j>
 *   |1>|1> -> s c^{N-1} |11> - c |0 s'> + s^2 * sum_{j=0}^{N-2} c^j |0 s_j>
 *
 * In the last line s' is absorption in cycle 0 and s_j is absorption in
 * cycle j + 1. Q_r relabels the input and output photon with X.
 */
inline ClosedFormMap closed_form_map(int atom_in, int photon_in, int cycles, Variant variant) {
    if ((atom_in != 0 && atom_in != 1) || (photon_in != 0 && photon_in != 1)) {
        throw std::invalid_argument("closed_form_map: inputs must be 0 or 1");
    }
    const CycleAngle a = cycle_angle(cycles);
    const double c = a.cos;
    const double s = a.sin;
    const int p = variant == Variant::q_r ? 1 - photon_in : photon_in;
    auto relabel = [&](int out) { return variant == Variant::q_r ? 1 - out : out; };

    ClosedFormMap m;
    if (atom_in == 0) {
        const double n_theta = cycles * a.theta;
        const double stay = std::sin(n_theta);
        const double flip = std::cos(n_theta);
        if (p == 0) {
            m.logical.push_back({0, relabel(0), stay});
            m.logical.push_back({0, relabel(1), flip});
        } else {
            m.logical.push_back({0, relabel(1), stay});
            m.logical.push_back({0, relabel(0), -flip});
        }
        return m;
    }

    if (p == 0) {
        m.logical.push_back({1, relabel(1), std::pow(c, cycles)});
        for (int j = 0; j < cycles; ++j) {
            m.scattered.push_back({static_cast<std::uint32_t>(j), s * std::pow(c, j)});
        }
    } else {
        m.logical.push_back({1, relabel(1), s * std::pow(c, cycles - 1)});
        m.scattered.push_back({0, -c});
        for (int j = 0; j + 2 <= cycles; ++j) {
            m.scattered.push_back({static_cast<std::uint32_t>(j + 1), s * s * std::pow(c, j)});
        }
    }
    return m;
}

}  // namespace qisim

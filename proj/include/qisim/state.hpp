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
 * Sparse pure states over hybrid atom / photon / environment registers.
 *
 * A basis label records every atom's logical value, every photon's mode
 * occupancy (or its loss), and the list of scatter events that removed
 * photons from the interferometer. Labels with different scatter lists are
 * orthogonal, so the environment never needs an explicit Hilbert space:
 * keeping such terms as separate map keys is the whole representation.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qisim/errors.hpp"
#include "qisim/linalg.hpp"

namespace qisim {

enum class PhotonSlot : std::uint8_t {
    mode0 = 0,  // logical 0, bottom interferometer mode
    mode1 = 1,  // logical 1, top mode (the one the atom absorbs from)
    lost = 2,   // absorbed and scattered out of both modes
};

struct ScatterEvent {
    std::uint32_t photon = 0;
    std::uint32_t interrogation = 0;
    std::uint32_t cycle = 0;

    auto operator<=>(const ScatterEvent &) const = default;
};

struct BasisLabel {
    std::vector<std::uint8_t> atoms;
    std::vector<PhotonSlot> photons;
    std::vector<ScatterEvent> scatter;  // kept sorted

    auto operator<=>(const BasisLabel &) const = default;

    [[nodiscard]] bool has_scatter() const noexcept { return !scatter.empty(); }

    /// "01" for atoms only; photons follow after '_' as 0/1/L; scatter events
    /// follow as +s(photon,interrogation,cycle).
    [[nodiscard]] std::string to_string() const {
        std::string out;
        for (auto a : atoms) {
            out.push_back(a ? '1' : '0');
        }
        if (!photons.empty()) {
            out.push_back('_');
            for (auto p : photons) {
                out.push_back(p == PhotonSlot::mode0 ? '0' : p == PhotonSlot::mode1 ? '1' : 'L');
            }
        }
        for (const auto &e : scatter) {
            out += "+s(" + std::to_string(e.photon) + "," + std::to_string(e.interrogation) + "," +
                   std::to_string(e.cycle) + ")";
        }
        return out;
    }
};

enum class RegisterKind : std::uint8_t { atom, photon };

struct Register {
    RegisterKind kind = RegisterKind::atom;
    std::size_t index = 0;

    static constexpr Register atom(std::size_t i) { return {RegisterKind::atom, i}; }
    static constexpr Register photon(std::size_t i) { return {RegisterKind::photon, i}; }

    auto operator<=>(const Register &) const = default;
};

struct Signature {
    std::size_t atoms = 0;
    std::size_t photons = 0;

    auto operator<=>(const Signature &) const = default;
};

/// 2x2 gate, row-major: {g00, g01, g10, g11}.
using Gate2 = std::array<Amplitude, 4>;

namespace gates {
inline Gate2 hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return {r, r, r, -r};
}
inline Gate2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Gate2 pauli_y() { return {0.0, Amplitude(0, -1), Amplitude(0, 1), 0.0}; }
inline Gate2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }
inline Gate2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
}  // namespace gates

using TermMap = std::map<BasisLabel, Amplitude>;

namespace detail {
inline void accumulate(TermMap &terms, const BasisLabel &label, Amplitude amp) {
    if (amp == Amplitude{}) {
        return;
    }
    auto [it, inserted] = terms.try_emplace(label, amp);
    if (!inserted) {
        it->second += amp;
        if (it->second == Amplitude{}) {
            terms.erase(it);
        }
    }
}
}  // namespace detail

class PureState {
  public:
    PureState() = default;
    explicit PureState(Signature sig) : sig_(sig) {}
    PureState(Signature sig, TermMap terms) : sig_(sig), terms_(std::move(terms)) {
        for (auto it = terms_.begin(); it != terms_.end();) {
            const BasisLabel &l = it->first;
            if (l.atoms.size() != sig_.atoms || l.photons.size() != sig_.photons) {
                throw SignatureMismatch("PureState: label " + l.to_string() +
                                        " does not match the register signature");
            }
            if (!std::isfinite(it->second.real()) || !std::isfinite(it->second.imag())) {
                throw ValidationError("PureState: non-finite amplitude on " + l.to_string());
            }
            it = it->second == Amplitude{} ? terms_.erase(it) : std::next(it);
        }
    }

    /// Atoms-only state from a dense vector of 2^k amplitudes; atom 0 is the
    /// most significant bit.
    static PureState from_qubit_amplitudes(std::size_t atom_count, std::span<const Amplitude> amps) {
        if (amps.size() != (std::size_t{1} << atom_count)) {
            throw std::invalid_argument("from_qubit_amplitudes: expected 2^k amplitudes");
        }
        TermMap terms;
        for (std::size_t bits = 0; bits < amps.size(); ++bits) {
            BasisLabel l;
            l.atoms.resize(atom_count);
            for (std::size_t q = 0; q < atom_count; ++q) {
                l.atoms[q] = static_cast<std::uint8_t>((bits >> (atom_count - 1 - q)) & 1U);
            }
            detail::accumulate(terms, l, amps[bits]);
        }
        return PureState(Signature{atom_count, 0}, std::move(terms));
    }

    [[nodiscard]] Signature signature() const noexcept { return sig_; }
    [[nodiscard]] const TermMap &terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

    [[nodiscard]] Amplitude amplitude(const BasisLabel &l) const {
        auto it = terms_.find(l);
        return it == terms_.end() ? Amplitude{} : it->second;
    }

    [[nodiscard]] double norm2() const {
        double s = 0.0;
        for (const auto &[l, a] : terms_) {
            s += std::norm(a);
        }
        return s;
    }

    /// Squared norm of the terms carrying at least one scatter event.
    [[nodiscard]] double scatter_weight() const {
        double s = 0.0;
        for (const auto &[l, a] : terms_) {
            if (l.has_scatter()) {
                s += std::norm(a);
            }
        }
        return s;
    }

    [[nodiscard]] PureState scaled(Amplitude k) const {
        TermMap out;
        for (const auto &[l, a] : terms_) {
            detail::accumulate(out, l, a * k);
        }
        return PureState(sig_, std::move(out));
    }

    [[nodiscard]] PureState normalized() const {
        const double n = std::sqrt(norm2());
        if (n == 0.0) {
            throw ValidationError("PureState: cannot normalize the zero vector");
        }
        return scaled(1.0 / n);
    }

    /// Atoms first, then photons.
    [[nodiscard]] std::vector<Register> registers() const {
        std::vector<Register> out;
        for (std::size_t i = 0; i < sig_.atoms; ++i) {
            out.push_back(Register::atom(i));
        }
        for (std::size_t i = 0; i < sig_.photons; ++i) {
            out.push_back(Register::photon(i));
        }
        return out;
    }

  private:
    Signature sig_;
    TermMap terms_;
};

inline PureState operator+(const PureState &a, const PureState &b) {
    if (a.signature() != b.signature()) {
        throw SignatureMismatch("PureState: cannot add states with different signatures");
    }
    TermMap out = a.terms();
    for (const auto &[l, amp] : b.terms()) {
        detail::accumulate(out, l, amp);
    }
    return PureState(a.signature(), std::move(out));
}

/// <a|b>; labels with different scatter lists are orthogonal.
inline Amplitude inner_product(const PureState &a, const PureState &b) {
    if (a.signature() != b.signature()) {
        throw SignatureMismatch("inner_product: register signatures differ");
    }
    Amplitude s = 0.0;
    const auto &small = a.size() <= b.size() ? a : b;
    const auto &large = a.size() <= b.size() ? b : a;
    for (const auto &[l, amp] : small.terms()) {
        auto it = large.terms().find(l);
        if (it != large.terms().end()) {
            s += &small == &a ? std::conj(amp) * it->second : std::conj(it->second) * amp;
        }
    }
    return s;
}

/// Global phase chosen so the largest-magnitude amplitude (first in label
/// order on ties) is real and positive.
inline PureState phase_aligned(const PureState &s) {
    const BasisLabel *best = nullptr;
    double best_mag = -1.0;
    for (const auto &[l, a] : s.terms()) {
        if (std::abs(a) > best_mag) {
            best_mag = std::abs(a);
            best = &l;
        }
    }
    if (best == nullptr || best_mag == 0.0) {
        return s;
    }
    const Amplitude a = s.amplitude(*best);
    return s.scaled(std::conj(a) / std::abs(a));
}

namespace detail {
inline void check_register(Signature sig, Register r, const char *where) {
    const std::size_t limit = r.kind == RegisterKind::atom ? sig.atoms : sig.photons;
    if (r.index >= limit) {
        throw RegisterError(std::string(where) + ": " +
                            (r.kind == RegisterKind::atom ? "atom" : "photon") + " index " +
                            std::to_string(r.index) + " out of range");
    }
}

inline bool is_unitary(const Gate2 &g, double tol) {
    // G G^dagger == I
    const Amplitude e00 = g[0] * std::conj(g[0]) + g[1] * std::conj(g[1]);
    const Amplitude e01 = g[0] * std::conj(g[2]) + g[1] * std::conj(g[3]);
    const Amplitude e11 = g[2] * std::conj(g[2]) + g[3] * std::conj(g[3]);
    return std::abs(e00 - 1.0) <= tol && std::abs(e01) <= tol && std::abs(e11 - 1.0) <= tol;
}
}  // namespace detail

/**
 * Tensor product of single-atom superpositions alpha|0> + beta|1> with
 * photons in logical modes. Every label starts with an empty scatter list.
 */
inline PureState make_product_state(std::span<const std::pair<Amplitude, Amplitude>> atom_amps,
                                    std::span<const PhotonSlot> photon_inits) {
    constexpr double kNormTol = 1e-9;
    for (std::size_t i = 0; i < atom_amps.size(); ++i) {
        const auto &[alpha, beta] = atom_amps[i];
        const double n = std::norm(alpha) + std::norm(beta);
        if (std::abs(n - 1.0) > kNormTol) {
            throw NormalizationError("make_product_state: atom " + std::to_string(i) +
                                     " amplitudes have |alpha|^2+|beta|^2 = " + std::to_string(n));
        }
    }
    for (auto p : photon_inits) {
        if (p == PhotonSlot::lost) {
            throw std::invalid_argument("make_product_state: photons must start in a logical mode");
        }
    }

    TermMap terms;
    BasisLabel base;
    base.photons.assign(photon_inits.begin(), photon_inits.end());
    base.atoms.resize(atom_amps.size());
    const std::size_t k = atom_amps.size();
    for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
        Amplitude amp = 1.0;
        for (std::size_t q = 0; q < k; ++q) {
            const bool one = (bits >> (k - 1 - q)) & 1U;
            base.atoms[q] = one ? 1 : 0;
            amp *= one ? atom_amps[q].second : atom_amps[q].first;
        }
        detail::accumulate(terms, base, amp);
    }
    return PureState(Signature{k, photon_inits.size()}, std::move(terms));
}

/// Applies a 2x2 unitary to the logical values of one register. Terms where
/// a photon target is lost pass through unchanged.
inline PureState apply_single_qubit_gate(const PureState &state, Register target, const Gate2 &g) {
    constexpr double kUnitaryTol = 1e-9;
    detail::check_register(state.signature(), target, "apply_single_qubit_gate");
    if (!detail::is_unitary(g, kUnitaryTol)) {
        throw ValidationError("apply_single_qubit_gate: matrix is not unitary");
    }

    TermMap out;
    for (const auto &[label, amp] : state.terms()) {
        int bit = 0;
        if (target.kind == RegisterKind::atom) {
            bit = label.atoms[target.index];
        } else {
            const PhotonSlot p = label.photons[target.index];
            if (p == PhotonSlot::lost) {
                detail::accumulate(out, label, amp);
                continue;
            }
            bit = p == PhotonSlot::mode1 ? 1 : 0;
        }
        BasisLabel l = label;
        for (int row = 0; row < 2; ++row) {
            const Amplitude coeff = g[static_cast<std::size_t>(2 * row + bit)];
            if (coeff == Amplitude{}) {
                continue;
            }
            if (target.kind == RegisterKind::atom) {
                l.atoms[target.index] = static_cast<std::uint8_t>(row);
            } else {
                l.photons[target.index] = row ? PhotonSlot::mode1 : PhotonSlot::mode0;
            }
            detail::accumulate(out, l, coeff * amp);
        }
    }
    return PureState(state.signature(), std::move(out));
}

struct Projection {
    double probability = 0.0;
    std::optional<PureState> conditioned;  // nullopt when probability < 1e-14

    [[nodiscard]] bool empty() const noexcept { return !conditioned.has_value(); }
};

inline constexpr double kEmptyProbability = 1e-14;

/// Post-selects photons in the listed logical modes and renormalizes.
inline Projection project_photons(const PureState &state,
                                  std::span<const std::pair<std::size_t, PhotonSlot>> required) {
    for (const auto &[idx, slot] : required) {
        detail::check_register(state.signature(), Register::photon(idx), "project_photons");
        if (slot == PhotonSlot::lost) {
            throw std::invalid_argument("project_photons: can only require a logical mode");
        }
    }
    TermMap kept;
    double prob = 0.0;
    for (const auto &[label, amp] : state.terms()) {
        const bool match = std::all_of(required.begin(), required.end(), [&](const auto &req) {
            return label.photons[req.first] == req.second;
        });
        if (match) {
            kept.emplace(label, amp);
            prob += std::norm(amp);
        }
    }
    Projection p;
    p.probability = prob;
    if (prob >= kEmptyProbability) {
        p.conditioned = PureState(state.signature(), std::move(kept)).normalized();
    }
    return p;
}

struct AtomBranch {
    int outcome = 0;
    double probability = 0.0;
    PureState branch;
};

/// Projective measurement of one atom in its logical basis. Outcomes with
/// probability below 1e-14 are omitted.
inline std::vector<AtomBranch> measure_atom_branches(const PureState &state, std::size_t atom) {
    detail::check_register(state.signature(), Register::atom(atom), "measure_atom_branches");
    std::array<TermMap, 2> parts;
    std::array<double, 2> probs{0.0, 0.0};
    for (const auto &[label, amp] : state.terms()) {
        const int v = label.atoms[atom];
        parts[static_cast<std::size_t>(v)].emplace(label, amp);
        probs[static_cast<std::size_t>(v)] += std::norm(amp);
    }
    std::vector<AtomBranch> out;
    for (int v = 0; v < 2; ++v) {
        const auto idx = static_cast<std::size_t>(v);
        if (probs[idx] < kEmptyProbability) {
            continue;
        }
        out.push_back({v, probs[idx], PureState(state.signature(), std::move(parts[idx])).normalized()});
    }
    return out;
}

/// Drops the photon registers of a state whose photons have all been
/// projected onto fixed logical modes. Fails if any term carries scatter
/// events or if the photons are not in a single configuration.
inline PureState strip_photons(const PureState &state) {
    TermMap out;
    std::optional<std::vector<PhotonSlot>> config;
    for (const auto &[label, amp] : state.terms()) {
        if (label.has_scatter()) {
            throw ValidationError("strip_photons: state has scatter-sector support");
        }
        if (!config) {
            config = label.photons;
        } else if (*config != label.photons) {
            throw ValidationError("strip_photons: photons are not in a single configuration");
        }
        BasisLabel l;
        l.atoms = label.atoms;
        detail::accumulate(out, l, amp);
    }
    return PureState(Signature{state.signature().atoms, 0}, std::move(out));
}

/**
 * Density matrix over an explicit, ordered list of basis labels.
 *
 * Reduced matrices use labels that carry only the kept registers and no
 * scatter events.
 */
class DensityMatrix {
  public:
    DensityMatrix() = default;
    DensityMatrix(std::vector<BasisLabel> basis, CMatrix entries)
        : basis_(std::move(basis)), entries_(std::move(entries)) {
        if (!entries_.square() || entries_.rows() != basis_.size()) {
            throw std::invalid_argument("DensityMatrix: entries do not match the basis size");
        }
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            index_.emplace(basis_[i], i);
        }
        if (index_.size() != basis_.size()) {
            throw std::invalid_argument("DensityMatrix: duplicate basis label");
        }
    }

    [[nodiscard]] const std::vector<BasisLabel> &basis() const noexcept { return basis_; }
    [[nodiscard]] const CMatrix &entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t dim() const noexcept { return basis_.size(); }
    [[nodiscard]] double trace() const { return entries_.trace().real(); }

    [[nodiscard]] std::optional<std::size_t> index_of(const BasisLabel &l) const {
        auto it = index_.find(l);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    /// <a|rho|b>, zero when either label is outside the basis.
    [[nodiscard]] Amplitude element(const BasisLabel &a, const BasisLabel &b) const {
        const auto i = index_of(a);
        const auto j = index_of(b);
        return i && j ? entries_(*i, *j) : Amplitude{};
    }

  private:
    std::vector<BasisLabel> basis_;
    CMatrix entries_;
    std::map<BasisLabel, std::size_t> index_;
};

/// |psi><psi| over the state's own support.
inline DensityMatrix to_density_matrix(const PureState &s) {
    std::vector<BasisLabel> basis;
    std::vector<Amplitude> amps;
    for (const auto &[l, a] : s.terms()) {
        basis.push_back(l);
        amps.push_back(a);
    }
    CMatrix m(basis.size(), basis.size());
    for (std::size_t i = 0; i < amps.size(); ++i) {
        for (std::size_t j = 0; j < amps.size(); ++j) {
            m(i, j) = amps[i] * std::conj(amps[j]);
        }
    }
    return DensityMatrix(std::move(basis), std::move(m));
}

/// Probability-weighted sum of density matrices over the union of their bases.
inline DensityMatrix mix(std::span<const std::pair<double, DensityMatrix>> parts) {
    std::map<BasisLabel, std::size_t> index;
    for (const auto &[w, rho] : parts) {
        for (const auto &l : rho.basis()) {
            index.emplace(l, 0);
        }
    }
    std::vector<BasisLabel> basis;
    for (auto &[l, i] : index) {
        i = basis.size();
        basis.push_back(l);
    }
    CMatrix m(basis.size(), basis.size());
    for (const auto &[w, rho] : parts) {
        std::vector<std::size_t> map(rho.dim());
        for (std::size_t i = 0; i < rho.dim(); ++i) {
            map[i] = index.at(rho.basis()[i]);
        }
        for (std::size_t i = 0; i < rho.dim(); ++i) {
            for (std::size_t j = 0; j < rho.dim(); ++j) {
                m(map[i], map[j]) += w * rho.entries()(i, j);
            }
        }
    }
    return DensityMatrix(std::move(basis), std::move(m));
}

namespace detail {

// Register values in keep order; photons encode lost as 2.
using KeptConfig = std::vector<std::uint8_t>;

inline std::uint8_t register_value(const BasisLabel &l, Register r) {
    return r.kind == RegisterKind::atom ? l.atoms[r.index]
                                        : static_cast<std::uint8_t>(l.photons[r.index]);
}

inline bool config_logical(const KeptConfig &c) {
    return std::all_of(c.begin(), c.end(), [](std::uint8_t v) { return v < 2; });
}

struct SplitLabel {
    KeptConfig kept;
    BasisLabel traced;  // remaining registers plus the scatter list
};

inline SplitLabel split_label(const BasisLabel &l, std::span<const Register> keep) {
    SplitLabel out;
    out.kept.reserve(keep.size());
    for (const Register &r : keep) {
        out.kept.push_back(register_value(l, r));
    }
    for (std::size_t i = 0; i < l.atoms.size(); ++i) {
        if (std::find(keep.begin(), keep.end(), Register::atom(i)) == keep.end()) {
            out.traced.atoms.push_back(l.atoms[i]);
        }
    }
    for (std::size_t i = 0; i < l.photons.size(); ++i) {
        if (std::find(keep.begin(), keep.end(), Register::photon(i)) == keep.end()) {
            out.traced.photons.push_back(l.photons[i]);
        }
    }
    out.traced.scatter = l.scatter;
    return out;
}

inline BasisLabel kept_label(const KeptConfig &c, std::span<const Register> keep) {
    BasisLabel l;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i].kind == RegisterKind::atom) {
            l.atoms.push_back(c[i]);
        } else {
            l.photons.push_back(static_cast<PhotonSlot>(c[i]));
        }
    }
    return l;
}

inline void validate_keep(Signature sig, std::span<const Register> keep) {
    for (std::size_t i = 0; i < keep.size(); ++i) {
        check_register(sig, keep[i], "reduced_density_matrix");
        for (std::size_t j = 0; j < i; ++j) {
            if (keep[i] == keep[j]) {
                throw RegisterError("reduced_density_matrix: duplicate register selector");
            }
        }
    }
}

// All 2^m logical configurations plus any non-logical ones in `seen`,
// sorted lexicographically in keep order.
inline std::vector<KeptConfig> reduced_basis(std::size_t m, std::vector<KeptConfig> seen) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << m); ++bits) {
        KeptConfig c(m);
        for (std::size_t q = 0; q < m; ++q) {
            c[q] = static_cast<std::uint8_t>((bits >> (m - 1 - q)) & 1U);
        }
        seen.push_back(std::move(c));
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    return seen;
}

inline DensityMatrix assemble_reduced(std::span<const Register> keep, const std::vector<KeptConfig> &configs,
                                      CMatrix entries) {
    std::vector<BasisLabel> basis;
    basis.reserve(configs.size());
    for (const auto &c : configs) {
        basis.push_back(kept_label(c, keep));
    }
    return DensityMatrix(std::move(basis), std::move(entries));
}

}  // namespace detail

/**
 * Partial trace of a pure state onto the kept registers.
 *
 * Everything not kept is traced out, including the scatter environment.
 * The basis enumerates the kept registers' logical configurations in keep
 * order (first selector most significant). With include_lost, photon
 * configurations containing a loss are added as extra basis labels;
 * otherwise that sector is dropped and the trace equals the logical-sector
 * weight.
 */
inline DensityMatrix reduced_density_matrix(const PureState &state, std::span<const Register> keep,
                                            bool include_lost = false) {
    detail::validate_keep(state.signature(), keep);

    std::map<BasisLabel, std::vector<std::pair<detail::KeptConfig, Amplitude>>> groups;
    std::vector<detail::KeptConfig> seen;
    for (const auto &[label, amp] : state.terms()) {
        auto split = detail::split_label(label, keep);
        if (!detail::config_logical(split.kept)) {
            if (!include_lost) {
                continue;
            }
            seen.push_back(split.kept);
        }
        groups[std::move(split.traced)].emplace_back(std::move(split.kept), amp);
    }

    const auto configs = detail::reduced_basis(keep.size(), std::move(seen));
    std::map<detail::KeptConfig, std::size_t> index;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        index.emplace(configs[i], i);
    }
    CMatrix rho(configs.size(), configs.size());
    for (const auto &[traced, entries] : groups) {
        for (const auto &[ci, ai] : entries) {
            const std::size_t i = index.at(ci);
            for (const auto &[cj, aj] : entries) {
                rho(i, index.at(cj)) += ai * std::conj(aj);
            }
        }
    }
    return detail::assemble_reduced(keep, configs, std::move(rho));
}

/// Partial trace of a density matrix; selectors index into its labels.
inline DensityMatrix reduced_density_matrix(const DensityMatrix &rho, std::span<const Register> keep,
                                            bool include_lost = false) {
    if (rho.dim() == 0) {
        return detail::assemble_reduced(keep, detail::reduced_basis(keep.size(), {}), CMatrix(0, 0));
    }
    const Signature sig{rho.basis().front().atoms.size(), rho.basis().front().photons.size()};
    for (const auto &l : rho.basis()) {
        if (l.atoms.size() != sig.atoms || l.photons.size() != sig.photons) {
            throw SignatureMismatch("reduced_density_matrix: mixed register signatures in basis");
        }
    }
    detail::validate_keep(sig, keep);

    std::vector<detail::SplitLabel> splits;
    std::vector<detail::KeptConfig> seen;
    for (const auto &l : rho.basis()) {
        splits.push_back(detail::split_label(l, keep));
        if (!detail::config_logical(splits.back().kept) && include_lost) {
            seen.push_back(splits.back().kept);
        }
    }
    const auto configs = detail::reduced_basis(keep.size(), std::move(seen));
    std::map<detail::KeptConfig, std::size_t> index;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        index.emplace(configs[i], i);
    }
    CMatrix out(configs.size(), configs.size());
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        auto ii = index.find(splits[i].kept);
        if (ii == index.end()) {
            continue;
        }
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            if (splits[i].traced != splits[j].traced) {
                continue;
            }
            auto jj = index.find(splits[j].kept);
            if (jj == index.end()) {
                continue;
            }
            out(ii->second, jj->second) += rho.entries()(i, j);
        }
    }
    return detail::assemble_reduced(keep, configs, std::move(out));
}

/// Weight of the terms whose kept photons all sit in logical modes.
inline double logical_weight(const PureState &state, std::span<const Register> keep) {
    double w = 0.0;
    for (const auto &[label, amp] : state.terms()) {
        const bool logical = std::all_of(keep.begin(), keep.end(), [&](const Register &r) {
            return r.kind == RegisterKind::atom || label.photons[r.index] != PhotonSlot::lost;
        });
        if (logical) {
            w += std::norm(amp);
        }
    }
    return w;
}

}  // namespace qisim

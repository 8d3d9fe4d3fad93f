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
 * Parameter sweeps over the cycle count, their CSV/JSON encodings, state
 * dumps, and the table of large-N limits.
 *
 * All output is byte-deterministic: rows are emitted in N order whatever
 * the worker count, and doubles are printed in shortest round-trip form.
 */

#pragma once

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qisim/errors.hpp"
#include "qisim/measures.hpp"
#include "qisim/schemes.hpp"

namespace qisim {

enum class OutputFormat : std::uint8_t { csv, json };

struct SweepJob {
    SchemeConfig config;  // cycles is overwritten per row
    int n_min = 1;
    int n_max = 1;
    int step = 1;
    OutputFormat format = OutputFormat::csv;
    bool oracle_check = false;
    unsigned threads = 1;
};

struct SweepRow {
    int cycles = 0;
    std::vector<std::optional<double>> values;  // one per sweep_columns() entry
};

inline constexpr double kOracleTolerance = 1e-10;

/// Columns after `scheme,N`.
inline std::vector<std::string> sweep_columns(const SchemeConfig &raw) {
    SchemeConfig probe = raw;
    probe.cycles = 1;
    const SchemeConfig c = resolve(probe);
    switch (c.scheme) {
    case Scheme::bell:
        return {"prob_success", "fidelity", "tangle"};
    case Scheme::w: {
        std::vector<std::string> cols{"prob_success", "fidelity"};
        for (std::size_t i = 0; i < c.atoms; ++i) {
            for (std::size_t j = i + 1; j < c.atoms; ++j) {
                cols.push_back("tangle_" + std::to_string(i + 1) + std::to_string(j + 1));
            }
        }
        return cols;
    }
    case Scheme::ghz:
        return {"prob_success", "fidelity", "three_tangle"};
    case Scheme::photon:
        return {"fidelity"};
    }
    return {};
}

inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

namespace detail {

inline void check_close(double simulated, double expected, const std::string &what, int cycles) {
    if (!(std::abs(simulated - expected) <= kOracleTolerance)) {
        throw OracleDivergence(what + " at N=" + std::to_string(cycles) + ": simulated " +
                               format_double(simulated) + ", closed form " + format_double(expected));
    }
}

inline void check_states(const PureState &simulated, const PureState &expected, int cycles) {
    const PureState a = phase_aligned(simulated);
    const PureState b = phase_aligned(expected);
    TermMap labels = a.terms();
    for (const auto &[l, amp] : b.terms()) {
        labels.emplace(l, amp);
    }
    for (const auto &[l, unused] : labels) {
        if (std::abs(a.amplitude(l) - b.amplitude(l)) > kOracleTolerance) {
            throw OracleDivergence("amplitude of |" + l.to_string() + "> at N=" + std::to_string(cycles) +
                                   " differs from the closed form");
        }
    }
}

}  // namespace detail

/// Cross-checks one simulated report (or an empty outcome with probability
/// `empty_probability`) against the closed forms. Throws OracleDivergence.
inline void oracle_check(const SchemeConfig &config, const std::optional<SchemeReport> &report,
                         double empty_probability) {
    if (config.scheme == Scheme::photon) {
        const double expected = closed_form_photon_fidelity(config);
        detail::check_close(report->fidelity, expected, "photon fidelity", config.cycles);
        return;
    }
    const ClosedFormScheme cf = closed_form_scheme_state(config);
    const double p = report ? report->prob_success : empty_probability;
    detail::check_close(p, cf.probability, "success probability", config.cycles);
    if (report.has_value() != cf.state.has_value()) {
        throw OracleDivergence("conditioned support at N=" + std::to_string(config.cycles) +
                               " disagrees with the closed form");
    }
    if (!report) {
        return;
    }
    detail::check_states(*report->conditioned, *cf.state, config.cycles);
    detail::check_close(report->fidelity, fidelity_pure(target_state(resolve(config)), *cf.state),
                        "fidelity", config.cycles);
}

inline SweepRow make_row(const SchemeConfig &config, bool check) {
    SweepRow row;
    row.cycles = config.cycles;
    const std::size_t ncols = sweep_columns(config).size();
    try {
        const SchemeReport r = run_scheme(config);
        if (check) {
            oracle_check(config, r, 0.0);
        }
        switch (r.scheme) {
        case Scheme::bell:
            row.values = {r.prob_success, r.fidelity, r.tangle};
            break;
        case Scheme::w:
            row.values = {r.prob_success, r.fidelity};
            for (const auto &pt : r.pair_tangles) {
                row.values.emplace_back(pt.value);
            }
            break;
        case Scheme::ghz:
            row.values = {r.prob_success, r.fidelity,
                          r.three_tangle ? std::optional<double>(r.three_tangle->value) : std::nullopt};
            break;
        case Scheme::photon:
            row.values = {r.fidelity};
            break;
        }
    } catch (const EmptyConditionedState &e) {
        if (check) {
            oracle_check(config, std::nullopt, e.probability());
        }
        row.values.assign(ncols, std::nullopt);
        row.values[0] = e.probability();
    }
    return row;
}

/**
 * Runs every N in [n_min, n_max] with the given stride. Rows are computed
 * by `threads` workers but always returned in N order. Oracle divergence in
 * any row is rethrown after all workers finish.
 */
inline std::vector<SweepRow> run_sweep(const SweepJob &job) {
    if (job.n_min < 1 || job.n_max < job.n_min || job.step < 1) {
        throw std::invalid_argument("sweep range needs 1 <= n-min <= n-max and step >= 1");
    }
    (void)sweep_columns(job.config);  // validates the configuration up front

    std::vector<int> ns;
    for (int n = job.n_min; n <= job.n_max; n += job.step) {
        ns.push_back(n);
    }
    std::vector<SweepRow> rows(ns.size());
    std::vector<std::exception_ptr> errors(ns.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < ns.size(); i = next++) {
            try {
                SchemeConfig c = job.config;
                c.cycles = ns[i];
                rows[i] = make_row(c, job.oracle_check);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned nthreads = std::max(1U, job.threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nthreads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return rows;
}

inline std::string format_sweep_csv(const SchemeConfig &config, const std::vector<SweepRow> &rows) {
    const auto cols = sweep_columns(config);
    std::string out = "scheme,N";
    for (const auto &c : cols) {
        out += "," + c;
    }
    out += "\n";
    for (const auto &row : rows) {
        out += to_string(config.scheme);
        out += "," + std::to_string(row.cycles);
        for (const auto &v : row.values) {
            out += "," + format_double(v.value_or(NAN));
        }
        out += "\n";
    }
    return out;
}

inline std::string format_sweep_json(const SchemeConfig &config, const std::vector<SweepRow> &rows) {
    const auto cols = sweep_columns(config);
    nlohmann::ordered_json doc;
    doc["scheme"] = to_string(config.scheme);
    doc["columns"] = cols;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto &row : rows) {
        nlohmann::ordered_json r;
        r["N"] = row.cycles;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (row.values[i]) {
                r[cols[i]] = *row.values[i];
            } else {
                r[cols[i]] = nullptr;
            }
        }
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

inline std::string format_sweep(const SweepJob &job, const std::vector<SweepRow> &rows) {
    return job.format == OutputFormat::csv ? format_sweep_csv(job.config, rows)
                                           : format_sweep_json(job.config, rows);
}

/// Conditioned atom state (or photon density matrix) at one N, serialized.
/// Throws EmptyConditionedState when post-selection leaves nothing.
inline std::string format_state(const SchemeConfig &config, OutputFormat format) {
    const SchemeReport r = run_scheme(config);
    if (r.scheme == Scheme::photon) {
        const DensityMatrix &rho = *r.photon_state;
        if (format == OutputFormat::csv) {
            std::string out = "row,col,re,im\n";
            for (std::size_t i = 0; i < rho.dim(); ++i) {
                for (std::size_t j = 0; j < rho.dim(); ++j) {
                    const Amplitude v = rho.entries()(i, j);
                    if (v != Amplitude{}) {
                        out += rho.basis()[i].to_string() + "," + rho.basis()[j].to_string() + "," +
                               format_double(v.real()) + "," + format_double(v.imag()) + "\n";
                    }
                }
            }
            return out;
        }
        nlohmann::ordered_json doc;
        doc["scheme"] = "photon";
        doc["N"] = r.cycles;
        doc["fidelity"] = r.fidelity;
        doc["basis"] = nlohmann::ordered_json::array();
        for (const auto &l : rho.basis()) {
            doc["basis"].push_back(l.to_string());
        }
        doc["rho"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < rho.dim(); ++i) {
            nlohmann::ordered_json line = nlohmann::ordered_json::array();
            for (std::size_t j = 0; j < rho.dim(); ++j) {
                line.push_back({rho.entries()(i, j).real(), rho.entries()(i, j).imag()});
            }
            doc["rho"].push_back(std::move(line));
        }
        return doc.dump(2) + "\n";
    }

    const PureState psi = phase_aligned(*r.conditioned);
    if (format == OutputFormat::csv) {
        std::string out = "label,re,im\n";
        for (const auto &[l, a] : psi.terms()) {
            out += l.to_string() + "," + format_double(a.real()) + "," + format_double(a.imag()) + "\n";
        }
        return out;
    }
    nlohmann::ordered_json doc;
    doc["scheme"] = to_string(r.scheme);
    doc["N"] = r.cycles;
    doc["atoms"] = psi.signature().atoms;
    doc["prob_success"] = r.prob_success;
    doc["terms"] = nlohmann::ordered_json::array();
    for (const auto &[l, a] : psi.terms()) {
        nlohmann::ordered_json t;
        t["label"] = l.to_string();
        t["re"] = a.real();
        t["im"] = a.imag();
        doc["terms"].push_back(std::move(t));
    }
    return doc.dump(2) + "\n";
}

/// Inverse of the JSON atom-state dump.
inline PureState parse_state_json(const std::string &text) {
    const auto doc = nlohmann::json::parse(text);
    const std::size_t atoms = doc.at("atoms").get<std::size_t>();
    TermMap terms;
    for (const auto &t : doc.at("terms")) {
        const std::string label = t.at("label").get<std::string>();
        if (label.size() != atoms) {
            throw std::invalid_argument("parse_state_json: label '" + label + "' has the wrong length");
        }
        BasisLabel l;
        for (char ch : label) {
            if (ch != '0' && ch != '1') {
                throw std::invalid_argument("parse_state_json: label '" + label + "' is not a bit string");
            }
            l.atoms.push_back(ch == '1' ? 1 : 0);
        }
        detail::accumulate(terms, l, Amplitude(t.at("re").get<double>(), t.at("im").get<double>()));
    }
    return PureState(Signature{atoms, 0}, std::move(terms));
}

struct LimitEntry {
    std::string quantity;
    double value;
    std::string source;
};

/**
 * Large-N values for symmetric inputs. Probability, fidelity and tangles
 * come from the c -> 1, s -> 0 limit of the closed forms. A second set of
 * commonly quoted success-probability limits (1/4, 9/64, 2/64) is listed
 * separately and flagged, since it does not follow from the
 * conditioned-state norms.
 */
inline std::vector<LimitEntry> limit_table(Scheme scheme) {
    if (scheme == Scheme::photon) {
        throw std::invalid_argument("limits are tabulated for bell, w and ghz only");
    }
    SchemeConfig c;
    c.scheme = scheme;
    const SchemeConfig rc = resolve(c);
    const ClosedFormScheme lim = closed_form_limit(c);
    const PureState &psi = *lim.state;
    const std::string derived = "closed-form limit";
    const std::string quoted = "quoted value (unreconciled)";

    std::vector<LimitEntry> out;
    out.push_back({"prob_success", lim.probability, derived});
    out.push_back({"fidelity", fidelity_pure(target_state(rc), psi), derived});
    switch (scheme) {
    case Scheme::bell:
        out.push_back({"tangle", pair_tangle(psi, Register::atom(0), Register::atom(1)), derived});
        out.push_back({"prob_success", 1.0 / 4.0, quoted});
        break;
    case Scheme::w:
        out.push_back({"tangle_pair", pair_tangle(psi, Register::atom(0), Register::atom(1)), derived});
        out.push_back({"prob_success", 9.0 / 64.0, quoted});
        break;
    case Scheme::ghz:
        out.push_back({"three_tangle", three_tangle(psi).value, derived});
        out.push_back({"prob_success", 2.0 / 64.0, quoted});
        break;
    case Scheme::photon:
        break;
    }
    return out;
}

inline std::string format_limits(Scheme scheme) {
    std::string out = "scheme,quantity,value,source\n";
    for (const auto &e : limit_table(scheme)) {
        out += std::string(to_string(scheme)) + "," + e.quantity + "," + format_double(e.value) + "," + e.source +
               "\n";
    }
    return out;
}

}  // namespace qisim

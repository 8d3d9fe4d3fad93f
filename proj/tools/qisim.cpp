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

// qisim: sweeps, state dumps and limit tables for the interrogation schemes.
//
// Exit codes: 0 success, 2 usage error, 3 empty conditioned state,
// 4 oracle divergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qisim/qisim.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitOracle = 4;

struct SchemeOptions {
    std::string scheme;
    std::size_t atoms = 0;
    std::size_t photons = 0;
    std::vector<double> alpha_beta;
};

void add_scheme_options(CLI::App *cmd, SchemeOptions &o, bool with_counts) {
    cmd->add_option("--scheme", o.scheme, "bell, w, ghz or photon")
        ->required()
        ->check(CLI::IsMember({"bell", "w", "ghz", "photon"}));
    if (with_counts) {
        cmd->add_option("--atoms", o.atoms, "atom count k (w, ghz)");
        cmd->add_option("--photons", o.photons, "photon count n (photon scheme)");
        cmd->add_option("--alpha-beta", o.alpha_beta, "per-atom real amplitudes a1,b1,a2,b2,...")
            ->delimiter(',');
    }
}

qisim::SchemeConfig to_config(const SchemeOptions &o) {
    qisim::SchemeConfig c;
    c.scheme = *qisim::scheme_from_string(o.scheme);
    c.atoms = o.atoms;
    c.photons = o.photons;
    if (!o.alpha_beta.empty()) {
        if (o.alpha_beta.size() % 2 != 0) {
            throw std::invalid_argument("--alpha-beta needs an even number of values");
        }
        for (std::size_t i = 0; i < o.alpha_beta.size(); i += 2) {
            c.atom_amps.emplace_back(o.alpha_beta[i], o.alpha_beta[i + 1]);
        }
    }
    return c;
}

qisim::OutputFormat to_format(const std::string &f) {
    return f == "json" ? qisim::OutputFormat::json : qisim::OutputFormat::csv;
}

int emit(const std::string &text, const std::string &path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "qisim: cannot open " << path << " for writing\n";
        return kExitUsage;
    }
    out << text;
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum interrogation entanglement simulator"};
    app.require_subcommand(1);

    SchemeOptions sweep_opts;
    int n_min = 1;
    int n_max = 1;
    int step = 1;
    bool oracle = false;
    std::string format = "csv";
    std::string out_path;
    unsigned threads = 1;
    auto *sweep = app.add_subcommand("sweep", "run a scheme over a range of cycle counts");
    add_scheme_options(sweep, sweep_opts, true);
    sweep->add_option("--n-min", n_min, "smallest N")->required();
    sweep->add_option("--n-max", n_max, "largest N")->required();
    sweep->add_option("--step", step, "stride in N");
    sweep->add_flag("--oracle-check", oracle, "cross-validate every row against the closed forms");
    sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--out", out_path, "output file (default stdout)");
    sweep->add_option("--threads", threads, "worker threads");

    SchemeOptions state_opts;
    int cycles = 1;
    std::string state_format = "json";
    auto *state = app.add_subcommand("state", "dump the conditioned state at one N");
    add_scheme_options(state, state_opts, true);
    state->add_option("--cycles", cycles, "cycles per interrogation")->required();
    state->add_option("--format", state_format)->check(CLI::IsMember({"csv", "json"}));

    SchemeOptions limit_opts;
    auto *limits = app.add_subcommand("limits", "large-N limits for symmetric inputs");
    add_scheme_options(limits, limit_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*sweep) {
            qisim::SweepJob job;
            job.config = to_config(sweep_opts);
            job.n_min = n_min;
            job.n_max = n_max;
            job.step = step;
            job.format = to_format(format);
            job.oracle_check = oracle;
            job.threads = threads;
            const auto rows = qisim::run_sweep(job);
            return emit(qisim::format_sweep(job, rows), out_path);
        }
        if (*state) {
            qisim::SchemeConfig c = to_config(state_opts);
            c.cycles = cycles;
            return emit(qisim::format_state(c, to_format(state_format)), "");
        }
        if (*limits) {
            return emit(qisim::format_limits(*qisim::scheme_from_string(limit_opts.scheme)), "");
        }
    } catch (const qisim::EmptyConditionedState &e) {
        std::cerr << "qisim: no support: " << e.what() << " (probability " << qisim::format_double(e.probability())
                  << ")\n";
        return kExitEmpty;
    } catch (const qisim::OracleDivergence &e) {
        std::cerr << "qisim: oracle divergence: " << e.what() << "\n";
        return kExitOracle;
    } catch (const std::invalid_argument &e) {
        std::cerr << "qisim: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range &e) {
        std::cerr << "qisim: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

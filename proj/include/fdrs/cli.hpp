// SPDX-License-Identifier: Apache-2.0
//
// fdrs: joint subcarrier and power allocation for a full-duplex
// decode-and-forward relay link with rate splitting
// Copyright (C) 2026 the fdrs developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef FDRS_CLI_HPP
#define FDRS_CLI_HPP

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdrs/config_io.hpp"
#include "fdrs/experiment.hpp"
#include "fdrs/gridsearch.hpp"
#include "fdrs/schemes.hpp"

namespace fdrs {

namespace detail {

inline std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        std::size_t pos = 0;
        out.push_back(std::stod(tok, &pos));
        if (pos != tok.size()) throw std::invalid_argument("bad number in list: " + tok);
    }
    if (out.empty()) throw std::invalid_argument("empty value list");
    return out;
}

inline std::vector<SchemeId> parse_scheme_list(const std::string& csv) {
    std::vector<SchemeId> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(parse_scheme(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty scheme list");
    return out;
}

// Impairment-free small instance for the oracle cross-check.
inline SystemConfig oracle_config(int k) {
    SystemConfig c = SystemConfig::defaults();
    c.num_subcarriers = k;
    c.kappa_relay = 0.0;
    c.beta_relay = 0.0;
    c.beta_dest = 0.0;
    c.broadcast(db_to_linear(-40.0), 0.0, 0.0);
    return c;
}

inline int run_oracle(int points, const std::vector<std::uint64_t>& seeds, std::ostream& os) {
    SolverOptions opts;
    bool all_ok = true;
    for (int k : {1, 2}) {
        const SystemConfig cfg = oracle_config(k);
        const double tol = k == 1 ? 1e-3 : 1e-2;
        for (std::uint64_t seed : seeds) {
            const ChannelRealization ch = generate_channels(cfg, seed);
            const Precoders pre = mrt_precoders(ch);
            const RateCoefficients coeffs = build_coefficients(ch, pre, cfg);
            const auto [alloc, trace] = sia_solve(coeffs, cfg, opts);
            const GridSearchResult grid = grid_search_rs(coeffs, cfg, points);
            const double gap = grid.best_objective - trace.final_true_objective;
            const bool ok = gap <= tol && trace.termination != Termination::inner_failure;
            all_ok = all_ok && ok;
            os << (ok ? "[PASS]" : "[FAIL]") << " K=" << k << " seed=" << seed
               << " sia=" << trace.final_true_objective << " grid=" << grid.best_objective << " gap=" << gap
               << " tol=" << tol << "\n";
        }
    }
    return all_ok ? 0 : 2;
}

}  // namespace detail

/// Entry point of the fdrs tool. Exit codes: 0 success, 1 configuration or
/// usage error, 2 experiment/oracle failure.
inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"full-duplex decode-and-forward relay rate-splitting simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string sweep = "noise";
    std::string values_csv;
    std::string schemes_csv;
    std::string out_path;
    std::int64_t cli_seed = -1;
    int cli_realizations = -1;
    int threads = 0;

    CLI::App* validate = app.add_subcommand("validate", "parse and sanity-check a config file");
    validate->add_option("config", config_path, "config file")->required();

    CLI::App* run = app.add_subcommand("run", "run a Monte-Carlo sweep and emit CSV");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--sweep", sweep, "axis: noise|strength_sd|distortion|power (default noise)");
    run->add_option("--values", values_csv, "comma-separated axis values (dB except power)");
    run->add_option("--out", out_path, "output CSV path (default sweep_<axis>.csv)");
    run->add_option("--seed", cli_seed, "base seed (overrides config and FDRS_SEED)");
    run->add_option("--realizations", cli_realizations, "number of channel realizations");
    run->add_option("--schemes", schemes_csv, "comma-separated subset of RS,RS_ND,ODL,ORL,HD");
    run->add_option("--threads", threads, "worker threads (default: hardware)");

    int oracle_points = 200;
    std::string oracle_seeds = "1,2,3";
    CLI::App* oracle = app.add_subcommand("oracle", "small-instance grid-search cross-check of the solver");
    oracle->add_option("--points", oracle_points, "grid points per axis (default 200)");
    oracle->add_option("--seeds", oracle_seeds, "comma-separated realization seeds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 1;
    }

    try {
        if (validate->parsed()) {
            const FileConfig fc = parse_config_file(config_path);
            std::cout << "OK: " << config_path << " (K=" << fc.config.num_subcarriers
                      << ", N_BS=" << fc.config.num_bs_antennas << ", realizations=" << fc.realizations
                      << ", rng=" << kRngAlgorithm << ")\n";
            return 0;
        }

        if (oracle->parsed()) {
            std::vector<std::uint64_t> seeds;
            for (double v : detail::parse_double_list(oracle_seeds)) seeds.push_back(static_cast<std::uint64_t>(v));
            return detail::run_oracle(oracle_points, seeds, std::cout);
        }

        // run
        const FileConfig fc = parse_config_file(config_path);
        ExperimentSpec spec;
        spec.base = fc.config;
        spec.axis = parse_axis(sweep);
        spec.axis_values = values_csv.empty() ? default_axis_values(spec.axis) : detail::parse_double_list(values_csv);
        spec.num_realizations = cli_realizations > 0 ? cli_realizations : fc.realizations;
        spec.base_seed = fc.base_seed;
        if (const char* env_seed = std::getenv("FDRS_SEED"))
            spec.base_seed = static_cast<std::uint64_t>(std::stoull(env_seed));
        if (cli_seed >= 0) spec.base_seed = static_cast<std::uint64_t>(cli_seed);
        if (!schemes_csv.empty()) spec.schemes = detail::parse_scheme_list(schemes_csv);
        spec.num_threads = threads;
        spec.validate();

        std::string out = out_path.empty() ? std::string("sweep_") + to_string(spec.axis) + ".csv" : out_path;
        if (const char* env_dir = std::getenv("FDRS_OUT_DIR"); env_dir && !out.empty() && out.front() != '/')
            out = std::string(env_dir) + "/" + out;

        SweepResult res;
        try {
            res = run_experiment(spec);
        } catch (const std::runtime_error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        emit_csv(res, out);
        std::cout << "axis=" << to_string(res.axis) << " seed=" << spec.base_seed
                  << " realizations=" << spec.num_realizations << " rng=" << kRngAlgorithm << "\n";
        for (std::size_t a = 0; a < res.axis_values.size(); ++a)
            for (std::size_t s = 0; s < res.schemes.size(); ++s) {
                const SweepCell& c = res.cell(a, s);
                std::cout << "  " << c.axis_value << " " << to_string(c.scheme) << " mean=" << c.mean_rate
                          << " std=" << c.std_rate << " ok=" << c.n_ok << " fail=" << c.n_fail << "\n";
            }
        std::cout << "wrote " << out << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace fdrs

#endif  // FDRS_CLI_HPP

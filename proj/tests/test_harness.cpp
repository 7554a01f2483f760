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

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fdrs/cli.hpp"
#include "fdrs/config_io.hpp"
#include "fdrs/experiment.hpp"

using namespace fdrs;

namespace {

SystemConfig small_base() {
    SystemConfig cfg = SystemConfig::defaults();
    cfg.num_subcarriers = 2;
    cfg.num_bs_antennas = 8;
    cfg.broadcast(db_to_linear(-40.0), db_to_linear(-50.0), cfg.kappa_relay);
    return cfg;
}

ExperimentSpec small_spec() {
    ExperimentSpec spec;
    spec.base = small_base();
    spec.axis = SweepAxis::noise;
    spec.axis_values = {-40.0, -30.0};
    spec.num_realizations = 3;
    spec.schemes = {SchemeId::ODL, SchemeId::ORL};
    spec.base_seed = 5;
    return spec;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/fdrs_test_") + name + "_" + std::to_string(::getpid());
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("fdrs");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

const char* kDefaultConfig = R"(# default setup
num_subcarriers   = 2
num_bs_antennas   = 8
power_source      = 1.0
power_relay       = 1.0
strength_sr_db    = -10
strength_rd_db    = -10
strength_sd_db    = -40
strength_si       = 1.0
rician_k          = 10
noise_var_relay_db = -40
noise_var_dest_db  = -40
err_var_sr_db     = -50
err_var_rd_db     = -50
err_var_sd_db     = -50
err_var_rr_db     = -50
kappa_relay_db    = -30
beta_relay_db     = -30
beta_dest_db      = -30
theta_tx_source_db = -30
rate_prefactor    = 1.0
realizations      = 3
base_seed         = 5
)";

}  // namespace

TEST_CASE("axis application touches only its own fields") {
    const SystemConfig base = small_base();
    const SystemConfig n = apply_axis(base, SweepAxis::noise, -20.0);
    REQUIRE(n.noise_var_relay[0] == Catch::Approx(db_to_linear(-20.0)));
    REQUIRE(n.noise_var_dest[1] == Catch::Approx(db_to_linear(-20.0)));
    REQUIRE(n.strength_sd == base.strength_sd);

    const SystemConfig s = apply_axis(base, SweepAxis::strength_sd, -20.0);
    REQUIRE(s.strength_sd == Catch::Approx(db_to_linear(-20.0)));
    REQUIRE(s.noise_var_dest[0] == base.noise_var_dest[0]);

    const SystemConfig d = apply_axis(base, SweepAxis::distortion, -20.0);
    REQUIRE(d.kappa_relay == Catch::Approx(db_to_linear(-20.0)));
    REQUIRE(d.beta_dest == Catch::Approx(db_to_linear(-20.0)));
    REQUIRE(d.theta_tx_source[3] == Catch::Approx(db_to_linear(-20.0)));

    const SystemConfig p = apply_axis(base, SweepAxis::power, 2.5);
    REQUIRE(p.power_source == 2.5);
    REQUIRE(p.power_relay == 2.5);
}

TEST_CASE("experiments are deterministic and self-consistent") {
    const ExperimentSpec spec = small_spec();
    const SweepResult a = run_experiment(spec);
    const SweepResult b = run_experiment(spec);
    REQUIRE(csv_string(a) == csv_string(b));

    // header + one row per (axis value, scheme)
    const std::string csv = csv_string(a);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 2);

    for (const SweepCell& cell : a.cells) {
        REQUIRE(cell.n_ok + cell.n_fail == spec.num_realizations);
        double sum = 0.0;
        int ok = 0;
        for (double v : cell.samples)
            if (!std::isnan(v)) { sum += v; ++ok; }
        REQUIRE(ok == cell.n_ok);
        REQUIRE(cell.mean_rate == Catch::Approx(sum / ok).margin(1e-12));
        double ss = 0.0;
        for (double v : cell.samples)
            if (!std::isnan(v)) ss += (v - cell.mean_rate) * (v - cell.mean_rate);
        REQUIRE(cell.std_rate == Catch::Approx(ok > 1 ? std::sqrt(ss / (ok - 1)) : 0.0).margin(1e-12));
        REQUIRE(cell.mean_rate >= 0.0);
    }
}

TEST_CASE("schemes share channel realizations within a run") {
    ExperimentSpec solo = small_spec();
    solo.schemes = {SchemeId::ODL};
    const SweepResult a = run_experiment(solo);
    const SweepResult b = run_experiment(small_spec());  // ODL together with ORL
    for (std::size_t ax = 0; ax < a.axis_values.size(); ++ax)
        for (std::size_t i = 0; i < a.cell(ax, 0).samples.size(); ++i)
            REQUIRE(a.cell(ax, 0).samples[i] == b.cell(ax, 0).samples[i]);
}

TEST_CASE("csv emission is byte-stable and parses back") {
    const SweepResult res = run_experiment(small_spec());
    const std::string p1 = temp_path("csv1"), p2 = temp_path("csv2");
    emit_csv(res, p1);
    emit_csv(res, p2);
    const std::string text = slurp(p1);
    REQUIRE(text == slurp(p2));
    REQUIRE(text.rfind("axis_value,scheme,mean_rate,std_rate,n_ok,n_fail\n", 0) == 0);

    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string axis, scheme, mean, stddev, ok, fail;
        std::getline(ls, axis, ',');
        std::getline(ls, scheme, ',');
        std::getline(ls, mean, ',');
        std::getline(ls, stddev, ',');
        std::getline(ls, ok, ',');
        std::getline(ls, fail, ',');
        const SweepCell& cell = res.cells[row++];
        REQUIRE(std::stod(axis) == Catch::Approx(cell.axis_value).epsilon(1e-8));
        REQUIRE(scheme == to_string(cell.scheme));
        REQUIRE(std::stod(mean) == Catch::Approx(cell.mean_rate).epsilon(1e-8));
        REQUIRE(std::stod(stddev) == Catch::Approx(cell.std_rate).epsilon(1e-8));
        REQUIRE(std::stoi(ok) == cell.n_ok);
        REQUIRE(std::stoi(fail) == cell.n_fail);
    }
    REQUIRE(row == res.cells.size());
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("a single-realization direct-only experiment reproduces water-filling") {
    ExperimentSpec spec;
    spec.base = SystemConfig::defaults();
    spec.base.num_subcarriers = 1;
    spec.base.kappa_relay = 0.0;
    spec.base.beta_relay = 0.0;
    spec.base.beta_dest = 0.0;
    spec.base.broadcast(db_to_linear(-40.0), 0.0, 0.0);
    spec.axis = SweepAxis::power;
    spec.axis_values = {1.0};
    spec.num_realizations = 1;
    spec.schemes = {SchemeId::ODL};
    spec.base_seed = 21;
    const SweepResult res = run_experiment(spec);
    REQUIRE(res.cells[0].n_ok == 1);

    // K = 1 water-filling puts the whole budget on the only subcarrier.
    const ChannelRealization ch = generate_channels(spec.base, 21);
    const Precoders pre = mrt_precoders(ch);
    const RateCoefficients c = build_coefficients(ch, pre, spec.base);
    const double expected = std::log2(1.0 + c.gain_sd[0] * spec.base.power_source / c.alpha_d[0]);
    REQUIRE(res.cells[0].mean_rate == Catch::Approx(expected).margin(1e-6));
}

TEST_CASE("an experiment with a degenerate setup trips the failure threshold") {
    ExperimentSpec spec = small_spec();
    spec.base.kappa_relay = 0.0;
    spec.base.beta_relay = 0.0;
    spec.base.beta_dest = 0.0;
    spec.base.broadcast(0.0, 0.0, 0.0);  // zero noise: every surrogate denominator collapses
    spec.axis = SweepAxis::power;
    spec.axis_values = {1.0};
    spec.schemes = {SchemeId::RS};
    REQUIRE_THROWS_AS(run_experiment(spec), std::runtime_error);
}

TEST_CASE("config files parse with dB conversion and line-anchored errors") {
    const FileConfig fc = parse_config_text(kDefaultConfig, "test.cfg");
    REQUIRE(fc.config.num_subcarriers == 2);
    REQUIRE(fc.config.num_bs_antennas == 8);
    REQUIRE(fc.config.strength_sr == Catch::Approx(db_to_linear(-10.0)));
    REQUIRE(fc.config.noise_var_dest[1] == Catch::Approx(db_to_linear(-40.0)));
    REQUIRE(fc.config.theta_tx_source.size() == 8);
    REQUIRE(fc.realizations == 3);
    REQUIRE(fc.base_seed == 5);

    auto fails_at = [](const std::string& text, const std::string& anchor) {
        try {
            parse_config_text(text, "bad.cfg");
            FAIL("expected parse error");
        } catch (const std::invalid_argument& e) {
            REQUIRE(std::string(e.what()).find(anchor) != std::string::npos);
        }
    };
    fails_at("power_source = 1\nnonsense_key = 2\n", "bad.cfg:2");
    fails_at("power_source = abc\n", "bad.cfg:1");
    fails_at("power_source = 1\npower_source = 2\n", "bad.cfg:2");

    // the per-chain diagonal follows the scalar transmit-distortion knob
    const FileConfig follows = parse_config_text("kappa_relay_db = -20\n", "t.cfg");
    REQUIRE(follows.config.theta_tx_source[0] == Catch::Approx(db_to_linear(-20.0)));
    fails_at("rician_k_db = 10\n", "bad.cfg:1");
    fails_at("power_source\n", "bad.cfg:1");
}

TEST_CASE("cli validates, runs and reports config errors by exit code") {
    const std::string cfg_path = temp_path("cfg");
    {
        std::ofstream f(cfg_path);
        f << kDefaultConfig;
    }
    REQUIRE(run_cli({"validate", cfg_path}) == 0);

    const std::string bad_path = temp_path("bad");
    {
        std::ofstream f(bad_path);
        f << "power_source = -3\n";  // fails validation
    }
    REQUIRE(run_cli({"validate", bad_path}) == 1);
    REQUIRE(run_cli({"validate", "/nonexistent/file.cfg"}) == 1);
    REQUIRE(run_cli({"--definitely-not-a-flag"}) == 1);

    const std::string out = temp_path("out.csv");
    REQUIRE(run_cli({"run", cfg_path, "--sweep", "noise", "--values", "-40,-30", "--schemes", "ODL",
                     "--realizations", "2", "--out", out}) == 0);
    const std::string body = slurp(out);
    REQUIRE(std::count(body.begin(), body.end(), '\n') == 1 + 2);

    // same seed, same bytes
    const std::string out2 = temp_path("out2.csv");
    REQUIRE(run_cli({"run", cfg_path, "--sweep", "noise", "--values", "-40,-30", "--schemes", "ODL",
                     "--realizations", "2", "--seed", "5", "--out", out2}) == 0);
    REQUIRE(slurp(out2) == body);

    std::remove(cfg_path.c_str());
    std::remove(bad_path.c_str());
    std::remove(out.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("environment variables override seed and output directory") {
    const std::string cfg_path = temp_path("envcfg");
    {
        std::ofstream f(cfg_path);
        f << kDefaultConfig;
    }
    ::setenv("FDRS_SEED", "5", 1);
    ::setenv("FDRS_OUT_DIR", "/tmp", 1);
    const std::string rel = std::string("fdrs_env_out_") + std::to_string(::getpid()) + ".csv";
    REQUIRE(run_cli({"run", cfg_path, "--values", "-40", "--schemes", "ODL", "--realizations", "2", "--out", rel}) ==
            0);
    const std::string abs = "/tmp/" + rel;
    const std::string via_env = slurp(abs);
    ::unsetenv("FDRS_SEED");
    ::unsetenv("FDRS_OUT_DIR");

    const std::string out = temp_path("explicit.csv");
    REQUIRE(run_cli({"run", cfg_path, "--values", "-40", "--schemes", "ODL", "--realizations", "2", "--seed", "5",
                     "--out", out}) == 0);
    REQUIRE(via_env == slurp(out));
    std::remove(cfg_path.c_str());
    std::remove(abs.c_str());
    std::remove(out.c_str());
}

TEST_CASE("cli oracle cross-check passes on a coarse grid") {
    REQUIRE(run_cli({"oracle", "--points", "60", "--seeds", "1"}) == 0);
}

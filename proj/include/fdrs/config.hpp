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

#ifndef FDRS_CONFIG_HPP
#define FDRS_CONFIG_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fdrs {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// All scalar parameters of the simulated link. Channel strengths and power
/// budgets are linear (watts); distortion coefficients are the raw per-chain
/// values before the 1/K inter-carrier normalization.
struct SystemConfig {
    int num_subcarriers = 4;    // K
    int num_bs_antennas = 32;   // N_BS

    double power_source = 1.0;  // P_s
    double power_relay = 1.0;   // P_r

    double strength_sr = 0.1;      // per-entry variance of the true BS->relay channel
    double strength_rd = 0.1;      // variance of the true relay->destination channel
    double strength_sd = 1e-4;     // per-entry variance of the true BS->destination channel
    double strength_si = 1.0;      // total self-interference channel power
    double rician_k = 10.0;        // Rician factor of the self-interference channel

    Eigen::VectorXd noise_var_relay;  // per subcarrier
    Eigen::VectorXd noise_var_dest;

    Eigen::VectorXd err_var_sr;  // channel estimation error variances, per subcarrier
    Eigen::VectorXd err_var_rd;
    Eigen::VectorXd err_var_sd;
    Eigen::VectorXd err_var_rr;

    double kappa_relay = 1e-3;       // relay transmit distortion, before 1/K
    double beta_relay = 1e-3;        // relay receive distortion, before 1/K
    double beta_dest = 1e-3;         // destination receive distortion, before 1/K
    Eigen::VectorXd theta_tx_source; // BS per-chain transmit distortion diagonal, before 1/K

    double rate_prefactor = 1.0;  // multiplies every log2 rate

    // Normalized distortion coefficients. Every rate/covariance formula
    // consumes these, never the raw per-chain values.
    double kappa_r() const { return kappa_relay / num_subcarriers; }
    double beta_r() const { return beta_relay / num_subcarriers; }
    double beta_d() const { return beta_dest / num_subcarriers; }
    Eigen::VectorXd theta_ts() const { return theta_tx_source / num_subcarriers; }

    /// Default setup: 4 subcarriers, 32 BS antennas, -10 dB relay-path and
    /// -40 dB direct-path strengths, unit self-interference with Rician
    /// factor 10, -40 dB noise, -50 dB estimation error, -30 dB distortion.
    static SystemConfig defaults() {
        SystemConfig c;
        c.num_subcarriers = 4;
        c.num_bs_antennas = 32;
        c.power_source = 1.0;
        c.power_relay = 1.0;
        c.strength_sr = db_to_linear(-10.0);
        c.strength_rd = db_to_linear(-10.0);
        c.strength_sd = db_to_linear(-40.0);
        c.strength_si = 1.0;
        c.rician_k = 10.0;
        c.noise_var_relay = Eigen::VectorXd::Constant(4, db_to_linear(-40.0));
        c.noise_var_dest = Eigen::VectorXd::Constant(4, db_to_linear(-40.0));
        c.err_var_sr = Eigen::VectorXd::Constant(4, db_to_linear(-50.0));
        c.err_var_rd = Eigen::VectorXd::Constant(4, db_to_linear(-50.0));
        c.err_var_sd = Eigen::VectorXd::Constant(4, db_to_linear(-50.0));
        c.err_var_rr = Eigen::VectorXd::Constant(4, db_to_linear(-50.0));
        c.kappa_relay = db_to_linear(-30.0);
        c.beta_relay = db_to_linear(-30.0);
        c.beta_dest = db_to_linear(-30.0);
        c.theta_tx_source = Eigen::VectorXd::Constant(32, db_to_linear(-30.0));
        c.rate_prefactor = 1.0;
        return c;
    }

    /// Resize all per-subcarrier and per-antenna vectors to the current
    /// dimensions, broadcasting the given scalars.
    void broadcast(double noise_var, double err_var, double theta) {
        noise_var_relay = Eigen::VectorXd::Constant(num_subcarriers, noise_var);
        noise_var_dest = Eigen::VectorXd::Constant(num_subcarriers, noise_var);
        err_var_sr = Eigen::VectorXd::Constant(num_subcarriers, err_var);
        err_var_rd = Eigen::VectorXd::Constant(num_subcarriers, err_var);
        err_var_sd = Eigen::VectorXd::Constant(num_subcarriers, err_var);
        err_var_rr = Eigen::VectorXd::Constant(num_subcarriers, err_var);
        theta_tx_source = Eigen::VectorXd::Constant(num_bs_antennas, theta);
    }

    void validate() const {
        auto fail = [](const std::string& msg) { throw std::invalid_argument("SystemConfig: " + msg); };
        if (num_subcarriers < 1) fail("num_subcarriers must be >= 1");
        if (num_bs_antennas < 1) fail("num_bs_antennas must be >= 1");
        if (power_source < 0.0 || power_relay < 0.0) fail("power budgets must be nonnegative");
        if (strength_sr < 0.0 || strength_rd < 0.0 || strength_sd < 0.0 || strength_si < 0.0)
            fail("channel strengths must be nonnegative");
        if (rician_k < 0.0) fail("rician_k must be nonnegative");
        if (rate_prefactor <= 0.0) fail("rate_prefactor must be positive");
        if (kappa_relay < 0.0 || kappa_relay >= 1.0) fail("kappa_relay must lie in [0,1)");
        if (beta_relay < 0.0 || beta_relay >= 1.0) fail("beta_relay must lie in [0,1)");
        if (beta_dest < 0.0 || beta_dest >= 1.0) fail("beta_dest must lie in [0,1)");

        const auto k = static_cast<Eigen::Index>(num_subcarriers);
        auto check_vec = [&](const Eigen::VectorXd& v, Eigen::Index n, const char* name) {
            if (v.size() != n) fail(std::string(name) + " has wrong length");
            if ((v.array() < 0.0).any()) fail(std::string(name) + " has a negative entry");
        };
        check_vec(noise_var_relay, k, "noise_var_relay");
        check_vec(noise_var_dest, k, "noise_var_dest");
        check_vec(err_var_sr, k, "err_var_sr");
        check_vec(err_var_rd, k, "err_var_rd");
        check_vec(err_var_sd, k, "err_var_sd");
        check_vec(err_var_rr, k, "err_var_rr");
        check_vec(theta_tx_source, num_bs_antennas, "theta_tx_source");
        if ((theta_tx_source.array() >= 1.0).any()) fail("theta_tx_source entries must lie in [0,1)");
    }
};

}  // namespace fdrs

#endif  // FDRS_CONFIG_HPP

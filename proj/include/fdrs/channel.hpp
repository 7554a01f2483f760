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

#ifndef FDRS_CHANNEL_HPP
#define FDRS_CHANNEL_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "fdrs/config.hpp"

namespace fdrs {

/// Name of the generator + transform pair used by generate_channels.
/// std::mt19937_64 output is fully specified by the standard; the Gaussian
/// transform is an explicit Box-Muller so that realizations are bit-identical
/// across standard libraries.
inline constexpr const char* kRngAlgorithm = "mt19937_64/box-muller";

namespace detail {

// 53-bit uniform in [0, 1).
inline double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// One draw of a circularly-symmetric complex Gaussian with total variance v.
inline std::complex<double> draw_cn(std::mt19937_64& rng, double v) {
    const double u1 = 1.0 - to_unit(rng());  // (0, 1], keeps the log finite
    const double u2 = to_unit(rng());
    const double r = std::sqrt(-v * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace detail

/// Estimated channels of one fading realization. Estimation errors are
/// carried as per-link variances only; no formula downstream consumes
/// error samples.
struct ChannelRealization {
    Eigen::MatrixXcd h_hat_sr;  // K x N_BS, row k = estimated BS->relay channel
    Eigen::MatrixXcd h_hat_sd;  // K x N_BS, row k = estimated BS->destination channel
    Eigen::VectorXcd h_hat_rd;  // K, estimated relay->destination channel
    Eigen::VectorXcd h_hat_rr;  // K, estimated self-interference channel

    Eigen::VectorXd err_var_sr;
    Eigen::VectorXd err_var_rd;
    Eigen::VectorXd err_var_sd;
    Eigen::VectorXd err_var_rr;

    Eigen::Index num_subcarriers() const { return h_hat_rd.size(); }
    Eigen::Index num_antennas() const { return h_hat_sr.cols(); }
};

/// Normalized transmit beamformers, one column per subcarrier.
struct Precoders {
    Eigen::MatrixXcd v_sr;  // N_BS x K
    Eigen::MatrixXcd v_sd;  // N_BS x K
};

/// Draw one channel realization. The estimated channel of every Rayleigh
/// link gets per-entry variance (strength - estimation error variance), so
/// the true channel recombines to the configured strength. The
/// self-interference link keeps its Rician mean and loses the error variance
/// from its scattered part. Deterministic in (config, seed).
inline ChannelRealization generate_channels(const SystemConfig& config, std::uint64_t seed) {
    config.validate();
    const int k_total = config.num_subcarriers;
    const int n_bs = config.num_bs_antennas;

    auto est_var = [](double strength, double err_var, const char* link) {
        const double v = strength - err_var;
        if (v < 0.0)
            throw std::invalid_argument(std::string("generate_channels: error variance exceeds link strength for ") +
                                        link);
        return v;
    };

    const double si_scatter = config.strength_si / (1.0 + config.rician_k);
    const double si_mean = std::sqrt(config.strength_si * config.rician_k / (1.0 + config.rician_k));

    ChannelRealization ch;
    ch.h_hat_sr.resize(k_total, n_bs);
    ch.h_hat_sd.resize(k_total, n_bs);
    ch.h_hat_rd.resize(k_total);
    ch.h_hat_rr.resize(k_total);
    ch.err_var_sr = config.err_var_sr;
    ch.err_var_rd = config.err_var_rd;
    ch.err_var_sd = config.err_var_sd;
    ch.err_var_rr = config.err_var_rr;

    std::mt19937_64 rng(seed);
    // Fixed draw order: sr rows, sd rows, rd, rr.
    for (int k = 0; k < k_total; ++k) {
        const double v = est_var(config.strength_sr, config.err_var_sr[k], "sr");
        for (int n = 0; n < n_bs; ++n) ch.h_hat_sr(k, n) = detail::draw_cn(rng, v);
    }
    for (int k = 0; k < k_total; ++k) {
        const double v = est_var(config.strength_sd, config.err_var_sd[k], "sd");
        for (int n = 0; n < n_bs; ++n) ch.h_hat_sd(k, n) = detail::draw_cn(rng, v);
    }
    for (int k = 0; k < k_total; ++k)
        ch.h_hat_rd[k] = detail::draw_cn(rng, est_var(config.strength_rd, config.err_var_rd[k], "rd"));
    for (int k = 0; k < k_total; ++k)
        ch.h_hat_rr[k] = si_mean + detail::draw_cn(rng, est_var(si_scatter, config.err_var_rr[k], "rr"));
    return ch;
}

/// Maximum ratio transmission: each beamformer is the unit-norm conjugate of
/// its estimated channel.
inline Precoders mrt_precoders(const ChannelRealization& channels) {
    const Eigen::Index k_total = channels.num_subcarriers();
    const Eigen::Index n_bs = channels.num_antennas();
    Precoders p;
    p.v_sr.resize(n_bs, k_total);
    p.v_sd.resize(n_bs, k_total);
    for (Eigen::Index k = 0; k < k_total; ++k) {
        const double nrm_sr = channels.h_hat_sr.row(k).norm();
        const double nrm_sd = channels.h_hat_sd.row(k).norm();
        if (nrm_sr == 0.0 || nrm_sd == 0.0)
            throw std::invalid_argument("mrt_precoders: zero-norm channel vector");
        p.v_sr.col(k) = channels.h_hat_sr.row(k).adjoint() / nrm_sr;
        p.v_sd.col(k) = channels.h_hat_sd.row(k).adjoint() / nrm_sd;
    }
    return p;
}

}  // namespace fdrs

#endif  // FDRS_CHANNEL_HPP

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
//
// Interference bookkeeping. Every receive covariance in the link model is an
// affine function of the three power vectors,
//
//   sigma^k = alpha^k + sum_m (gamma_xx^{km} p_sr^m + ... ),
//
// and this header provides both routes to it: build_coefficients assembles
// the K x K leakage multipliers once per realization, while the
// covariance_* functions evaluate the covariance expressions term by term.
// The two paths stay independent so each can serve as an oracle for the
// other.

#ifndef FDRS_COEFFICIENTS_HPP
#define FDRS_COEFFICIENTS_HPP

#include <stdexcept>

#include <Eigen/Dense>

#include "fdrs/channel.hpp"
#include "fdrs/config.hpp"
#include "fdrs/power.hpp"

namespace fdrs {

/// Interference-leakage multipliers and noise floors of one realization.
/// Row index k is the observed subcarrier, column index m the transmitting
/// one; off-diagonal entries carry the inter-carrier leakage caused by
/// hardware distortion.
struct RateCoefficients {
    // Relay-side multipliers (denominator of the source->relay rate).
    Eigen::MatrixXd gamma_sr;
    Eigen::MatrixXd gamma_rd;
    Eigen::MatrixXd gamma_sd;
    // Destination-side multipliers (relay->destination rate, SIC phase 1).
    Eigen::MatrixXd gbar_sr;
    Eigen::MatrixXd gbar_rd;
    Eigen::MatrixXd gbar_sd;
    // Destination-side multiplier of the direct stream after SIC (phase 2).
    Eigen::MatrixXd gtilde_sd;

    Eigen::VectorXd alpha_r;  // noise floor at the relay
    Eigen::VectorXd alpha_d;  // noise floor at the destination

    Eigen::VectorXd gain_sr;  // |h_hat_sr^k v_sr^k|^2
    Eigen::VectorXd gain_sd;  // |h_hat_sd^k v_sd^k|^2
    Eigen::VectorXd gain_rd;  // |h_hat_rd^k|^2

    Eigen::Index num_subcarriers() const { return alpha_r.size(); }
};

namespace detail {

// h-row quadratic form through the normalized per-chain distortion diagonal:
// sum_i |h(k,i)|^2 theta_i |v(i,m)|^2.
inline Eigen::MatrixXd theta_quadratic(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& v,
                                       const Eigen::VectorXd& theta) {
    const Eigen::MatrixXd habs2 = h.cwiseAbs2();          // K x N
    const Eigen::MatrixXd vabs2 = v.cwiseAbs2();          // N x K
    return habs2 * theta.asDiagonal() * vabs2;            // K x K
}

// tr(Theta diag(v^m (v^m)^H)) per column m.
inline Eigen::VectorXd theta_trace(const Eigen::MatrixXcd& v, const Eigen::VectorXd& theta) {
    return v.cwiseAbs2().transpose() * theta;
}

// |h^m v^m|^2 for one subcarrier (plain product, no conjugation).
inline double link_gain(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& v, Eigen::Index m) {
    return std::norm((h.row(m) * v.col(m)).value());
}

inline Eigen::VectorXd beam_gain(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& v) {
    const Eigen::Index k_total = h.rows();
    Eigen::VectorXd g(k_total);
    for (Eigen::Index k = 0; k < k_total; ++k) g[k] = link_gain(h, v, k);
    return g;
}

inline void check_dims(const ChannelRealization& ch, const Precoders& pre, const SystemConfig& cfg) {
    const auto k = static_cast<Eigen::Index>(cfg.num_subcarriers);
    const auto n = static_cast<Eigen::Index>(cfg.num_bs_antennas);
    if (ch.h_hat_sr.rows() != k || ch.h_hat_sr.cols() != n || ch.h_hat_sd.rows() != k || ch.h_hat_sd.cols() != n ||
        ch.h_hat_rd.size() != k || ch.h_hat_rr.size() != k || pre.v_sr.rows() != n || pre.v_sr.cols() != k ||
        pre.v_sd.rows() != n || pre.v_sd.cols() != k)
        throw std::invalid_argument("coefficients: dimension mismatch between channels, precoders and config");
}

}  // namespace detail

/// Assemble all leakage multipliers, noise floors and beamforming gains of
/// one realization. Coefficients are power-free multipliers of the linear
/// interference model; Kronecker-delta terms appear only on the diagonal.
inline RateCoefficients build_coefficients(const ChannelRealization& channels, const Precoders& precoders,
                                           const SystemConfig& config) {
    detail::check_dims(channels, precoders, config);
    const Eigen::Index k_total = channels.num_subcarriers();
    const double kappa_r = config.kappa_r();
    const double beta_r = config.beta_r();
    const double beta_d = config.beta_d();
    const Eigen::VectorXd theta = config.theta_ts();

    RateCoefficients c;
    c.gain_sr = detail::beam_gain(channels.h_hat_sr, precoders.v_sr);
    c.gain_sd = detail::beam_gain(channels.h_hat_sd, precoders.v_sd);
    c.gain_rd = channels.h_hat_rd.cwiseAbs2();

    const Eigen::VectorXd cross_sr_sd = detail::beam_gain(channels.h_hat_sr, precoders.v_sd);  // |h_sr^m v_sd^m|^2
    const Eigen::VectorXd cross_sd_sr = detail::beam_gain(channels.h_hat_sd, precoders.v_sr);  // |h_sd^m v_sr^m|^2
    const Eigen::VectorXd si_abs2 = channels.h_hat_rr.cwiseAbs2();

    const Eigen::MatrixXd thq_sr_sr = detail::theta_quadratic(channels.h_hat_sr, precoders.v_sr, theta);
    const Eigen::MatrixXd thq_sr_sd = detail::theta_quadratic(channels.h_hat_sr, precoders.v_sd, theta);
    const Eigen::MatrixXd thq_sd_sr = detail::theta_quadratic(channels.h_hat_sd, precoders.v_sr, theta);
    const Eigen::MatrixXd thq_sd_sd = detail::theta_quadratic(channels.h_hat_sd, precoders.v_sd, theta);
    const Eigen::VectorXd thtr_sr = detail::theta_trace(precoders.v_sr, theta);
    const Eigen::VectorXd thtr_sd = detail::theta_trace(precoders.v_sd, theta);

    const auto& e_sr = channels.err_var_sr;
    const auto& e_rd = channels.err_var_rd;
    const auto& e_sd = channels.err_var_sd;
    const auto& e_rr = channels.err_var_rr;

    c.gamma_sr.resize(k_total, k_total);
    c.gamma_rd.resize(k_total, k_total);
    c.gamma_sd.resize(k_total, k_total);
    c.gbar_sr.resize(k_total, k_total);
    c.gbar_rd.resize(k_total, k_total);
    c.gbar_sd.resize(k_total, k_total);
    for (Eigen::Index k = 0; k < k_total; ++k) {
        for (Eigen::Index m = 0; m < k_total; ++m) {
            const double delta = (k == m) ? 1.0 : 0.0;

            c.gamma_sr(k, m) = delta * e_sr[m] + thq_sr_sr(k, m) + e_sr[k] * thtr_sr[m]
                               + beta_r * (c.gain_sr[m] + e_sr[m]);
            c.gamma_rd(k, m) = delta * e_rr[m] + kappa_r * (si_abs2[k] + e_rr[k])
                               + beta_r * (si_abs2[m] + e_rr[m]);
            c.gamma_sd(k, m) = delta * (cross_sr_sd[m] + e_sr[m]) + thq_sr_sd(k, m) + e_sr[k] * thtr_sd[m]
                               + beta_r * (cross_sr_sd[m] + e_sr[m]);

            c.gbar_sr(k, m) = delta * (cross_sd_sr[m] + e_sd[m]) + thq_sd_sr(k, m) + e_sd[k] * thtr_sr[m]
                              + beta_d * (cross_sd_sr[m] + e_sd[m]);
            c.gbar_rd(k, m) = delta * e_rd[m] + kappa_r * (c.gain_rd[k] + e_rd[k])
                              + beta_d * (c.gain_rd[m] + e_rd[m]);
            c.gbar_sd(k, m) = delta * (c.gain_sd[m] + e_sd[m]) + thq_sd_sd(k, m) + e_sd[k] * thtr_sd[m]
                              + beta_d * (c.gain_sd[m] + e_sd[m]);
        }
    }
    // After SIC the destination has removed its own desired stream.
    c.gtilde_sd = c.gbar_sd;
    c.gtilde_sd.diagonal() -= c.gain_sd;

    c.alpha_r = config.noise_var_relay.array() + beta_r * config.noise_var_relay.sum();
    c.alpha_d = config.noise_var_dest.array() + beta_d * config.noise_var_dest.sum();
    return c;
}

/// Interference-plus-noise covariance at the relay, evaluated term by term
/// from channels and precoders. Independent of build_coefficients.
inline Eigen::VectorXd covariance_relay(const ChannelRealization& channels, const Precoders& precoders,
                                        const PowerAllocation& powers, const SystemConfig& config) {
    detail::check_dims(channels, precoders, config);
    const Eigen::Index k_total = channels.num_subcarriers();
    const Eigen::Index n_bs = channels.num_antennas();
    const double kappa_r = config.kappa_r();
    const double beta_r = config.beta_r();
    const Eigen::VectorXd theta = config.theta_ts();
    const double sum_prd = powers.p_rd.sum();

    // Per-chain transmitted power of the intended BS signal, summed over
    // subcarriers: diag(v_sr p_sr v_sr^H + v_sd p_sd v_sd^H).
    Eigen::VectorXd chain_power = Eigen::VectorXd::Zero(n_bs);
    for (Eigen::Index m = 0; m < k_total; ++m)
        chain_power += precoders.v_sr.col(m).cwiseAbs2() * powers.p_sr[m] +
                       precoders.v_sd.col(m).cwiseAbs2() * powers.p_sd[m];
    const double theta_trace_term = theta.dot(chain_power);

    double beta_block = 0.0;
    for (Eigen::Index m = 0; m < k_total; ++m) {
        beta_block += detail::link_gain(channels.h_hat_sr, precoders.v_sr, m) * powers.p_sr[m];
        beta_block += detail::link_gain(channels.h_hat_sr, precoders.v_sd, m) * powers.p_sd[m];
        beta_block += channels.err_var_sr[m] * (powers.p_sr[m] * precoders.v_sr.col(m).squaredNorm() +
                                                powers.p_sd[m] * precoders.v_sd.col(m).squaredNorm());
        beta_block += std::norm(channels.h_hat_rr[m]) * powers.p_rd[m];
        beta_block += channels.err_var_rr[m] * powers.p_rd[m];
        beta_block += config.noise_var_relay[m];
    }

    Eigen::VectorXd sigma(k_total);
    for (Eigen::Index k = 0; k < k_total; ++k) {
        double s = 0.0;
        s += detail::link_gain(channels.h_hat_sr, precoders.v_sd, k) * powers.p_sd[k];
        s += channels.err_var_sr[k] * (powers.p_sd[k] + powers.p_sr[k]);
        s += kappa_r * std::norm(channels.h_hat_rr[k]) * sum_prd;
        s += channels.err_var_rr[k] * (kappa_r * sum_prd + powers.p_rd[k]);
        s += channels.h_hat_sr.row(k).cwiseAbs2().dot((theta.array() * chain_power.array()).matrix());
        s += channels.err_var_sr[k] * theta_trace_term;
        s += beta_r * beta_block;
        s += config.noise_var_relay[k];
        sigma[k] = s;
    }
    return sigma;
}

/// Interference-plus-noise covariance at the destination while the relay
/// stream is being decoded (both direct streams count as interference).
inline Eigen::VectorXd covariance_dest_phase1(const ChannelRealization& channels, const Precoders& precoders,
                                              const PowerAllocation& powers, const SystemConfig& config) {
    detail::check_dims(channels, precoders, config);
    const Eigen::Index k_total = channels.num_subcarriers();
    const Eigen::Index n_bs = channels.num_antennas();
    const double kappa_r = config.kappa_r();
    const double beta_d = config.beta_d();
    const Eigen::VectorXd theta = config.theta_ts();
    const double sum_prd = powers.p_rd.sum();

    Eigen::VectorXd chain_power = Eigen::VectorXd::Zero(n_bs);
    for (Eigen::Index m = 0; m < k_total; ++m)
        chain_power += precoders.v_sr.col(m).cwiseAbs2() * powers.p_sr[m] +
                       precoders.v_sd.col(m).cwiseAbs2() * powers.p_sd[m];
    const double theta_trace_term = theta.dot(chain_power);

    double beta_block = 0.0;
    for (Eigen::Index m = 0; m < k_total; ++m) {
        beta_block += detail::link_gain(channels.h_hat_sd, precoders.v_sr, m) * powers.p_sr[m];
        beta_block += detail::link_gain(channels.h_hat_sd, precoders.v_sd, m) * powers.p_sd[m];
        beta_block += channels.err_var_sd[m] * (powers.p_sr[m] * precoders.v_sr.col(m).squaredNorm() +
                                                powers.p_sd[m] * precoders.v_sd.col(m).squaredNorm());
        beta_block += std::norm(channels.h_hat_rd[m]) * powers.p_rd[m];
        beta_block += channels.err_var_rd[m] * powers.p_rd[m];
        beta_block += config.noise_var_dest[m];
    }

    Eigen::VectorXd sigma(k_total);
    for (Eigen::Index k = 0; k < k_total; ++k) {
        double s = 0.0;
        s += detail::link_gain(channels.h_hat_sd, precoders.v_sr, k) * powers.p_sr[k];
        s += detail::link_gain(channels.h_hat_sd, precoders.v_sd, k) * powers.p_sd[k];
        s += channels.err_var_sd[k] * (powers.p_sr[k] * precoders.v_sr.col(k).squaredNorm() +
                                       powers.p_sd[k] * precoders.v_sd.col(k).squaredNorm());
        s += kappa_r * std::norm(channels.h_hat_rd[k]) * sum_prd;
        s += channels.err_var_rd[k] * (kappa_r * sum_prd + powers.p_rd[k]);
        s += channels.h_hat_sd.row(k).cwiseAbs2().dot((theta.array() * chain_power.array()).matrix());
        s += channels.err_var_sd[k] * theta_trace_term;
        s += beta_d * beta_block;
        s += config.noise_var_dest[k];
        sigma[k] = s;
    }
    return sigma;
}

/// Phase-2 covariance: phase 1 minus the now-desired direct stream power.
inline Eigen::VectorXd covariance_dest_phase2(const ChannelRealization& channels, const Precoders& precoders,
                                              const PowerAllocation& powers, const SystemConfig& config) {
    Eigen::VectorXd sigma = covariance_dest_phase1(channels, precoders, powers, config);
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        const double own = detail::link_gain(channels.h_hat_sd, precoders.v_sd, k) * powers.p_sd[k];
        const double rest = sigma[k] - own;
        if (rest < -1e-12 * std::max(1.0, sigma[k]))
            throw std::logic_error("covariance_dest_phase2: negative covariance");
        sigma[k] = std::max(rest, 0.0);
    }
    return sigma;
}

}  // namespace fdrs

#endif  // FDRS_COEFFICIENTS_HPP

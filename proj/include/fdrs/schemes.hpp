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
// Comparison schemes. All of them reuse the SIA machinery with frozen power
// blocks or swapped interference maps, so one verified solver serves every
// curve:
//   RS     full-duplex rate splitting, distortion-aware (the reference)
//   RS_ND  optimized under a zero-distortion belief, evaluated under truth
//   ODL    direct link only (relay powers frozen at zero)
//   ORL    relay link only (direct power frozen at zero)
//   HD     two-slot half-duplex relaying, pre-log 1/2, no self-interference

#ifndef FDRS_SCHEMES_HPP
#define FDRS_SCHEMES_HPP

#include <stdexcept>
#include <string>

#include "fdrs/coefficients.hpp"
#include "fdrs/config.hpp"
#include "fdrs/rates.hpp"
#include "fdrs/solver.hpp"

namespace fdrs {

enum class SchemeId { RS, RS_ND, ODL, ORL, HD };

inline const char* to_string(SchemeId id) {
    switch (id) {
        case SchemeId::RS: return "RS";
        case SchemeId::RS_ND: return "RS_ND";
        case SchemeId::ODL: return "ODL";
        case SchemeId::ORL: return "ORL";
        default: return "HD";
    }
}

inline SchemeId parse_scheme(const std::string& token) {
    if (token == "RS") return SchemeId::RS;
    if (token == "RS_ND") return SchemeId::RS_ND;
    if (token == "ODL") return SchemeId::ODL;
    if (token == "ORL") return SchemeId::ORL;
    if (token == "HD") return SchemeId::HD;
    throw std::invalid_argument("unknown scheme token: " + token);
}

struct SchemeResult {
    PowerAllocation allocation;
    RateReport report;
    SolveTrace trace;
};

/// The same setup with the hardware-distortion knobs zeroed; estimation
/// error and noise stay untouched.
inline SystemConfig zero_distortion(const SystemConfig& config) {
    SystemConfig c = config;
    c.kappa_relay = 0.0;
    c.beta_relay = 0.0;
    c.beta_dest = 0.0;
    c.theta_tx_source.setZero();
    return c;
}

namespace detail {

// Dead blocks (zero budget, or frozen by the scheme) take whole constraint
// families with them; with nothing left to optimize the zero allocation is
// returned as-is.
inline SchemeResult run_problem(SurrogateProblem pr, const SolverOptions& opts) {
    const Eigen::Index k = pr.num_subcarriers();
    const double min_budget = 1e3 * opts.power_floor * static_cast<double>(k);
    if (pr.budget_source < min_budget) pr.free_sr = pr.free_sd = false;
    if (pr.budget_relay < min_budget) pr.free_rd = false;
    if (!pr.free_sr || !pr.free_rd) pr.relay_path = false;
    if (!pr.free_sd) pr.direct_objective = false;

    SchemeResult out;
    if ((!pr.relay_path && !pr.direct_objective) || (!pr.free_sr && !pr.free_sd && !pr.free_rd)) {
        out.allocation = PowerAllocation::zeros(k);
        out.report = problem_report(pr, out.allocation);
        out.trace.termination = Termination::converged;
        out.trace.final_true_objective = out.report.r_total;
        return out;
    }
    auto [alloc, trace] = sia_solve(pr, opts);
    out.allocation = std::move(alloc);
    out.trace = std::move(trace);
    out.report = problem_report(pr, out.allocation);
    return out;
}

}  // namespace detail

/// Optimize against a zero-distortion belief, then report the achieved rates
/// under the true coefficients (belief-mismatch evaluation).
inline SchemeResult solve_rs_nd(const RateCoefficients& coeffs_true, const RateCoefficients& coeffs_zero_distortion,
                                const SystemConfig& config, const SolverOptions& opts) {
    SchemeResult r = detail::run_problem(rs_problem(coeffs_zero_distortion, config), opts);
    r.report = total_rate(coeffs_true, r.allocation, config);
    return r;
}

/// Only the direct link: relay powers frozen at zero, objective sum_k R_sd^k.
inline SchemeResult solve_odl(const RateCoefficients& coeffs, const SystemConfig& config, const SolverOptions& opts) {
    SurrogateProblem pr = rs_problem(coeffs, config);
    pr.free_sr = false;
    pr.free_rd = false;
    pr.relay_path = false;
    return detail::run_problem(pr, opts);
}

/// Only the relay link: direct power frozen at zero, objective sum_k t_k.
inline SchemeResult solve_orl(const RateCoefficients& coeffs, const SystemConfig& config, const SolverOptions& opts) {
    SurrogateProblem pr = rs_problem(coeffs, config);
    pr.free_sd = false;
    pr.direct_objective = false;
    return detail::run_problem(pr, opts);
}

/// Distortion-aware rate splitting, the reference scheme. The feasible set
/// contains those of the restricted schemes, so their solutions double as
/// restart anchors: the returned allocation never scores below either,
/// which keeps the containment property independent of which stationary
/// point the uniform start reaches.
inline SchemeResult solve_rs(const RateCoefficients& coeffs, const SystemConfig& config, const SolverOptions& opts) {
    const SurrogateProblem pr = rs_problem(coeffs, config);
    SchemeResult res = detail::run_problem(pr, opts);
    for (const SchemeResult& restricted : {solve_odl(coeffs, config, opts), solve_orl(coeffs, config, opts)}) {
        if (restricted.report.r_total <= res.report.r_total) continue;
        auto [alloc, trace] = sia_solve(pr, opts, &restricted.allocation);
        SchemeResult restart;
        restart.allocation = std::move(alloc);
        restart.trace = std::move(trace);
        restart.report = problem_report(pr, restart.allocation);
        if (restart.report.r_total > res.report.r_total) res = std::move(restart);
        if (restricted.report.r_total > res.report.r_total) {
            // the restricted point itself is feasible here; never report less
            res.allocation = restricted.allocation;
            const Eigen::VectorXd rs_rate = link_rate(pr.sr, res.allocation, pr.prefactor);
            const Eigen::VectorXd rr_rate = link_rate(pr.rd, res.allocation, pr.prefactor);
            res.allocation.t = rs_rate.cwiseMin(rr_rate);
            res.report = problem_report(pr, res.allocation);
        }
    }
    return res;
}

/// Coefficients of the half-duplex baseline: the relay listens in slot 1
/// (no self-interference block) and transmits in slot 2, and the relay
/// transmit distortion coupling is absent, so nothing here depends on the
/// self-interference channel or on kappa.
inline RateCoefficients hd_coefficients(const ChannelRealization& channels, const Precoders& precoders,
                                        const SystemConfig& config) {
    RateCoefficients c = build_coefficients(channels, precoders, config);
    c.gamma_rd.setZero();
    const double beta_d = config.beta_d();
    const Eigen::Index k_total = c.num_subcarriers();
    for (Eigen::Index k = 0; k < k_total; ++k)
        for (Eigen::Index m = 0; m < k_total; ++m)
            c.gbar_rd(k, m) = (k == m ? channels.err_var_rd[m] : 0.0) +
                              beta_d * (c.gain_rd[m] + channels.err_var_rd[m]);
    return c;
}

/// Two-slot half-duplex problem on top of hd_coefficients: slot 1 carries
/// both source streams (no relay signal at either receiver), slot 2 carries
/// the relay stream alone. Equal slots give the 1/2 pre-log.
inline SurrogateProblem hd_problem(const RateCoefficients& coeffs_hd, const SystemConfig& config) {
    const Eigen::Index k = coeffs_hd.num_subcarriers();
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(k, k);
    SurrogateProblem pr;
    pr.sr = {coeffs_hd.gamma_sr, zero, coeffs_hd.gamma_sd, coeffs_hd.alpha_r, coeffs_hd.gain_sr, PowerSlot::sr};
    pr.rd = {zero, coeffs_hd.gbar_rd, zero, coeffs_hd.alpha_d, coeffs_hd.gain_rd, PowerSlot::rd};
    pr.sd = {coeffs_hd.gbar_sr, zero, coeffs_hd.gtilde_sd, coeffs_hd.alpha_d, coeffs_hd.gain_sd, PowerSlot::sd};
    pr.budget_source = config.power_source;
    pr.budget_relay = config.power_relay;
    pr.prefactor = 0.5 * config.rate_prefactor;
    return pr;
}

inline SchemeResult solve_hd(const RateCoefficients& coeffs_hd, const SystemConfig& config,
                             const SolverOptions& opts) {
    return detail::run_problem(hd_problem(coeffs_hd, config), opts);
}

/// Build whatever the scheme needs from one realization and solve it.
inline SchemeResult solve_scheme(SchemeId id, const ChannelRealization& channels, const Precoders& precoders,
                                 const SystemConfig& config, const SolverOptions& opts) {
    switch (id) {
        case SchemeId::RS:
            return solve_rs(build_coefficients(channels, precoders, config), config, opts);
        case SchemeId::RS_ND: {
            const RateCoefficients truth = build_coefficients(channels, precoders, config);
            const RateCoefficients belief = build_coefficients(channels, precoders, zero_distortion(config));
            return solve_rs_nd(truth, belief, config, opts);
        }
        case SchemeId::ODL:
            return solve_odl(build_coefficients(channels, precoders, config), config, opts);
        case SchemeId::ORL:
            return solve_orl(build_coefficients(channels, precoders, config), config, opts);
        default:
            return solve_hd(hd_coefficients(channels, precoders, config), config, opts);
    }
}

}  // namespace fdrs

#endif  // FDRS_SCHEMES_HPP

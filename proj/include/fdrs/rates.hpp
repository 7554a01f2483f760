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

#ifndef FDRS_RATES_HPP
#define FDRS_RATES_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "fdrs/coefficients.hpp"
#include "fdrs/config.hpp"
#include "fdrs/power.hpp"

namespace fdrs {

/// Which power vector carries the desired signal of a link.
enum class PowerSlot { sr, sd, rd };

/// One link's SINR description: per-subcarrier signal gain plus the affine
/// interference map alpha + G_sr p_sr + G_rd p_rd + G_sd p_sd. Rates,
/// Taylor bounds and the solver all run on this shape, which lets the
/// benchmark schemes swap out individual interference blocks.
struct LinkModel {
    Eigen::MatrixXd g_sr;
    Eigen::MatrixXd g_rd;
    Eigen::MatrixXd g_sd;
    Eigen::VectorXd alpha;
    Eigen::VectorXd gain;
    PowerSlot own = PowerSlot::sr;

    Eigen::Index num_subcarriers() const { return alpha.size(); }

    const Eigen::VectorXd& own_power(const PowerAllocation& p) const {
        switch (own) {
            case PowerSlot::sr: return p.p_sr;
            case PowerSlot::sd: return p.p_sd;
            default: return p.p_rd;
        }
    }

    /// alpha + G_sr p_sr + G_rd p_rd + G_sd p_sd.
    Eigen::VectorXd interference(const PowerAllocation& p) const {
        return alpha + g_sr * p.p_sr + g_rd * p.p_rd + g_sd * p.p_sd;
    }
};

inline LinkModel link_model_sr(const RateCoefficients& c) {
    return {c.gamma_sr, c.gamma_rd, c.gamma_sd, c.alpha_r, c.gain_sr, PowerSlot::sr};
}
inline LinkModel link_model_rd(const RateCoefficients& c) {
    return {c.gbar_sr, c.gbar_rd, c.gbar_sd, c.alpha_d, c.gain_rd, PowerSlot::rd};
}
inline LinkModel link_model_sd(const RateCoefficients& c) {
    return {c.gbar_sr, c.gbar_rd, c.gtilde_sd, c.alpha_d, c.gain_sd, PowerSlot::sd};
}

/// prefactor * log2(1 + gain p / interference), per subcarrier. Natural log
/// internally, converted at the boundary.
inline Eigen::VectorXd link_rate(const LinkModel& model, const PowerAllocation& powers, double prefactor) {
    const Eigen::VectorXd sigma = model.interference(powers);
    const Eigen::VectorXd& own = model.own_power(powers);
    const double c0 = prefactor / std::log(2.0);
    Eigen::VectorXd r(model.num_subcarriers());
    for (Eigen::Index k = 0; k < r.size(); ++k) r[k] = c0 * std::log1p(model.gain[k] * own[k] / sigma[k]);
    return r;
}

/// Concave lower bound of link_rate, tight at the anchor allocation with a
/// shared slope there. The convex -log(interference) part is linearized at
/// the anchor; everything else is kept exact.
inline Eigen::VectorXd link_taylor_bound(const LinkModel& model, const PowerAllocation& powers,
                                         const PowerAllocation& anchor, double prefactor) {
    const Eigen::VectorXd sigma0 = model.interference(anchor);
    if ((sigma0.array() <= 0.0).any())
        throw std::invalid_argument("link_taylor_bound: anchor with nonpositive interference denominator");
    const Eigen::VectorXd sigma = model.interference(powers);
    const Eigen::VectorXd& own = model.own_power(powers);
    const double c0 = prefactor / std::log(2.0);
    Eigen::VectorXd r(model.num_subcarriers());
    for (Eigen::Index k = 0; k < r.size(); ++k) {
        const double u = sigma[k] + model.gain[k] * own[k];
        r[k] = c0 * (std::log(u) - std::log(sigma0[k]) - (sigma[k] - sigma0[k]) / sigma0[k]);
    }
    return r;
}

inline Eigen::VectorXd rate_sr(const RateCoefficients& c, const PowerAllocation& p, const SystemConfig& cfg) {
    return link_rate(link_model_sr(c), p, cfg.rate_prefactor);
}
inline Eigen::VectorXd rate_rd(const RateCoefficients& c, const PowerAllocation& p, const SystemConfig& cfg) {
    return link_rate(link_model_rd(c), p, cfg.rate_prefactor);
}
inline Eigen::VectorXd rate_sd(const RateCoefficients& c, const PowerAllocation& p, const SystemConfig& cfg) {
    return link_rate(link_model_sd(c), p, cfg.rate_prefactor);
}

inline Eigen::VectorXd taylor_bound_sr(const RateCoefficients& c, const PowerAllocation& p,
                                       const PowerAllocation& anchor, const SystemConfig& cfg) {
    return link_taylor_bound(link_model_sr(c), p, anchor, cfg.rate_prefactor);
}
inline Eigen::VectorXd taylor_bound_rd(const RateCoefficients& c, const PowerAllocation& p,
                                       const PowerAllocation& anchor, const SystemConfig& cfg) {
    return link_taylor_bound(link_model_rd(c), p, anchor, cfg.rate_prefactor);
}
inline Eigen::VectorXd taylor_bound_sd(const RateCoefficients& c, const PowerAllocation& p,
                                       const PowerAllocation& anchor, const SystemConfig& cfg) {
    return link_taylor_bound(link_model_sd(c), p, anchor, cfg.rate_prefactor);
}

/// Per-subcarrier rates of all three links plus the system sum rate
/// sum_k [R_sd^k + min(R_sr^k, R_rd^k)].
struct RateReport {
    Eigen::VectorXd r_sr;
    Eigen::VectorXd r_rd;
    Eigen::VectorXd r_sd;
    double r_total = 0.0;
};

inline RateReport total_rate(const RateCoefficients& c, const PowerAllocation& p, const SystemConfig& cfg) {
    RateReport rep;
    rep.r_sr = rate_sr(c, p, cfg);
    rep.r_rd = rate_rd(c, p, cfg);
    rep.r_sd = rate_sd(c, p, cfg);
    rep.r_total = 0.0;
    for (Eigen::Index k = 0; k < rep.r_sr.size(); ++k)
        rep.r_total += rep.r_sd[k] + std::min(rep.r_sr[k], rep.r_rd[k]);
    return rep;
}

}  // namespace fdrs

#endif  // FDRS_RATES_HPP

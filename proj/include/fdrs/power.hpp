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

#ifndef FDRS_POWER_HPP
#define FDRS_POWER_HPP

#include <Eigen/Dense>

#include "fdrs/config.hpp"

namespace fdrs {

/// Per-subcarrier transmit powers plus the epigraph rates of the relay path.
/// t[k] lower-bounds both hop rates of subcarrier k, which linearizes the
/// min{R_sr, R_rd} term of the sum-rate objective.
struct PowerAllocation {
    Eigen::VectorXd p_sr;
    Eigen::VectorXd p_sd;
    Eigen::VectorXd p_rd;
    Eigen::VectorXd t;

    static PowerAllocation zeros(Eigen::Index k) {
        PowerAllocation p;
        p.p_sr = Eigen::VectorXd::Zero(k);
        p.p_sd = Eigen::VectorXd::Zero(k);
        p.p_rd = Eigen::VectorXd::Zero(k);
        p.t = Eigen::VectorXd::Zero(k);
        return p;
    }

    /// Equal split of both budgets: p_sr = p_sd = P_s/(2K), p_rd = P_r/K.
    static PowerAllocation uniform(const SystemConfig& config) {
        const auto k = static_cast<Eigen::Index>(config.num_subcarriers);
        PowerAllocation p = zeros(k);
        p.p_sr.setConstant(config.power_source / (2.0 * static_cast<double>(k)));
        p.p_sd.setConstant(config.power_source / (2.0 * static_cast<double>(k)));
        p.p_rd.setConstant(config.power_relay / static_cast<double>(k));
        return p;
    }

    bool feasible(const SystemConfig& config, double tol = 1e-9) const {
        if ((p_sr.array() < -tol).any() || (p_sd.array() < -tol).any() || (p_rd.array() < -tol).any()) return false;
        if (p_rd.sum() > config.power_relay + tol) return false;
        if (p_sr.sum() + p_sd.sum() > config.power_source + tol) return false;
        return true;
    }
};

}  // namespace fdrs

#endif  // FDRS_POWER_HPP

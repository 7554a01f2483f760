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
// Exhaustive grid-search oracle for small instances. Without inter-carrier
// leakage all coefficient matrices are diagonal, the sum rate separates per
// subcarrier, and the global maximum over the product grid can be taken
// exactly with per-subcarrier tables and a budget-split sweep. A local
// exhaustive box refinement around the grid argmax then removes the
// discretization error, which is dominated by the kink of the per-subcarrier
// min(). The oracle never touches the solver; it only evaluates rates.
// Supports K = 1 or 2; used to cross-check the SIA solver end to end.

#ifndef FDRS_GRIDSEARCH_HPP
#define FDRS_GRIDSEARCH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fdrs/coefficients.hpp"
#include "fdrs/config.hpp"
#include "fdrs/power.hpp"

namespace fdrs {

struct GridSearchResult {
    double best_objective = 0.0;
    PowerAllocation best;
};

namespace detail {

// Per-subcarrier sum-rate term from diagonal coefficients.
struct ScalarCell {
    double a_sr, a_rd, a_sd;
    double gsr_sr, gsr_rd, gsr_sd;  // diagonal leakage into the sr link
    double grd_sr, grd_rd, grd_sd;  // ... into the rd link
    double gsd_sr, gsd_rd, gsd_sd;  // ... into the sd link
    double gain_sr, gain_rd, gain_sd;
    double c0;

    double eval(double psr, double psd, double prd) const {
        const double i_sr = a_sr + gsr_sr * psr + gsr_rd * prd + gsr_sd * psd;
        const double i_rd = a_rd + grd_sr * psr + grd_rd * prd + grd_sd * psd;
        const double i_sd = a_sd + gsd_sr * psr + gsd_rd * prd + gsd_sd * psd;
        const double r_sr = c0 * std::log1p(gain_sr * psr / i_sr);
        const double r_rd = c0 * std::log1p(gain_rd * prd / i_rd);
        const double r_sd = c0 * std::log1p(gain_sd * psd / i_sd);
        return r_sd + std::min(r_sr, r_rd);
    }
};

inline void require_diagonal(const Eigen::MatrixXd& m, const char* name) {
    Eigen::MatrixXd off = m;
    off.diagonal().setZero();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (off.cwiseAbs().maxCoeff() > 1e-14 * scale)
        throw std::invalid_argument(std::string("grid_search_rs: inter-carrier coupling in ") + name +
                                    "; the oracle needs impairment-free instances");
}

inline ScalarCell make_cell(const RateCoefficients& c, const SystemConfig& cfg, Eigen::Index k) {
    ScalarCell s;
    s.a_sr = c.alpha_r[k];
    s.a_rd = c.alpha_d[k];
    s.a_sd = c.alpha_d[k];
    s.gsr_sr = c.gamma_sr(k, k);
    s.gsr_rd = c.gamma_rd(k, k);
    s.gsr_sd = c.gamma_sd(k, k);
    s.grd_sr = c.gbar_sr(k, k);
    s.grd_rd = c.gbar_rd(k, k);
    s.grd_sd = c.gbar_sd(k, k);
    s.gsd_sr = c.gbar_sr(k, k);
    s.gsd_rd = c.gbar_rd(k, k);
    s.gsd_sd = c.gtilde_sd(k, k);
    s.gain_sr = c.gain_sr[k];
    s.gain_rd = c.gain_rd[k];
    s.gain_sd = c.gain_sd[k];
    s.c0 = cfg.rate_prefactor / std::log(2.0);
    return s;
}

// Shrinking exhaustive box around the incumbent; pure evaluation, rejects
// infeasible points.
inline void refine_box(const std::vector<ScalarCell>& cells, const SystemConfig& cfg, PowerAllocation& p,
                       double& value, double radius_src, double radius_rel) {
    const auto k_total = static_cast<Eigen::Index>(cells.size());
    const double offsets[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    double rs = radius_src, rr = radius_rel;
    std::vector<int> idx(3 * k_total, 0);
    for (int round = 0; round < 16; ++round) {
        PowerAllocation best = p;
        double best_val = value;
        std::fill(idx.begin(), idx.end(), 0);
        for (;;) {
            PowerAllocation cand = p;
            for (Eigen::Index k = 0; k < k_total; ++k) {
                cand.p_sr[k] = std::max(0.0, p.p_sr[k] + offsets[idx[3 * k]] * rs);
                cand.p_sd[k] = std::max(0.0, p.p_sd[k] + offsets[idx[3 * k + 1]] * rs);
                cand.p_rd[k] = std::max(0.0, p.p_rd[k] + offsets[idx[3 * k + 2]] * rr);
            }
            if (cand.p_sr.sum() + cand.p_sd.sum() <= cfg.power_source && cand.p_rd.sum() <= cfg.power_relay) {
                double v = 0.0;
                for (Eigen::Index k = 0; k < k_total; ++k)
                    v += cells[k].eval(cand.p_sr[k], cand.p_sd[k], cand.p_rd[k]);
                if (v > best_val) {
                    best_val = v;
                    best = cand;
                }
            }
            // odometer over 5^(3K) offset combinations
            std::size_t d = 0;
            while (d < idx.size() && ++idx[d] == 5) idx[d++] = 0;
            if (d == idx.size()) break;
        }
        p = best;
        value = best_val;
        rs *= 0.35;
        rr *= 0.35;
    }
}

}  // namespace detail

/// Exhaustive search over {0, h, 2h, ...} grids with n points per axis for
/// every free power variable, honoring both budgets, followed by the local
/// box refinement. K must be 1 or 2 and the coefficients diagonal.
inline GridSearchResult grid_search_rs(const RateCoefficients& coeffs, const SystemConfig& config,
                                       int points_per_axis = 200) {
    const Eigen::Index k_total = coeffs.num_subcarriers();
    if (k_total != 1 && k_total != 2) throw std::invalid_argument("grid_search_rs: only K = 1 or 2 supported");
    if (points_per_axis < 2) throw std::invalid_argument("grid_search_rs: need at least 2 grid points");
    detail::require_diagonal(coeffs.gamma_sr, "gamma_sr");
    detail::require_diagonal(coeffs.gamma_rd, "gamma_rd");
    detail::require_diagonal(coeffs.gamma_sd, "gamma_sd");
    detail::require_diagonal(coeffs.gbar_sr, "gbar_sr");
    detail::require_diagonal(coeffs.gbar_rd, "gbar_rd");
    detail::require_diagonal(coeffs.gbar_sd, "gbar_sd");
    detail::require_diagonal(coeffs.gtilde_sd, "gtilde_sd");

    const int n = points_per_axis;  // grid steps; n+1 points per axis
    const double hs = config.power_source / n;
    const double hr = config.power_relay / n;

    std::vector<detail::ScalarCell> cells;
    for (Eigen::Index k = 0; k < k_total; ++k) cells.push_back(detail::make_cell(coeffs, config, k));

    GridSearchResult out;
    if (k_total == 1) {
        const detail::ScalarCell& cell = cells[0];
        double best = -std::numeric_limits<double>::infinity();
        int bi = 0, bj = 0, bl = 0;
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; i + j <= n; ++j) {
                for (int l = 0; l <= n; ++l) {
                    const double v = cell.eval(i * hs, j * hs, l * hr);
                    if (v > best) { best = v; bi = i; bj = j; bl = l; }
                }
            }
        }
        out.best = PowerAllocation::zeros(1);
        out.best.p_sr[0] = bi * hs;
        out.best.p_sd[0] = bj * hs;
        out.best.p_rd[0] = bl * hr;
        out.best_objective = best;
        detail::refine_box(cells, config, out.best, out.best_objective, hs, hr);
        return out;
    }

    // K = 2: per-subcarrier tables T_k[x][y] = max over p_sr + p_sd <= x*hs,
    // p_rd <= y*hr, with the achieving indices, then an exact sweep over the
    // budget split.
    struct Entry {
        double v;
        int i, j, l;  // p_sr, p_sd, p_rd indices
    };
    std::vector<std::vector<Entry>> table(2);
    for (Eigen::Index k = 0; k < 2; ++k) {
        const detail::ScalarCell& cell = cells[k];
        auto& t = table[k];
        t.assign(static_cast<std::size_t>(n + 1) * (n + 1), Entry{-std::numeric_limits<double>::infinity(), 0, 0, 0});
        std::vector<Entry> max_at_sum(n + 1);
        for (int y = 0; y <= n; ++y) {
            const double prd = y * hr;
            std::fill(max_at_sum.begin(), max_at_sum.end(),
                      Entry{-std::numeric_limits<double>::infinity(), 0, 0, y});
            for (int i = 0; i <= n; ++i)
                for (int j = 0; i + j <= n; ++j) {
                    const double v = cell.eval(i * hs, j * hs, prd);
                    if (v > max_at_sum[i + j].v) max_at_sum[i + j] = Entry{v, i, j, y};
                }
            Entry run{-std::numeric_limits<double>::infinity(), 0, 0, y};
            for (int x = 0; x <= n; ++x) {  // prefix max: budget x admits any smaller spend
                if (max_at_sum[x].v > run.v) run = max_at_sum[x];
                t[static_cast<std::size_t>(x) * (n + 1) + y] = run;
            }
        }
        for (int x = 0; x <= n; ++x) {  // same in the relay direction
            Entry run{-std::numeric_limits<double>::infinity(), 0, 0, 0};
            for (int y = 0; y <= n; ++y) {
                Entry& e = t[static_cast<std::size_t>(x) * (n + 1) + y];
                if (e.v > run.v) run = e;
                e = run;
            }
        }
    }
    double best = -std::numeric_limits<double>::infinity();
    int bx = 0, by = 0;
    for (int x = 0; x <= n; ++x)
        for (int y = 0; y <= n; ++y) {
            const double v = table[0][static_cast<std::size_t>(x) * (n + 1) + y].v +
                             table[1][static_cast<std::size_t>(n - x) * (n + 1) + (n - y)].v;
            if (v > best) { best = v; bx = x; by = y; }
        }
    const Entry e0 = table[0][static_cast<std::size_t>(bx) * (n + 1) + by];
    const Entry e1 = table[1][static_cast<std::size_t>(n - bx) * (n + 1) + (n - by)];
    out.best = PowerAllocation::zeros(2);
    out.best.p_sr << e0.i * hs, e1.i * hs;
    out.best.p_sd << e0.j * hs, e1.j * hs;
    out.best.p_rd << e0.l * hr, e1.l * hr;
    out.best_objective = best;
    detail::refine_box(cells, config, out.best, out.best_objective, hs, hr);
    return out;
}

}  // namespace fdrs

#endif  // FDRS_GRIDSEARCH_HPP

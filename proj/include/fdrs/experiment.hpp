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
// Monte-Carlo sweep runner. Realization i draws its channels from
// base_seed + i, and that seed is shared across every scheme and axis value,
// so all curves are paired-comparison over identical fading. Failed solves
// are excluded from the averages and counted.

#ifndef FDRS_EXPERIMENT_HPP
#define FDRS_EXPERIMENT_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fdrs/channel.hpp"
#include "fdrs/config.hpp"
#include "fdrs/schemes.hpp"

namespace fdrs {

enum class SweepAxis { noise, strength_sd, distortion, power };

inline const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::noise: return "noise";
        case SweepAxis::strength_sd: return "strength_sd";
        case SweepAxis::distortion: return "distortion";
        default: return "power";
    }
}

inline SweepAxis parse_axis(const std::string& token) {
    if (token == "noise") return SweepAxis::noise;
    if (token == "strength_sd") return SweepAxis::strength_sd;
    if (token == "distortion") return SweepAxis::distortion;
    if (token == "power") return SweepAxis::power;
    throw std::invalid_argument("unknown sweep axis: " + token + " (expected noise|strength_sd|distortion|power)");
}

/// Artifact default grids. Axis values are dB except for the power axis,
/// which is linear watts.
inline std::vector<double> default_axis_values(SweepAxis a) {
    switch (a) {
        case SweepAxis::noise: return {-60.0, -50.0, -40.0, -30.0, -20.0};
        case SweepAxis::strength_sd: return {-60.0, -50.0, -40.0, -30.0, -20.0, -10.0};
        case SweepAxis::distortion: return {-40.0, -30.0, -20.0, -10.0};
        default: return {0.25, 0.5, 1.0, 2.0, 4.0};
    }
}

/// One sweep point applied to the base setup.
inline SystemConfig apply_axis(const SystemConfig& base, SweepAxis axis, double value) {
    SystemConfig c = base;
    switch (axis) {
        case SweepAxis::noise: {
            const double v = db_to_linear(value);
            c.noise_var_relay.setConstant(v);
            c.noise_var_dest.setConstant(v);
            break;
        }
        case SweepAxis::strength_sd: {
            c.strength_sd = db_to_linear(value);
            // Keep the direct link estimable at weak strengths: the error
            // variance follows the link down once the configured absolute
            // value would eat the whole channel (estimation error scales
            // with the channel gain).
            for (Eigen::Index k = 0; k < c.err_var_sd.size(); ++k)
                c.err_var_sd[k] = std::min(c.err_var_sd[k], 0.1 * c.strength_sd);
            break;
        }
        case SweepAxis::distortion: {
            const double v = db_to_linear(value);
            c.kappa_relay = v;
            c.beta_relay = v;
            c.beta_dest = v;
            c.theta_tx_source.setConstant(v);
            break;
        }
        case SweepAxis::power:
            c.power_source = value;
            c.power_relay = value;
            break;
    }
    return c;
}

struct ExperimentSpec {
    SystemConfig base;
    SweepAxis axis = SweepAxis::noise;
    std::vector<double> axis_values = default_axis_values(SweepAxis::noise);
    int num_realizations = 100;
    std::vector<SchemeId> schemes = {SchemeId::RS, SchemeId::RS_ND, SchemeId::ODL, SchemeId::ORL, SchemeId::HD};
    std::uint64_t base_seed = 1;
    SolverOptions solver;
    int num_threads = 0;  // 0 = hardware concurrency

    void validate() const {
        base.validate();
        solver.validate();
        if (num_realizations < 1) throw std::invalid_argument("ExperimentSpec: num_realizations must be >= 1");
        if (axis_values.empty()) throw std::invalid_argument("ExperimentSpec: empty axis grid");
        for (double v : axis_values)
            if (!std::isfinite(v)) throw std::invalid_argument("ExperimentSpec: non-finite axis value");
        if (schemes.empty()) throw std::invalid_argument("ExperimentSpec: no schemes selected");
        for (double v : axis_values) apply_axis(base, axis, v).validate();
    }
};

struct SweepCell {
    double axis_value = 0.0;
    SchemeId scheme = SchemeId::RS;
    double mean_rate = 0.0;
    double std_rate = 0.0;
    int n_ok = 0;
    int n_fail = 0;
    double mean_iterations = 0.0;
    std::vector<double> samples;  // per realization; NaN marks a failed solve
};

struct SweepResult {
    SweepAxis axis = SweepAxis::noise;
    std::vector<double> axis_values;
    std::vector<SchemeId> schemes;
    std::vector<SweepCell> cells;  // axis-major, scheme-minor

    const SweepCell& cell(std::size_t i_axis, std::size_t i_scheme) const {
        return cells[i_axis * schemes.size() + i_scheme];
    }
};

inline SweepResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const std::size_t n_axis = spec.axis_values.size();
    const std::size_t n_schemes = spec.schemes.size();
    const std::size_t n_real = static_cast<std::size_t>(spec.num_realizations);

    std::vector<SystemConfig> configs;
    configs.reserve(n_axis);
    for (double v : spec.axis_values) configs.push_back(apply_axis(spec.base, spec.axis, v));

    SweepResult res;
    res.axis = spec.axis;
    res.axis_values = spec.axis_values;
    res.schemes = spec.schemes;
    res.cells.assign(n_axis * n_schemes, SweepCell{});
    for (std::size_t a = 0; a < n_axis; ++a)
        for (std::size_t s = 0; s < n_schemes; ++s) {
            SweepCell& c = res.cells[a * n_schemes + s];
            c.axis_value = spec.axis_values[a];
            c.scheme = spec.schemes[s];
            c.samples.assign(n_real, std::numeric_limits<double>::quiet_NaN());
        }
    std::vector<int> iters(n_axis * n_schemes * n_real, -1);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_real) return;
            for (std::size_t a = 0; a < n_axis; ++a) {
                const SystemConfig& cfg = configs[a];
                ChannelRealization ch;
                Precoders pre;
                bool generated = true;
                try {
                    ch = generate_channels(cfg, spec.base_seed + i);
                    pre = mrt_precoders(ch);
                } catch (const std::exception&) {
                    generated = false;
                }
                for (std::size_t s = 0; s < n_schemes; ++s) {
                    SweepCell& cell = res.cells[a * n_schemes + s];
                    if (!generated) continue;
                    try {
                        const SchemeResult r = solve_scheme(spec.schemes[s], ch, pre, cfg, spec.solver);
                        if (r.trace.termination == Termination::inner_failure || !std::isfinite(r.report.r_total))
                            continue;
                        cell.samples[i] = r.report.r_total;
                        iters[(a * n_schemes + s) * n_real + i] = r.trace.iterations;
                    } catch (const std::exception&) {
                        // excluded below, counted as a failure
                    }
                }
            }
        }
    };

    unsigned hw = spec.num_threads > 0 ? static_cast<unsigned>(spec.num_threads) : std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    hw = std::min<unsigned>(hw, static_cast<unsigned>(n_real));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < hw; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // Deterministic reduction in realization order.
    std::size_t total_fail = 0;
    for (std::size_t a = 0; a < n_axis; ++a) {
        for (std::size_t s = 0; s < n_schemes; ++s) {
            SweepCell& cell = res.cells[a * n_schemes + s];
            double sum = 0.0;
            double iter_sum = 0.0;
            int ok = 0;
            for (std::size_t i = 0; i < n_real; ++i) {
                const double v = cell.samples[i];
                if (std::isnan(v)) continue;
                sum += v;
                iter_sum += iters[(a * n_schemes + s) * n_real + i];
                ++ok;
            }
            cell.n_ok = ok;
            cell.n_fail = static_cast<int>(n_real) - ok;
            total_fail += static_cast<std::size_t>(cell.n_fail);
            cell.mean_rate = ok > 0 ? sum / ok : 0.0;
            cell.mean_iterations = ok > 0 ? iter_sum / ok : 0.0;
            double ss = 0.0;
            for (std::size_t i = 0; i < n_real; ++i) {
                const double v = cell.samples[i];
                if (std::isnan(v)) continue;
                ss += (v - cell.mean_rate) * (v - cell.mean_rate);
            }
            cell.std_rate = ok > 1 ? std::sqrt(ss / (ok - 1)) : 0.0;
        }
    }
    const std::size_t total = n_axis * n_schemes * n_real;
    if (total_fail * 10 > total)
        throw std::runtime_error("run_experiment: more than 10% of the solves failed (" + std::to_string(total_fail) +
                                 " of " + std::to_string(total) + ")");
    return res;
}

namespace detail {
inline std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}
}  // namespace detail

/// CSV body: one row per (axis value, scheme), axis order preserved, floats
/// with 9 significant digits. Byte-deterministic for a given result.
inline std::string csv_string(const SweepResult& res) {
    std::string out = "axis_value,scheme,mean_rate,std_rate,n_ok,n_fail\n";
    for (std::size_t a = 0; a < res.axis_values.size(); ++a) {
        for (std::size_t s = 0; s < res.schemes.size(); ++s) {
            const SweepCell& c = res.cell(a, s);
            out += detail::format_g9(c.axis_value);
            out += ',';
            out += to_string(c.scheme);
            out += ',';
            out += detail::format_g9(c.mean_rate);
            out += ',';
            out += detail::format_g9(c.std_rate);
            out += ',';
            out += std::to_string(c.n_ok);
            out += ',';
            out += std::to_string(c.n_fail);
            out += '\n';
        }
    }
    return out;
}

inline void emit_csv(const SweepResult& res, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
    f << csv_string(res);
    if (!f) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace fdrs

#endif  // FDRS_EXPERIMENT_HPP

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

#include <random>

#include "fdrs/rates.hpp"

using namespace fdrs;

namespace {

struct Instance {
    SystemConfig cfg;
    ChannelRealization ch;
    Precoders pre;
    RateCoefficients coeffs;
};

Instance default_instance(std::uint64_t seed) {
    Instance in;
    in.cfg = SystemConfig::defaults();
    in.ch = generate_channels(in.cfg, seed);
    in.pre = mrt_precoders(in.ch);
    in.coeffs = build_coefficients(in.ch, in.pre, in.cfg);
    return in;
}

PowerAllocation random_feasible(const SystemConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto k = static_cast<Eigen::Index>(cfg.num_subcarriers);
    PowerAllocation p = PowerAllocation::zeros(k);
    double src = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        p.p_sr[i] = u(rng);
        p.p_sd[i] = u(rng);
        p.p_rd[i] = u(rng);
        src += p.p_sr[i] + p.p_sd[i];
    }
    const double scale_s = cfg.power_source * u(rng) / src;
    p.p_sr *= scale_s;
    p.p_sd *= scale_s;
    p.p_rd *= cfg.power_relay * u(rng) / p.p_rd.sum();
    return p;
}

// Minimal single-subcarrier coefficient set with chosen gains, unit noise.
RateCoefficients scalar_coeffs(double gain_sr, double gain_rd, double gain_sd) {
    RateCoefficients c;
    c.gamma_sr = c.gamma_rd = c.gamma_sd = Eigen::MatrixXd::Zero(1, 1);
    c.gbar_sr = c.gbar_rd = c.gbar_sd = c.gtilde_sd = Eigen::MatrixXd::Zero(1, 1);
    c.alpha_r = c.alpha_d = Eigen::VectorXd::Ones(1);
    c.gain_sr = Eigen::VectorXd::Constant(1, gain_sr);
    c.gain_rd = Eigen::VectorXd::Constant(1, gain_rd);
    c.gain_sd = Eigen::VectorXd::Constant(1, gain_sd);
    return c;
}

}  // namespace

TEST_CASE("zero own power means zero rate") {
    const Instance in = default_instance(31);
    PowerAllocation p = PowerAllocation::uniform(in.cfg);
    p.p_sr.setZero();
    REQUIRE(rate_sr(in.coeffs, p, in.cfg).cwiseAbs().maxCoeff() == 0.0);
    p = PowerAllocation::uniform(in.cfg);
    p.p_rd.setZero();
    REQUIRE(rate_rd(in.coeffs, p, in.cfg).cwiseAbs().maxCoeff() == 0.0);
    p = PowerAllocation::uniform(in.cfg);
    p.p_sd.setZero();
    REQUIRE(rate_sd(in.coeffs, p, in.cfg).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("unit SNR gives one bit") {
    const RateCoefficients c = scalar_coeffs(1.0, 1.0, 1.0);
    SystemConfig cfg = SystemConfig::defaults();
    cfg.num_subcarriers = 1;
    PowerAllocation p = PowerAllocation::zeros(1);
    p.p_sr[0] = 1.0;
    REQUIRE(rate_sr(c, p, cfg)[0] == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rates agree with the covariance route") {
    for (std::uint64_t seed : {41u, 42u, 43u}) {
        const Instance in = default_instance(seed);
        std::mt19937_64 rng(seed + 100);
        const PowerAllocation p = random_feasible(in.cfg, rng);
        const double c0 = in.cfg.rate_prefactor / std::log(2.0);

        const Eigen::VectorXd sr = rate_sr(in.coeffs, p, in.cfg);
        const Eigen::VectorXd rd = rate_rd(in.coeffs, p, in.cfg);
        const Eigen::VectorXd sd = rate_sd(in.coeffs, p, in.cfg);
        const Eigen::VectorXd sig_r = covariance_relay(in.ch, in.pre, p, in.cfg);
        const Eigen::VectorXd sig_d1 = covariance_dest_phase1(in.ch, in.pre, p, in.cfg);
        const Eigen::VectorXd sig_d2 = covariance_dest_phase2(in.ch, in.pre, p, in.cfg);
        for (Eigen::Index k = 0; k < sr.size(); ++k) {
            REQUIRE(sr[k] == Catch::Approx(c0 * std::log1p(in.coeffs.gain_sr[k] * p.p_sr[k] / sig_r[k])).epsilon(1e-9));
            REQUIRE(rd[k] == Catch::Approx(c0 * std::log1p(in.coeffs.gain_rd[k] * p.p_rd[k] / sig_d1[k])).epsilon(1e-9));
            REQUIRE(sd[k] == Catch::Approx(c0 * std::log1p(in.coeffs.gain_sd[k] * p.p_sd[k] / sig_d2[k])).epsilon(1e-9));
        }
    }
}

TEST_CASE("total rate composes the per-subcarrier minimum") {
    SystemConfig cfg = SystemConfig::defaults();
    cfg.num_subcarriers = 1;
    // R_sr = 2, R_rd = 1, R_sd = 0.5 at unit powers.
    const RateCoefficients c = scalar_coeffs(3.0, 1.0, std::sqrt(2.0) - 1.0);
    PowerAllocation p = PowerAllocation::zeros(1);
    p.p_sr[0] = p.p_rd[0] = p.p_sd[0] = 1.0;
    const RateReport rep = total_rate(c, p, cfg);
    REQUIRE(rep.r_sr[0] == Catch::Approx(2.0).epsilon(1e-12));
    REQUIRE(rep.r_rd[0] == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(rep.r_sd[0] == Catch::Approx(0.5).epsilon(1e-12));
    REQUIRE(rep.r_total == Catch::Approx(1.5).epsilon(1e-12));

    const Instance in = default_instance(44);
    const RateReport zero = total_rate(in.coeffs, PowerAllocation::zeros(in.cfg.num_subcarriers), in.cfg);
    REQUIRE(zero.r_total == 0.0);

    std::mt19937_64 rng(7);
    const PowerAllocation q = random_feasible(in.cfg, rng);
    const RateReport r = total_rate(in.coeffs, q, in.cfg);
    REQUIRE(r.r_total >= r.r_sd.sum() - 1e-12);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < r.r_sr.size(); ++k) acc += r.r_sd[k] + std::min(r.r_sr[k], r.r_rd[k]);
    REQUIRE(r.r_total == Catch::Approx(acc).margin(1e-12));
}

TEST_CASE("taylor bounds are tight at the anchor") {
    const Instance in = default_instance(51);
    const PowerAllocation anchor = PowerAllocation::uniform(in.cfg);
    const Eigen::VectorXd b_sr = taylor_bound_sr(in.coeffs, anchor, anchor, in.cfg);
    const Eigen::VectorXd b_rd = taylor_bound_rd(in.coeffs, anchor, anchor, in.cfg);
    const Eigen::VectorXd b_sd = taylor_bound_sd(in.coeffs, anchor, anchor, in.cfg);
    REQUIRE((b_sr - rate_sr(in.coeffs, anchor, in.cfg)).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((b_rd - rate_rd(in.coeffs, anchor, in.cfg)).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((b_sd - rate_sd(in.coeffs, anchor, in.cfg)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("taylor bounds never exceed the true rates") {
    const Instance in = default_instance(52);
    const PowerAllocation anchor = PowerAllocation::uniform(in.cfg);
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 1000; ++trial) {
        const PowerAllocation p = random_feasible(in.cfg, rng);
        REQUIRE((taylor_bound_sr(in.coeffs, p, anchor, in.cfg) - rate_sr(in.coeffs, p, in.cfg)).maxCoeff() <= 1e-10);
        REQUIRE((taylor_bound_rd(in.coeffs, p, anchor, in.cfg) - rate_rd(in.coeffs, p, in.cfg)).maxCoeff() <= 1e-10);
        REQUIRE((taylor_bound_sd(in.coeffs, p, anchor, in.cfg) - rate_sd(in.coeffs, p, in.cfg)).maxCoeff() <= 1e-10);
    }
}

TEST_CASE("bound and rate share their slope at the anchor") {
    const Instance in = default_instance(53);
    const PowerAllocation anchor = PowerAllocation::uniform(in.cfg);
    const auto k_total = static_cast<Eigen::Index>(in.cfg.num_subcarriers);

    // Central differences on every coordinate of every power vector.
    auto check_link = [&](auto&& rate_fn, auto&& bound_fn) {
        for (int block = 0; block < 3; ++block) {
            for (Eigen::Index i = 0; i < k_total; ++i) {
                auto nudge = [&](double h) {
                    PowerAllocation p = anchor;
                    Eigen::VectorXd& v = block == 0 ? p.p_sr : (block == 1 ? p.p_sd : p.p_rd);
                    v[i] += h;
                    return p;
                };
                const double scale = block == 2 ? in.cfg.power_relay : in.cfg.power_source;
                const double h = 1e-6 * scale;
                const Eigen::VectorXd dr = (rate_fn(nudge(h)) - rate_fn(nudge(-h))) / (2.0 * h);
                const Eigen::VectorXd db = (bound_fn(nudge(h)) - bound_fn(nudge(-h))) / (2.0 * h);
                // components far below the gradient scale sit at the finite
                // difference noise floor; compare those against the scale
                const double gscale = dr.cwiseAbs().maxCoeff();
                for (Eigen::Index k = 0; k < k_total; ++k) {
                    const double ref = std::max({std::abs(dr[k]), 1e-3 * gscale, 1e-9});
                    REQUIRE(std::abs(dr[k] - db[k]) / ref < 1e-5);
                }
            }
        }
    };
    check_link([&](const PowerAllocation& p) { return rate_sr(in.coeffs, p, in.cfg); },
               [&](const PowerAllocation& p) { return taylor_bound_sr(in.coeffs, p, anchor, in.cfg); });
    check_link([&](const PowerAllocation& p) { return rate_rd(in.coeffs, p, in.cfg); },
               [&](const PowerAllocation& p) { return taylor_bound_rd(in.coeffs, p, anchor, in.cfg); });
    check_link([&](const PowerAllocation& p) { return rate_sd(in.coeffs, p, in.cfg); },
               [&](const PowerAllocation& p) { return taylor_bound_sd(in.coeffs, p, anchor, in.cfg); });
}

TEST_CASE("the surrogate is concave along random segments") {
    const Instance in = default_instance(54);
    const PowerAllocation anchor = PowerAllocation::uniform(in.cfg);
    std::mt19937_64 rng(54);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 200; ++trial) {
        const PowerAllocation p1 = random_feasible(in.cfg, rng);
        const PowerAllocation p2 = random_feasible(in.cfg, rng);
        const double lam = u(rng);
        PowerAllocation mid = p1;
        mid.p_sr = lam * p1.p_sr + (1.0 - lam) * p2.p_sr;
        mid.p_sd = lam * p1.p_sd + (1.0 - lam) * p2.p_sd;
        mid.p_rd = lam * p1.p_rd + (1.0 - lam) * p2.p_rd;
        const Eigen::VectorXd lhs = taylor_bound_sr(in.coeffs, mid, anchor, in.cfg);
        const Eigen::VectorXd rhs = lam * taylor_bound_sr(in.coeffs, p1, anchor, in.cfg) +
                                    (1.0 - lam) * taylor_bound_sr(in.coeffs, p2, anchor, in.cfg);
        REQUIRE((lhs - rhs).minCoeff() >= -1e-10);
    }
}

TEST_CASE("an anchor with zero interference denominator is rejected") {
    SystemConfig cfg = SystemConfig::defaults();
    cfg.kappa_relay = 0.0;
    cfg.beta_relay = 0.0;
    cfg.beta_dest = 0.0;
    cfg.broadcast(0.0, 0.0, 0.0);  // no noise, no error
    const ChannelRealization ch = generate_channels(cfg, 55);
    const Precoders pre = mrt_precoders(ch);
    const RateCoefficients c = build_coefficients(ch, pre, cfg);
    const PowerAllocation zero = PowerAllocation::zeros(cfg.num_subcarriers);
    REQUIRE_THROWS_AS(taylor_bound_sr(c, zero, zero, cfg), std::invalid_argument);
}

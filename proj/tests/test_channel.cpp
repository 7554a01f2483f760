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

#include <complex>
#include <random>

#include "fdrs/channel.hpp"

using namespace fdrs;

TEST_CASE("generate_channels is deterministic in (config, seed)") {
    const SystemConfig cfg = SystemConfig::defaults();
    const ChannelRealization a = generate_channels(cfg, 77);
    const ChannelRealization b = generate_channels(cfg, 77);
    REQUIRE((a.h_hat_sr.array() == b.h_hat_sr.array()).all());
    REQUIRE((a.h_hat_sd.array() == b.h_hat_sd.array()).all());
    REQUIRE((a.h_hat_rd.array() == b.h_hat_rd.array()).all());
    REQUIRE((a.h_hat_rr.array() == b.h_hat_rr.array()).all());

    const ChannelRealization c = generate_channels(cfg, 78);
    REQUIRE_FALSE((a.h_hat_sr.array() == c.h_hat_sr.array()).all());
}

TEST_CASE("self-interference collapses onto the Rician mean for a huge K-factor") {
    SystemConfig cfg = SystemConfig::defaults();
    cfg.rician_k = 1e12;
    cfg.strength_si = 1.0;
    cfg.broadcast(db_to_linear(-40.0), 0.0, cfg.kappa_relay);  // no estimation error
    const ChannelRealization ch = generate_channels(cfg, 5);
    for (Eigen::Index k = 0; k < ch.num_subcarriers(); ++k)
        REQUIRE(std::abs(ch.h_hat_rr[k] - std::complex<double>(1.0, 0.0)) < 1e-5);
}

TEST_CASE("estimated channel variance matches strength minus error variance") {
    SystemConfig cfg = SystemConfig::defaults();
    cfg.strength_sr = db_to_linear(-10.0);
    cfg.broadcast(db_to_linear(-40.0), db_to_linear(-50.0), cfg.kappa_relay);
    const double expected = cfg.strength_sr - db_to_linear(-50.0);

    const int draws = 10000;
    double acc = 0.0;
    long cnt = 0;
    for (int i = 0; i < draws; ++i) {
        const ChannelRealization ch = generate_channels(cfg, 1000 + i);
        acc += ch.h_hat_sr.cwiseAbs2().sum();
        cnt += ch.h_hat_sr.size();
    }
    const double mean = acc / static_cast<double>(cnt);
    // |entry|^2 is exponential with std = mean, so the standard error of the
    // grand mean is expected / sqrt(cnt).
    const double se = expected / std::sqrt(static_cast<double>(cnt));
    REQUIRE(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("error variance above the link strength is rejected") {
    SystemConfig cfg = SystemConfig::defaults();
    cfg.err_var_sr.setConstant(cfg.strength_sr * 2.0);
    REQUIRE_THROWS_AS(generate_channels(cfg, 1), std::invalid_argument);

    SystemConfig cfg2 = SystemConfig::defaults();
    // scattered self-interference power is strength_si / (1 + K_R)
    cfg2.err_var_rr.setConstant(cfg2.strength_si / (1.0 + cfg2.rician_k) * 1.5);
    REQUIRE_THROWS_AS(generate_channels(cfg2, 1), std::invalid_argument);
}

TEST_CASE("mrt precoders are unit norm and aligned") {
    const SystemConfig cfg = SystemConfig::defaults();
    const ChannelRealization ch = generate_channels(cfg, 9);
    const Precoders pre = mrt_precoders(ch);
    for (Eigen::Index k = 0; k < ch.num_subcarriers(); ++k) {
        REQUIRE(std::abs(pre.v_sr.col(k).norm() - 1.0) < 1e-12);
        REQUIRE(std::abs(pre.v_sd.col(k).norm() - 1.0) < 1e-12);
        // MRT captures the full channel energy.
        const std::complex<double> dot = (ch.h_hat_sr.row(k) * pre.v_sr.col(k)).value();
        REQUIRE(std::norm(dot) == Catch::Approx(ch.h_hat_sr.row(k).squaredNorm()).epsilon(1e-12));
    }
}

TEST_CASE("mrt of a single-entry channel is the unit basis vector") {
    ChannelRealization ch;
    ch.h_hat_sr = Eigen::MatrixXcd::Zero(1, 4);
    ch.h_hat_sr(0, 0) = 2.0;
    ch.h_hat_sd = Eigen::MatrixXcd::Zero(1, 4);
    ch.h_hat_sd(0, 1) = 1.0;
    ch.h_hat_rd = Eigen::VectorXcd::Ones(1);
    ch.h_hat_rr = Eigen::VectorXcd::Ones(1);
    const Precoders pre = mrt_precoders(ch);
    REQUIRE(std::abs(pre.v_sr(0, 0) - std::complex<double>(1.0, 0.0)) < 1e-15);
    REQUIRE(pre.v_sr.col(0).tail(3).norm() < 1e-15);
}

TEST_CASE("mrt beats random unit-norm precoders") {
    const SystemConfig cfg = SystemConfig::defaults();
    const ChannelRealization ch = generate_channels(cfg, 11);
    const Precoders pre = mrt_precoders(ch);
    std::mt19937_64 rng(123);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXcd v(ch.num_antennas());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::complex<double>(gauss(rng), gauss(rng));
        v /= v.norm();
        const double random_gain = std::norm((ch.h_hat_sr.row(0) * v).value());
        const double mrt_gain = std::norm((ch.h_hat_sr.row(0) * pre.v_sr.col(0)).value());
        REQUIRE(mrt_gain >= random_gain);
    }
}

TEST_CASE("zero-norm channel rows are rejected") {
    ChannelRealization ch;
    ch.h_hat_sr = Eigen::MatrixXcd::Zero(1, 4);
    ch.h_hat_sd = Eigen::MatrixXcd::Ones(1, 4);
    ch.h_hat_rd = Eigen::VectorXcd::Ones(1);
    ch.h_hat_rr = Eigen::VectorXcd::Ones(1);
    REQUIRE_THROWS_AS(mrt_precoders(ch), std::invalid_argument);
}

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
// Flat key = value configuration files. Power-like keys accept a _db suffix
// and are converted to linear once at load; everything downstream is linear.
// Per-subcarrier quantities are given as scalars and broadcast.

#ifndef FDRS_CONFIG_IO_HPP
#define FDRS_CONFIG_IO_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fdrs/config.hpp"

namespace fdrs {

struct FileConfig {
    SystemConfig config;
    int realizations = 100;
    std::uint64_t base_seed = 1;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct ConfigEntry {
    double value;
    int line;
};

[[noreturn]] inline void parse_fail(const std::string& path, int line, const std::string& msg) {
    throw std::invalid_argument(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace detail

/// Parse a key = value config. '#' starts a comment; unknown or duplicate
/// keys are errors anchored to their line.
inline FileConfig parse_config_text(const std::string& text, const std::string& path) {
    static const char* scalar_keys[] = {
        "power_source", "power_relay", "strength_sr", "strength_rd", "strength_sd", "strength_si",
        "rician_k", "noise_var_relay", "noise_var_dest", "err_var_sr", "err_var_rd", "err_var_sd",
        "err_var_rr", "kappa_relay", "beta_relay", "beta_dest", "theta_tx_source", "rate_prefactor"};
    static const char* db_allowed[] = {
        "power_source", "power_relay", "strength_sr", "strength_rd", "strength_sd", "strength_si",
        "noise_var_relay", "noise_var_dest", "err_var_sr", "err_var_rd", "err_var_sd", "err_var_rr",
        "kappa_relay", "beta_relay", "beta_dest", "theta_tx_source"};
    static const char* int_keys[] = {"num_subcarriers", "num_bs_antennas", "realizations", "base_seed"};

    std::map<std::string, detail::ConfigEntry> values;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) detail::parse_fail(path, line_no, "expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        const std::string val_str = detail::trim(line.substr(eq + 1));
        if (key.empty() || val_str.empty()) detail::parse_fail(path, line_no, "expected 'key = value'");

        bool is_db = false;
        if (key.size() > 3 && key.compare(key.size() - 3, 3, "_db") == 0) {
            is_db = true;
            key.erase(key.size() - 3);
        }

        bool known = false;
        for (const char* k : scalar_keys) known = known || key == k;
        for (const char* k : int_keys) known = known || key == k;
        if (!known) detail::parse_fail(path, line_no, "unknown key '" + key + (is_db ? "_db'" : "'"));
        if (is_db) {
            bool allowed = false;
            for (const char* k : db_allowed) allowed = allowed || key == k;
            if (!allowed) detail::parse_fail(path, line_no, "'" + key + "' does not take a _db suffix");
        }

        double v = 0.0;
        try {
            std::size_t pos = 0;
            v = std::stod(val_str, &pos);
            if (pos != val_str.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            detail::parse_fail(path, line_no, "cannot parse number '" + val_str + "'");
        }
        if (is_db) v = db_to_linear(v);
        if (values.count(key)) detail::parse_fail(path, line_no, "duplicate key '" + key + "'");
        values[key] = {v, line_no};
    }

    FileConfig fc;
    SystemConfig& c = fc.config;
    c = SystemConfig::defaults();

    auto take_int = [&](const char* key, int min_v, int& out) {
        auto it = values.find(key);
        if (it == values.end()) return;
        const double v = it->second.value;
        if (v < min_v || v != std::floor(v)) detail::parse_fail(path, it->second.line, std::string("'") + key + "' must be an integer >= " + std::to_string(min_v));
        out = static_cast<int>(v);
        values.erase(it);
    };
    int realizations = fc.realizations;
    take_int("num_subcarriers", 1, c.num_subcarriers);
    take_int("num_bs_antennas", 1, c.num_bs_antennas);
    take_int("realizations", 1, realizations);
    fc.realizations = realizations;
    if (auto it = values.find("base_seed"); it != values.end()) {
        if (it->second.value < 0 || it->second.value != std::floor(it->second.value))
            detail::parse_fail(path, it->second.line, "'base_seed' must be a nonnegative integer");
        fc.base_seed = static_cast<std::uint64_t>(it->second.value);
        values.erase(it);
    }

    // Rebuild per-subcarrier/per-antenna vectors for the configured sizes
    // before applying scalar overrides.
    c.broadcast(db_to_linear(-40.0), db_to_linear(-50.0), c.kappa_relay);

    auto take = [&](const char* key, auto&& apply) {
        auto it = values.find(key);
        if (it == values.end()) return;
        apply(it->second.value);
        values.erase(it);
    };
    take("power_source", [&](double v) { c.power_source = v; });
    take("power_relay", [&](double v) { c.power_relay = v; });
    take("strength_sr", [&](double v) { c.strength_sr = v; });
    take("strength_rd", [&](double v) { c.strength_rd = v; });
    take("strength_sd", [&](double v) { c.strength_sd = v; });
    take("strength_si", [&](double v) { c.strength_si = v; });
    take("rician_k", [&](double v) { c.rician_k = v; });
    take("rate_prefactor", [&](double v) { c.rate_prefactor = v; });
    take("noise_var_relay", [&](double v) { c.noise_var_relay.setConstant(v); });
    take("noise_var_dest", [&](double v) { c.noise_var_dest.setConstant(v); });
    take("err_var_sr", [&](double v) { c.err_var_sr.setConstant(v); });
    take("err_var_rd", [&](double v) { c.err_var_rd.setConstant(v); });
    take("err_var_sd", [&](double v) { c.err_var_sd.setConstant(v); });
    take("err_var_rr", [&](double v) { c.err_var_rr.setConstant(v); });
    bool theta_given = false;
    bool kappa_given = false;
    take("kappa_relay", [&](double v) { c.kappa_relay = v; kappa_given = true; });
    take("beta_relay", [&](double v) { c.beta_relay = v; });
    take("beta_dest", [&](double v) { c.beta_dest = v; });
    take("theta_tx_source", [&](double v) { c.theta_tx_source.setConstant(v); theta_given = true; });
    // The default setup ties the BS per-chain diagonal to the scalar
    // transmit-distortion coefficient.
    if (kappa_given && !theta_given) c.theta_tx_source.setConstant(c.kappa_relay);

    c.validate();
    return fc;
}

inline FileConfig parse_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument(path + ": cannot open config file");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

}  // namespace fdrs

#endif  // FDRS_CONFIG_IO_HPP

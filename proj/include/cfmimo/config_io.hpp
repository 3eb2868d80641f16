// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: mobility-aware cell-free massive MIMO simulator for mmWave bands
// Copyright (C) 2026 The cfmimo authors
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

// Flat `section.key = value` configuration text.
//
//   # comment
//   net.M = 120
//   assoc.zeta_ho = 0.05
//   sim.scheme = ltb-di
//
// Unknown keys, malformed values and invariant violations raise ConfigError
// naming the key. to_config_text() emits every key with its current value and
// parses back to an identical SystemConfig.

#ifndef CFMIMO_CONFIG_IO_HPP
#define CFMIMO_CONFIG_IO_HPP

#include "cfmimo/common.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/text.hpp"

#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cfmimo {

namespace detail {

struct ConfigKey {
    std::string_view name;
    std::function<std::string(const SystemConfig &)> get;            // empty for input-only aliases
    std::function<bool(SystemConfig &, std::string_view value)> set; // false on malformed value
};

template <class Int>
ConfigKey int_key(std::string_view name, Int SystemConfig::*field) {
    return {name, [field](const SystemConfig &c) { return std::to_string(c.*field); },
            [field](SystemConfig &c, std::string_view v) {
                auto parsed = parse_integer<Int>(v);
                if (!parsed)
                    return false;
                c.*field = *parsed;
                return true;
            }};
}

inline ConfigKey real_key(std::string_view name, double SystemConfig::*field) {
    return {name, [field](const SystemConfig &c) { return format_double(c.*field); },
            [field](SystemConfig &c, std::string_view v) {
                auto parsed = parse_double(v);
                if (!parsed)
                    return false;
                c.*field = *parsed;
                return true;
            }};
}

inline ConfigKey kmh_alias(std::string_view name, double SystemConfig::*field) {
    return {name, {}, [field](SystemConfig &c, std::string_view v) {
                auto parsed = parse_double(v);
                if (!parsed)
                    return false;
                c.*field = kmh_to_mps(*parsed);
                return true;
            }};
}

inline const std::vector<ConfigKey> &config_keys() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> k;
        k.push_back(int_key("net.M", &SystemConfig::M));
        k.push_back(int_key("net.K", &SystemConfig::K));
        k.push_back(int_key("net.N_AP", &SystemConfig::n_ap));
        k.push_back(int_key("net.N_UE", &SystemConfig::n_ue));
        k.push_back(int_key("net.N_s", &SystemConfig::n_scatterers));
        k.push_back(real_key("net.ap_area_m", &SystemConfig::ap_area_m));
        k.push_back(real_key("net.ue_area_m", &SystemConfig::ue_area_m));
        k.push_back(real_key("net.h_ap_m", &SystemConfig::h_ap_m));
        k.push_back(real_key("net.h_ue_m", &SystemConfig::h_ue_m));

        k.push_back(real_key("radio.fc_hz", &SystemConfig::fc_hz));
        k.push_back(real_key("radio.bandwidth_hz", &SystemConfig::bandwidth_hz));
        k.push_back(real_key("radio.subcarrier_spacing_hz", &SystemConfig::subcarrier_spacing_hz));
        k.push_back(real_key("radio.cp_fraction", &SystemConfig::cp_fraction));
        k.push_back(int_key("radio.n_subcarriers", &SystemConfig::n_subcarriers));
        k.push_back(real_key("radio.noise_psd_dbm_hz", &SystemConfig::noise_psd_dbm_hz));
        k.push_back(real_key("radio.noise_figure_db", &SystemConfig::noise_figure_db));
        k.push_back(real_key("radio.p_dl_w", &SystemConfig::p_dl_w));

        k.push_back(int_key("time.tau_c", &SystemConfig::tau_c));
        k.push_back(int_key("time.tau_s", &SystemConfig::tau_s));

        k.push_back(int_key("assoc.N_UC", &SystemConfig::n_uc));
        k.push_back(real_key("assoc.zeta_ho", &SystemConfig::zeta_ho));
        k.push_back(int_key("assoc.N_HO", &SystemConfig::n_ho));

        k.push_back(real_key("mobility.v_min_mps", &SystemConfig::v_min_mps));
        k.push_back(real_key("mobility.v_max_mps", &SystemConfig::v_max_mps));
        k.push_back(kmh_alias("mobility.v_min_kmh", &SystemConfig::v_min_mps));
        k.push_back(kmh_alias("mobility.v_max_kmh", &SystemConfig::v_max_mps));
        k.push_back({"mobility.redraw", [](const SystemConfig &c) { return std::string(to_string(c.mobility_redraw)); },
                     [](SystemConfig &c, std::string_view v) {
                         v = trim(v);
                         if (v == "epoch")
                             c.mobility_redraw = MobilityRedraw::Epoch;
                         else if (v == "never")
                             c.mobility_redraw = MobilityRedraw::Never;
                         else
                             return false;
                         return true;
                     }});
        k.push_back({"geometry.blockage_redraw",
                     [](const SystemConfig &c) { return std::string(to_string(c.blockage_redraw)); },
                     [](SystemConfig &c, std::string_view v) {
                         v = trim(v);
                         if (v == "on_move")
                             c.blockage_redraw = BlockageRedraw::OnMove;
                         else if (v == "every_epoch")
                             c.blockage_redraw = BlockageRedraw::EveryEpoch;
                         else if (v == "never")
                             c.blockage_redraw = BlockageRedraw::Never;
                         else
                             return false;
                         return true;
                     }});

        k.push_back(real_key("geometry.blockage_distance_m", &SystemConfig::blockage_distance_m));

        k.push_back(int_key("sim.drops", &SystemConfig::drops));
        k.push_back(int_key("sim.epochs", &SystemConfig::epochs));
        k.push_back({"sim.scheme", [](const SystemConfig &c) { return std::string(to_string(c.scheme)); },
                     [](SystemConfig &c, std::string_view v) {
                         auto s = parse_scheme(trim(v));
                         if (!s)
                             return false;
                         c.scheme = *s;
                         return true;
                     }});
        k.push_back(int_key("sim.seed", &SystemConfig::seed));
        k.push_back(int_key("sim.workers", &SystemConfig::workers));
        k.push_back({"sim.truncate_far_pairs",
                     [](const SystemConfig &c) { return std::string(c.truncate_far_pairs ? "true" : "false"); },
                     [](SystemConfig &c, std::string_view v) {
                         auto b = parse_bool(v);
                         if (!b)
                             return false;
                         c.truncate_far_pairs = *b;
                         return true;
                     }});
        return k;
    }();
    return keys;
}

} // namespace detail

// Applies one `key=value` assignment.
inline void apply_setting(SystemConfig &cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    for (const auto &k : detail::config_keys()) {
        if (k.name != key)
            continue;
        if (!k.set(cfg, value))
            throw ConfigError(std::string(key), "malformed value '" + std::string(trim(value)) + "'");
        return;
    }
    throw ConfigError(std::string(key), "unknown configuration key");
}

inline void apply_assignment(SystemConfig &cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError(std::string(trim(assignment)), "expected KEY=VALUE");
    apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

// Parses configuration text on top of `base` (defaults when omitted), then
// applies `overrides` in order and validates the result.
inline SystemConfig parse_config(std::string_view text, const std::vector<std::string> &overrides = {},
                                 SystemConfig base = {}) {
    SystemConfig cfg = base;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.find('=') == std::string_view::npos)
            throw ConfigError("", "line " + std::to_string(line_no) + ": expected KEY=VALUE");
        apply_assignment(cfg, line);
    }
    for (const auto &o : overrides)
        apply_assignment(cfg, o);
    validate(cfg);
    return cfg;
}

inline SystemConfig parse_config_file(const std::string &path, const std::vector<std::string> &overrides = {}) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot read configuration file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

// Every key with its value, one `key = value` per line.
inline std::string to_config_text(const SystemConfig &cfg) {
    std::string out;
    for (const auto &k : detail::config_keys()) {
        if (!k.get)
            continue;
        out += k.name;
        out += " = ";
        out += k.get(cfg);
        out += '\n';
    }
    return out;
}

} // namespace cfmimo

#endif

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

#ifndef CFMIMO_CONFIG_HPP
#define CFMIMO_CONFIG_HPP

#include "cfmimo/common.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace cfmimo {

enum class Scheme { LtbDi, LtbCi, StbDi, StbCi, Abf };

inline constexpr std::array<Scheme, 5> kAllSchemes = {Scheme::LtbDi, Scheme::LtbCi, Scheme::StbDi, Scheme::StbCi,
                                                       Scheme::Abf};

inline std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::LtbDi: return "ltb-di";
    case Scheme::LtbCi: return "ltb-ci";
    case Scheme::StbDi: return "stb-di";
    case Scheme::StbCi: return "stb-ci";
    case Scheme::Abf: return "abf";
    }
    return "?";
}

inline std::optional<Scheme> parse_scheme(std::string_view token) {
    for (Scheme s : kAllSchemes)
        if (to_string(s) == token)
            return s;
    return std::nullopt;
}

inline bool is_constant_modulus(Scheme s) { return s == Scheme::LtbCi || s == Scheme::StbCi; }
inline bool is_short_term(Scheme s) { return s == Scheme::StbDi || s == Scheme::StbCi; }

// When a user's heading and speed are redrawn.
enum class MobilityRedraw { Epoch, Never };

// When the LoS / scatterer link-existence draws of a user's pairs are redrawn.
//  OnMove:     at every slow-fading epoch in which the user has travelled at
//              least blockage_distance_m since its previous draw (any
//              movement when the distance is 0)
//  EveryEpoch: at every slow-fading epoch, moving or not
//  Never:      once per drop
enum class BlockageRedraw { OnMove, EveryEpoch, Never };

inline std::string_view to_string(MobilityRedraw r) { return r == MobilityRedraw::Epoch ? "epoch" : "never"; }

inline std::string_view to_string(BlockageRedraw r) {
    switch (r) {
    case BlockageRedraw::OnMove: return "on_move";
    case BlockageRedraw::EveryEpoch: return "every_epoch";
    case BlockageRedraw::Never: return "never";
    }
    return "?";
}

struct SystemConfig {
    // network
    int M = 120;     // access points
    int K = 20;      // users
    int n_ap = 32;   // antennas per AP
    int n_ue = 16;   // antennas per UE
    int n_scatterers = 200;
    double ap_area_m = 850.0; // side of the AP / scatterer square
    double ue_area_m = 350.0; // side of the centred initial-UE square
    double h_ap_m = 10.0;
    double h_ue_m = 1.65;

    // radio
    double fc_hz = 28.0e9;
    double bandwidth_hz = 500.0e6;
    double subcarrier_spacing_hz = 480.0e3;
    double cp_fraction = 0.07;
    int n_subcarriers = 1024;
    double noise_psd_dbm_hz = -174.0;
    double noise_figure_db = 9.0;
    double p_dl_w = 1.0;

    // timeline, channel uses
    long tau_c = 224;
    long tau_s = 4480;

    // association
    int n_uc = 5;
    double zeta_ho = 0.05;
    int n_ho = 10;

    // mobility, m/s
    double v_min_mps = 5.0 / 3.6;
    double v_max_mps = 10.0 / 3.6;
    MobilityRedraw mobility_redraw = MobilityRedraw::Epoch;
    BlockageRedraw blockage_redraw = BlockageRedraw::OnMove;
    double blockage_distance_m = 50.0;

    // campaign
    int drops = 10;
    int epochs = 50;
    Scheme scheme = Scheme::LtbDi;
    std::uint64_t seed = 1;
    int workers = 1;
    bool truncate_far_pairs = false;

    friend bool operator==(const SystemConfig &, const SystemConfig &) = default;
};

// OFDM symbol duration (= sampling period T) and subcarrier count.
struct Numerology {
    double t0_s = 0.0;
    int n_subcarriers = 0;
};

inline Numerology derive_numerology(const SystemConfig &cfg) {
    if (!(cfg.subcarrier_spacing_hz > 0.0))
        throw ConfigError("radio.subcarrier_spacing_hz", "must be positive");
    return {(1.0 + cfg.cp_fraction) / cfg.subcarrier_spacing_hz, cfg.n_subcarriers};
}

inline long blocks_per_epoch(const SystemConfig &cfg) { return (cfg.tau_s + cfg.tau_c - 1) / cfg.tau_c; }

inline double epoch_duration_s(const SystemConfig &cfg) {
    return static_cast<double>(cfg.tau_s) * derive_numerology(cfg).t0_s;
}

// Throws ConfigError naming the first offending key.
inline void validate(const SystemConfig &c) {
    auto require = [](bool ok, const char *key, const char *what) {
        if (!ok)
            throw ConfigError(key, what);
    };
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };

    require(c.M >= 1, "net.M", "must be >= 1");
    require(c.K >= 1, "net.K", "must be >= 1");
    require(c.n_ap >= 1, "net.N_AP", "must be >= 1");
    require(c.n_ue >= 1, "net.N_UE", "must be >= 1");
    require(c.n_scatterers >= 1, "net.N_s", "must be >= 1");
    require(positive(c.ap_area_m), "net.ap_area_m", "must be positive");
    require(positive(c.ue_area_m), "net.ue_area_m", "must be positive");
    require(c.ue_area_m <= c.ap_area_m, "net.ue_area_m", "must not exceed net.ap_area_m");
    require(positive(c.h_ap_m), "net.h_ap_m", "must be positive");
    require(positive(c.h_ue_m), "net.h_ue_m", "must be positive");

    require(positive(c.fc_hz), "radio.fc_hz", "must be positive");
    require(positive(c.bandwidth_hz), "radio.bandwidth_hz", "must be positive");
    require(positive(c.subcarrier_spacing_hz), "radio.subcarrier_spacing_hz", "must be positive");
    require(std::isfinite(c.cp_fraction) && c.cp_fraction >= 0.0, "radio.cp_fraction", "must be >= 0");
    require(c.n_subcarriers >= 1, "radio.n_subcarriers", "must be >= 1");
    require(std::isfinite(c.noise_psd_dbm_hz), "radio.noise_psd_dbm_hz", "must be finite");
    require(std::isfinite(c.noise_figure_db) && c.noise_figure_db >= 0.0, "radio.noise_figure_db", "must be >= 0");
    require(positive(c.p_dl_w), "radio.p_dl_w", "must be positive");

    require(c.tau_c >= 1, "time.tau_c", "must be >= 1");
    require(c.tau_s > c.tau_c, "time.tau_s", "must exceed time.tau_c");

    require(c.n_uc >= 1, "assoc.N_UC", "must be >= 1");
    require(c.n_uc <= c.M, "assoc.N_UC", "must not exceed net.M");
    require(!std::isnan(c.zeta_ho) && c.zeta_ho >= 0.0, "assoc.zeta_ho", "must be >= 0 (inf allowed)");
    require(c.n_ho >= 0, "assoc.N_HO", "must be >= 0");

    require(std::isfinite(c.v_min_mps) && c.v_min_mps >= 0.0, "mobility.v_min_mps", "must be >= 0");
    require(std::isfinite(c.v_max_mps) && c.v_max_mps >= c.v_min_mps, "mobility.v_max_mps",
            "must be >= mobility.v_min_mps");

    require(std::isfinite(c.blockage_distance_m) && c.blockage_distance_m >= 0.0, "geometry.blockage_distance_m",
            "must be >= 0");

    require(c.drops >= 1, "sim.drops", "must be >= 1");
    require(c.epochs >= 0, "sim.epochs", "must be >= 0");
    require(c.workers >= 1, "sim.workers", "must be >= 1");
}

} // namespace cfmimo

#endif

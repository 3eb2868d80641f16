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

// Physical layout, user mobility and the geometric map from positions to
// per-path distances and angles.
//
// Coordinates are metres in the horizontal plane with the AP deployment
// square spanning [0, ap_area_m]^2. Heights enter distances only: APs sit at
// h_ap_m, users and scatterers at h_ue_m. All angles are horizontal-plane
// bearings relative to the array broadside, wrapped to (-pi, pi].

#ifndef CFMIMO_TOPOLOGY_HPP
#define CFMIMO_TOPOLOGY_HPP

#include "cfmimo/common.hpp"
#include "cfmimo/config.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace cfmimo {

struct Topology {
    std::vector<Point2> ap_positions;
    std::vector<double> ap_orientations; // [0, 2pi)
    std::vector<Point2> scatterer_positions;
    std::vector<double> ue_orientations; // [0, 2pi)
};

struct UEState {
    Point2 position;
    double speed = 0.0;   // m/s
    double heading = 0.0; // [0, 2pi)

    Point2 velocity() const { return {speed * std::cos(heading), speed * std::sin(heading)}; }
};

struct NlosPath {
    int scatterer = 0;
    double distance = 0.0; // AP -> scatterer -> UE, metres
    double aoa = 0.0;      // at the AP
    double aod = 0.0;      // at the UE
};

// Geometry of one (AP, UE) pair for one slow-fading epoch.
struct PairGeometry {
    bool los_exists = false;
    double los_distance = 0.0; // 3-D, metres
    double los_aoa = 0.0;
    double los_aod = 0.0;
    std::vector<NlosPath> nlos;
};

// Outcome of the Bernoulli link-existence draws of one pair.
struct LinkDraws {
    bool los = false;
    std::vector<std::pair<bool, bool>> scatterer; // (AP side, UE side)
};

// Link distances shorter than this are clamped before entering the LoS
// probability or the path loss.
inline constexpr double kMinLinkDistance = 1.0;

// LoS probability as a function of link length.
inline double p_los(double d) {
    if (!(d > 0.0))
        throw DomainError("p_los: distance must be positive");
    const double e = std::exp(-d / 39.0);
    return std::min(20.0 / d, 1.0) * (1.0 - e) + e;
}

inline Topology init_topology(const SystemConfig &cfg, Rng &rng) {
    Topology topo;
    const double side = cfg.ap_area_m;
    topo.ap_positions.reserve(cfg.M);
    topo.ap_orientations.reserve(cfg.M);
    for (int m = 0; m < cfg.M; ++m) {
        topo.ap_positions.push_back({uniform(rng, 0.0, side), uniform(rng, 0.0, side)});
        topo.ap_orientations.push_back(uniform(rng, 0.0, kTwoPi));
    }
    topo.scatterer_positions.reserve(cfg.n_scatterers);
    for (int s = 0; s < cfg.n_scatterers; ++s)
        topo.scatterer_positions.push_back({uniform(rng, 0.0, side), uniform(rng, 0.0, side)});
    topo.ue_orientations.reserve(cfg.K);
    for (int k = 0; k < cfg.K; ++k)
        topo.ue_orientations.push_back(uniform(rng, 0.0, kTwoPi));
    return topo;
}

inline void redraw_velocity(UEState &ue, const SystemConfig &cfg, Rng &rng) {
    ue.speed = uniform(rng, cfg.v_min_mps, cfg.v_max_mps);
    ue.heading = uniform(rng, 0.0, kTwoPi);
}

struct Layout {
    Topology topology;
    std::vector<UEState> ues;
};

// Uniform i.i.d. placement of APs, scatterers and users. Draw order is fixed:
// APs, scatterers, UE orientations, UE positions, UE velocities.
inline Layout init_layout(const SystemConfig &cfg, Rng &rng) {
    if (!(cfg.ap_area_m > 0.0) || !(cfg.ue_area_m > 0.0))
        throw ConfigError("net.ap_area_m", "deployment areas must be positive");
    if (cfg.M < 1 || cfg.K < 1 || cfg.n_scatterers < 1)
        throw ConfigError("net.M", "M, K and N_s must all be >= 1");

    Layout out;
    out.topology = init_topology(cfg, rng);
    const double lo = 0.5 * (cfg.ap_area_m - cfg.ue_area_m);
    const double hi = lo + cfg.ue_area_m;
    out.ues.resize(cfg.K);
    for (auto &ue : out.ues)
        ue.position = {uniform(rng, lo, hi), uniform(rng, lo, hi)};
    for (auto &ue : out.ues)
        redraw_velocity(ue, cfg, rng);
    return out;
}

// Straight-line move over one epoch. With `area_side` set, the trajectory is
// mirrored at the walls of [0, area_side]^2 and the heading reflected.
inline UEState step_mobility(const UEState &ue, double dt, std::optional<double> area_side = std::nullopt) {
    UEState next = ue;
    next.position.x += ue.speed * dt * std::cos(ue.heading);
    next.position.y += ue.speed * dt * std::sin(ue.heading);
    if (!area_side)
        return next;

    const double side = *area_side;
    bool flip_x = false;
    bool flip_y = false;
    auto fold = [side](double &v, bool &flipped) {
        while (v < 0.0 || v > side) {
            v = v < 0.0 ? -v : 2.0 * side - v;
            flipped = !flipped;
        }
    };
    fold(next.position.x, flip_x);
    fold(next.position.y, flip_y);
    double h = next.heading;
    if (flip_x)
        h = kPi - h;
    if (flip_y)
        h = -h;
    next.heading = wrap_angle_positive(h);
    return next;
}

inline double los_distance_3d(const Point2 &ap, const Point2 &ue, const SystemConfig &cfg) {
    const double dh = cfg.h_ap_m - cfg.h_ue_m;
    return std::hypot(horizontal_distance(ap, ue), dh);
}

// Draws the LoS flag and the per-scatterer (AP side, UE side) flags of one
// pair. Always consumes exactly 1 + 2 * N_s uniforms.
inline LinkDraws draw_links(const Topology &topo, int m, const UEState &ue, const SystemConfig &cfg, Rng &rng) {
    const Point2 ap = topo.ap_positions[m];
    LinkDraws d;
    d.los = bernoulli(rng, p_los(std::max(los_distance_3d(ap, ue.position, cfg), kMinLinkDistance)));
    d.scatterer.reserve(topo.scatterer_positions.size());
    for (const Point2 &s : topo.scatterer_positions) {
        const double d_ap = std::max(los_distance_3d(ap, s, cfg), kMinLinkDistance);
        const double d_ue = std::max(horizontal_distance(ue.position, s), kMinLinkDistance);
        const bool ap_ok = bernoulli(rng, p_los(d_ap));
        const bool ue_ok = bernoulli(rng, p_los(d_ue));
        d.scatterer.emplace_back(ap_ok, ue_ok);
    }
    return d;
}

// Deterministic part of the geometric map for one pair given its link draws.
inline PairGeometry pair_geometry(const Topology &topo, int m, const UEState &ue, double ue_orientation,
                                  const LinkDraws &draws, const SystemConfig &cfg) {
    if (draws.scatterer.size() != topo.scatterer_positions.size())
        throw InternalError("pair_geometry: link draws do not match scatterer count");
    const Point2 ap = topo.ap_positions[m];
    const double ap_orient = topo.ap_orientations[m];

    PairGeometry g;
    g.los_exists = draws.los;
    g.los_distance = std::max(los_distance_3d(ap, ue.position, cfg), kMinLinkDistance);
    g.los_aoa = wrap_angle(bearing(ap, ue.position) - ap_orient);
    g.los_aod = wrap_angle(bearing(ue.position, ap) - ue_orientation);

    for (std::size_t s = 0; s < draws.scatterer.size(); ++s) {
        const auto [ap_ok, ue_ok] = draws.scatterer[s];
        if (!(ap_ok && ue_ok))
            continue;
        const Point2 sc = topo.scatterer_positions[s];
        NlosPath p;
        p.scatterer = static_cast<int>(s);
        p.distance = std::max(los_distance_3d(ap, sc, cfg) + horizontal_distance(sc, ue.position), kMinLinkDistance);
        p.aoa = wrap_angle(bearing(ap, sc) - ap_orient);
        p.aod = wrap_angle(bearing(ue.position, sc) - ue_orientation);
        g.nlos.push_back(p);
    }
    return g;
}

// Geometry of every pair, indexed [m * K + k]. Draws are taken pair by pair
// in that order from `rng`.
inline std::vector<PairGeometry> compute_geometry(const Topology &topo, const std::vector<UEState> &ues,
                                                  const SystemConfig &cfg, Rng &rng) {
    const int M = static_cast<int>(topo.ap_positions.size());
    const int K = static_cast<int>(ues.size());
    std::vector<PairGeometry> out(static_cast<std::size_t>(M) * K);
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k) {
            const LinkDraws d = draw_links(topo, m, ues[k], cfg, rng);
            out[static_cast<std::size_t>(m) * K + k] = pair_geometry(topo, m, ues[k], topo.ue_orientations[k], d, cfg);
        }
    return out;
}

// Radial speed of the user with respect to an AP: projection of the user's
// velocity on the AP -> user direction.
inline double radial_velocity(const Point2 &ap, const UEState &ue) {
    const double dx = ue.position.x - ap.x;
    const double dy = ue.position.y - ap.y;
    const double n = std::hypot(dx, dy);
    if (n == 0.0)
        return ue.speed;
    const Point2 v = ue.velocity();
    return (v.x * dx + v.y * dy) / n;
}

} // namespace cfmimo

#endif

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

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cfmimo;
using namespace testing_util;

TEST(LosProbability, KnownValues) {
    EXPECT_DOUBLE_EQ(p_los(10.0), 1.0);
    EXPECT_DOUBLE_EQ(p_los(20.0), 1.0);
    EXPECT_NEAR(p_los(39.0), 20.0 / 39.0 * (1.0 - std::exp(-1.0)) + std::exp(-1.0), 1e-15);
    EXPECT_NEAR(p_los(39.0), 0.6921, 1e-4);
    EXPECT_NEAR(p_los(1e6), 2e-5, 1e-6);
}

TEST(LosProbability, RejectsNonPositiveDistance) {
    EXPECT_THROW(p_los(0.0), DomainError);
    EXPECT_THROW(p_los(-1.0), DomainError);
    EXPECT_THROW(p_los(std::nan("")), DomainError);
}

TEST(LosProbability, NonIncreasingAndBounded) {
    double prev = 1.0;
    for (double d = 0.5; d < 2000.0; d *= 1.05) {
        const double p = p_los(d);
        EXPECT_LE(p, prev + 1e-15);
        EXPECT_GT(p, 0.0);
        EXPECT_LE(p, 1.0);
        prev = p;
    }
}

TEST(Layout, CountsAndBounds) {
    SystemConfig cfg;
    Rng rng(1);
    const Layout l = init_layout(cfg, rng);
    ASSERT_EQ(l.topology.ap_positions.size(), 120u);
    ASSERT_EQ(l.topology.ap_orientations.size(), 120u);
    ASSERT_EQ(l.topology.scatterer_positions.size(), 200u);
    ASSERT_EQ(l.topology.ue_orientations.size(), 20u);
    ASSERT_EQ(l.ues.size(), 20u);
    for (const Point2 &p : l.topology.ap_positions) {
        EXPECT_GE(p.x, 0.0);
        EXPECT_LE(p.x, 850.0);
        EXPECT_GE(p.y, 0.0);
        EXPECT_LE(p.y, 850.0);
    }
    for (double o : l.topology.ap_orientations) {
        EXPECT_GE(o, 0.0);
        EXPECT_LT(o, kTwoPi);
    }
    for (const UEState &ue : l.ues) {
        EXPECT_GE(ue.position.x, 250.0);
        EXPECT_LE(ue.position.x, 600.0);
        EXPECT_GE(ue.position.y, 250.0);
        EXPECT_LE(ue.position.y, 600.0);
        EXPECT_GE(ue.speed, 5.0 / 3.6);
        EXPECT_LE(ue.speed, 10.0 / 3.6);
    }
}

TEST(Layout, DeterministicForSeed) {
    SystemConfig cfg = small_config();
    Rng a(9);
    Rng b(9);
    const Layout la = init_layout(cfg, a);
    const Layout lb = init_layout(cfg, b);
    EXPECT_EQ(la.topology.ap_positions, lb.topology.ap_positions);
    EXPECT_EQ(la.topology.scatterer_positions, lb.topology.scatterer_positions);
    for (std::size_t k = 0; k < la.ues.size(); ++k)
        EXPECT_EQ(la.ues[k].position, lb.ues[k].position);
}

TEST(Layout, ZeroSpeedRange) {
    SystemConfig cfg = small_config();
    cfg.v_min_mps = cfg.v_max_mps = 0.0;
    Rng rng(4);
    for (const UEState &ue : init_layout(cfg, rng).ues)
        EXPECT_EQ(ue.speed, 0.0);
}

TEST(Mobility, StraightStep) {
    UEState ue;
    ue.position = {5.0, 5.0};
    ue.speed = 10.0 / 3.6;
    ue.heading = 0.5 * kPi;
    const UEState next = step_mobility(ue, 2.0);
    EXPECT_NEAR(next.position.x, 5.0, 1e-12);
    EXPECT_NEAR(next.position.y, 10.556, 1e-3);
    EXPECT_EQ(next.speed, ue.speed);
}

TEST(Mobility, ReflectsAtWalls) {
    UEState ue;
    ue.position = {849.0, 5.0};
    ue.speed = 2.0;
    ue.heading = 0.0;
    const UEState next = step_mobility(ue, 1.0, 850.0);
    EXPECT_NEAR(next.position.x, 849.0, 1e-12);
    EXPECT_NEAR(next.heading, kPi, 1e-12);

    ue.position = {5.0, 1.0};
    ue.heading = 1.5 * kPi;
    const UEState down = step_mobility(ue, 1.5, 850.0);
    EXPECT_NEAR(down.position.y, 2.0, 1e-12);
    EXPECT_NEAR(down.heading, 0.5 * kPi, 1e-12);
}

TEST(Mobility, StaysInsideAndKeepsSpeed) {
    Rng rng(12);
    UEState ue;
    ue.position = {400.0, 400.0};
    for (int i = 0; i < 2000; ++i) {
        ue.speed = uniform(rng, 0.0, 50.0);
        ue.heading = uniform(rng, 0.0, kTwoPi);
        const double before = ue.speed;
        ue = step_mobility(ue, 5.0, 850.0);
        ASSERT_GE(ue.position.x, 0.0);
        ASSERT_LE(ue.position.x, 850.0);
        ASSERT_GE(ue.position.y, 0.0);
        ASSERT_LE(ue.position.y, 850.0);
        ASSERT_EQ(ue.speed, before);
    }
}

TEST(Mobility, RadialVelocity) {
    UEState ue;
    ue.position = {10.0, 0.0};
    ue.speed = 3.0;
    ue.heading = 0.0;
    EXPECT_NEAR(radial_velocity({0.0, 0.0}, ue), 3.0, 1e-12);
    ue.heading = 0.5 * kPi;
    EXPECT_NEAR(radial_velocity({0.0, 0.0}, ue), 0.0, 1e-12);
    ue.heading = kPi;
    EXPECT_NEAR(radial_velocity({0.0, 0.0}, ue), -3.0, 1e-12);
}

namespace {

Topology single_ap_topology() {
    Topology t;
    t.ap_positions = {{0.0, 0.0}};
    t.ap_orientations = {0.0};
    t.scatterer_positions = {{0.0, 30.0}, {50.0, 50.0}};
    t.ue_orientations = {kPi};
    return t;
}

} // namespace

TEST(PairGeometry, AlignedArraysSeeZeroAngle) {
    const Topology t = single_ap_topology();
    UEState ue;
    ue.position = {40.0, 0.0};
    LinkDraws d;
    d.los = true;
    d.scatterer = {{true, true}, {true, false}};
    SystemConfig cfg;
    const PairGeometry g = pair_geometry(t, 0, ue, kPi, d, cfg);
    EXPECT_TRUE(g.los_exists);
    EXPECT_NEAR(g.los_aoa, 0.0, 1e-12);
    EXPECT_NEAR(g.los_aod, 0.0, 1e-12);
    EXPECT_NEAR(g.los_distance, std::hypot(40.0, 10.0 - 1.65), 1e-12);
    // Only the scatterer visible from both ends forms a path.
    ASSERT_EQ(g.nlos.size(), 1u);
    EXPECT_EQ(g.nlos[0].scatterer, 0);
    EXPECT_NEAR(g.nlos[0].aoa, 0.5 * kPi, 1e-12);
    EXPECT_NEAR(g.nlos[0].distance, std::hypot(30.0, 10.0 - 1.65) + 50.0, 1e-12);
    EXPECT_NEAR(g.nlos[0].aod, wrap_angle(std::atan2(30.0, -40.0) - kPi), 1e-12);
}

TEST(PairGeometry, ClampsDistanceAndWrapsAngles) {
    const Topology t = single_ap_topology();
    UEState ue;
    ue.position = {0.0, 0.0};
    SystemConfig cfg;
    cfg.h_ap_m = cfg.h_ue_m;
    LinkDraws d;
    d.scatterer = {{true, true}, {true, true}};
    const PairGeometry g = pair_geometry(t, 0, ue, 0.3, d, cfg);
    EXPECT_EQ(g.los_distance, kMinLinkDistance);
    for (const NlosPath &p : g.nlos) {
        EXPECT_GT(p.aoa, -kPi);
        EXPECT_LE(p.aoa, kPi);
        EXPECT_GT(p.aod, -kPi);
        EXPECT_LE(p.aod, kPi);
    }
}

TEST(PairGeometry, RejectsMismatchedDraws) {
    const Topology t = single_ap_topology();
    UEState ue;
    LinkDraws d;
    d.scatterer = {{true, true}};
    EXPECT_THROW(pair_geometry(t, 0, ue, 0.0, d, SystemConfig{}), InternalError);
}

TEST(LinkDraws, ConsumesFixedNumberOfUniforms) {
    SystemConfig cfg = small_config();
    Rng rng(3);
    const Layout l = init_layout(cfg, rng);
    Rng a(100);
    Rng b(100);
    (void)draw_links(l.topology, 0, l.ues[0], cfg, a);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1 + 2 * cfg.n_scatterers; ++i)
        (void)u(b);
    EXPECT_EQ(a(), b());
}

TEST(LinkDraws, ExpectedPathCountMatchesProbabilities) {
    SystemConfig cfg = small_config();
    Rng rng(8);
    const Layout l = init_layout(cfg, rng);
    const UEState &ue = l.ues[1];
    const Point2 ap = l.topology.ap_positions[2];
    double expected = 0.0;
    double var = 0.0;
    for (const Point2 &s : l.topology.scatterer_positions) {
        const double p = p_los(std::hypot(horizontal_distance(ap, s), cfg.h_ap_m - cfg.h_ue_m)) *
                         p_los(std::max(horizontal_distance(ue.position, s), kMinLinkDistance));
        expected += p;
        var += p * (1.0 - p);
    }
    const double p_direct = p_los(std::hypot(horizontal_distance(ap, ue.position), cfg.h_ap_m - cfg.h_ue_m));
    const int trials = 20000;
    double paths = 0.0;
    double los = 0.0;
    Rng draws(55);
    for (int i = 0; i < trials; ++i) {
        const LinkDraws d = draw_links(l.topology, 2, ue, cfg, draws);
        const PairGeometry g = pair_geometry(l.topology, 2, ue, l.topology.ue_orientations[1], d, cfg);
        paths += static_cast<double>(g.nlos.size());
        los += g.los_exists ? 1.0 : 0.0;
    }
    EXPECT_NEAR(paths / trials, expected, 4.0 * std::sqrt(var / trials) + 1e-12);
    EXPECT_NEAR(los / trials, p_direct, 4.0 * std::sqrt(p_direct * (1.0 - p_direct) / trials) + 1e-12);
}

TEST(ComputeGeometry, IndexesPairsByApThenUser) {
    SystemConfig cfg = small_config();
    Rng rng(21);
    const Layout l = init_layout(cfg, rng);
    Rng a(5);
    const auto all = compute_geometry(l.topology, l.ues, cfg, a);
    ASSERT_EQ(all.size(), static_cast<std::size_t>(cfg.M * cfg.K));
    const int m = 3;
    const int k = 2;
    EXPECT_NEAR(all[static_cast<std::size_t>(m) * cfg.K + k].los_distance,
                std::max(std::hypot(horizontal_distance(l.topology.ap_positions[m], l.ues[k].position),
                                    cfg.h_ap_m - cfg.h_ue_m),
                         kMinLinkDistance),
                1e-12);
}

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

// Clustered mmWave MIMO channel between one AP (N_AP-element ULA) and one
// user (N_UE-element ULA):
//
//   H = s * sum_l alpha_l a_AP(aoa_l) a_UE(aod_l)^H  +  s * sqrt(beta_los) e^{j phase} a_AP(aoa) a_UE(aod)^H
//
// with s = sqrt(N_AP N_UE), alpha_l ~ CN(0, beta_l) aged block by block with
// a Jakes-correlated AR(1) process, and the LoS term present only when the
// pair is unblocked.

#ifndef CFMIMO_CHANNEL_HPP
#define CFMIMO_CHANNEL_HPP

#include "cfmimo/common.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/topology.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cfmimo {

struct ArrayDims {
    int n_ap = 1;
    int n_ue = 1;

    double scale() const { return std::sqrt(static_cast<double>(n_ap) * n_ue); }
};

// Unit-norm half-wavelength ULA response.
inline CVector steering_vector(double angle, int n_elements) {
    if (n_elements < 1)
        throw DomainError("steering_vector: n_elements must be >= 1");
    CVector a(n_elements);
    const double step = kPi * std::sin(angle);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n_elements));
    for (int i = 0; i < n_elements; ++i)
        a[i] = std::polar(norm, step * i);
    return a;
}

// UMi street-canyon path loss in dB; d is the 3-D (or total unfolded) path
// length in metres.
inline double path_loss_los_db(double d, double fc_hz) {
    return 32.4 + 21.0 * std::log10(d) + 20.0 * std::log10(fc_hz / 1.0e9);
}

inline double path_loss_nlos_db(double d, double fc_hz) {
    const double nlos = 32.4 + 31.9 * std::log10(d) + 20.0 * std::log10(fc_hz / 1.0e9);
    return std::max(path_loss_los_db(d, fc_hz), nlos);
}

// Linear power gain 10^(-PL/10).
inline double path_loss(double d, bool is_los, double fc_hz) {
    if (!(d > 0.0))
        throw DomainError("path_loss: distance must be positive");
    const double pl = is_los ? path_loss_los_db(d, fc_hz) : path_loss_nlos_db(d, fc_hz);
    return db_to_linear(-pl);
}

inline double doppler_frequency(double radial_velocity_mps, double fc_hz) {
    if (!(fc_hz > 0.0))
        throw DomainError("doppler_frequency: carrier must be positive");
    return std::abs(radial_velocity_mps) * fc_hz / kSpeedOfLight;
}

// Jakes temporal correlation J0(2 pi f_D lag T).
inline double jakes_correlation(double doppler_hz, long lag_samples, double sample_period_s) {
    if (lag_samples < 0)
        throw DomainError("jakes_correlation: lag must be >= 0");
    if (!(sample_period_s > 0.0))
        throw DomainError("jakes_correlation: sampling period must be positive");
    const double x = kTwoPi * doppler_hz * static_cast<double>(lag_samples) * sample_period_s;
    return std::cyl_bessel_j(0.0, x);
}

struct PathComponent {
    double beta = 0.0; // linear power gain
    double aoa = 0.0;  // at the AP
    double aod = 0.0;  // at the UE
    double distance = 0.0;
    bool is_los = false;
};

// Strength-annotated paths of one pair. The LoS component, when unblocked,
// comes first; the rest are the NLoS paths in geometry order.
struct PairChannel {
    std::vector<PathComponent> paths;

    bool has_los() const { return !paths.empty() && paths.front().is_los; }
    std::size_t nlos_count() const { return paths.size() - (has_los() ? 1 : 0); }
    bool empty() const { return paths.empty(); }
};

inline PairChannel path_components(const PairGeometry &g, double fc_hz) {
    PairChannel pc;
    pc.paths.reserve(g.nlos.size() + 1);
    if (g.los_exists)
        pc.paths.push_back({path_loss(g.los_distance, true, fc_hz), g.los_aoa, g.los_aod, g.los_distance, true});
    for (const NlosPath &p : g.nlos)
        pc.paths.push_back({path_loss(p.distance, false, fc_hz), p.aoa, p.aod, p.distance, false});
    return pc;
}

// Fast-fading state of one pair.
struct FadingState {
    std::vector<cdouble> nlos_gains;
    double los_phase = 0.0; // [0, 2pi)
    double doppler_hz = 0.0;
};

// Fresh draws from the stationary distribution.
inline FadingState init_fading(const PairChannel &pc, double doppler_hz, Rng &rng) {
    FadingState st;
    st.doppler_hz = doppler_hz;
    st.nlos_gains.reserve(pc.nlos_count());
    for (const PathComponent &p : pc.paths)
        if (!p.is_los)
            st.nlos_gains.push_back(complex_gaussian(rng, p.beta));
    st.los_phase = uniform(rng, 0.0, kTwoPi);
    return st;
}

// One resource-block step: alpha <- delta alpha + sqrt(1 - delta^2) alpha~,
// and a fresh LoS phase.
inline FadingState evolve_gains(const FadingState &state, const PairChannel &pc, double delta, Rng &rng) {
    if (!(delta >= -1.0 && delta <= 1.0))
        throw DomainError("evolve_gains: correlation outside [-1, 1]");
    if (state.nlos_gains.size() != pc.nlos_count())
        throw InternalError("evolve_gains: gain count does not match path count");
    FadingState next = state;
    const double innovation = std::sqrt(std::max(0.0, 1.0 - delta * delta));
    std::size_t i = 0;
    for (const PathComponent &p : pc.paths) {
        if (p.is_los)
            continue;
        const cdouble fresh = complex_gaussian(rng, p.beta);
        next.nlos_gains[i] = delta * state.nlos_gains[i] + innovation * fresh;
        ++i;
    }
    next.los_phase = uniform(rng, 0.0, kTwoPi);
    return next;
}

inline CMatrix assemble_channel(const PairChannel &pc, const FadingState &state, ArrayDims dims) {
    if (state.nlos_gains.size() != pc.nlos_count())
        throw InternalError("assemble_channel: gain count does not match path count");
    CMatrix h = CMatrix::Zero(dims.n_ap, dims.n_ue);
    const double s = dims.scale();
    std::size_t i = 0;
    for (const PathComponent &p : pc.paths) {
        const cdouble coeff =
            p.is_los ? s * std::polar(std::sqrt(p.beta), state.los_phase) : s * state.nlos_gains[i++];
        h.noalias() += coeff * steering_vector(p.aoa, dims.n_ap) * steering_vector(p.aod, dims.n_ue).adjoint();
    }
    return h;
}

// E[H H^H] = s^2 sum_paths beta a_AP a_AP^H.
inline CMatrix covariance_ap(const PairChannel &pc, ArrayDims dims) {
    CMatrix r = CMatrix::Zero(dims.n_ap, dims.n_ap);
    const double s2 = static_cast<double>(dims.n_ap) * dims.n_ue;
    for (const PathComponent &p : pc.paths) {
        const CVector a = steering_vector(p.aoa, dims.n_ap);
        r.noalias() += (s2 * p.beta) * a * a.adjoint();
    }
    return r;
}

// E[H^H H] = s^2 sum_paths beta a_UE a_UE^H.
inline CMatrix covariance_ue(const PairChannel &pc, ArrayDims dims) {
    CMatrix r = CMatrix::Zero(dims.n_ue, dims.n_ue);
    const double s2 = static_cast<double>(dims.n_ap) * dims.n_ue;
    for (const PathComponent &p : pc.paths) {
        const CVector a = steering_vector(p.aod, dims.n_ue);
        r.noalias() += (s2 * p.beta) * a * a.adjoint();
    }
    return r;
}

} // namespace cfmimo

#endif

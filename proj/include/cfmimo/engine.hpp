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

// Simulation timeline and Monte Carlo campaigns.
//
// A drop is a sequence of slow-fading epochs (tau_s channel uses each), every
// epoch a sequence of ceil(tau_s / tau_c) resource blocks. Per epoch:
//
//   move users -> geometry, path loss, Doppler -> strengths -> association
//   -> power allocation -> long-term / analog beams
//
// and per resource block:
//
//   age gains (or reset them after a geometry change) -> H_mk
//   -> short-term beams -> SINR -> rate sample
//
// Every random quantity comes from a stream keyed by (drop seed, purpose,
// epoch, user), so runs that differ only in scheme, hysteresis or worker
// count consume identical draws.

#ifndef CFMIMO_ENGINE_HPP
#define CFMIMO_ENGINE_HPP

#include "cfmimo/assoc.hpp"
#include "cfmimo/beamform.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/common.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/link.hpp"
#include "cfmimo/topology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace cfmimo {

namespace stream {
inline constexpr std::uint64_t kDrop = 0x10;
inline constexpr std::uint64_t kLayout = 0x11;
inline constexpr std::uint64_t kMobility = 0x12;
inline constexpr std::uint64_t kLinks = 0x13;
inline constexpr std::uint64_t kFading = 0x14;
} // namespace stream

struct RateSample {
    int epoch = 0;
    int block = 0;
    int ue = 0;
    double sinr = 0.0;     // linear
    double rate_bps = 0.0;

    friend bool operator==(const RateSample &, const RateSample &) = default;
};

struct DropDiagnostics {
    long eigen_nonconverged = 0;
    long division_guards = 0;
    long degenerate_beams = 0; // (block, user) evaluations that used a convention vector
    long gain_evolutions = 0;  // AR(1) steps, summed over pairs
    long gain_resets = 0;      // fresh fading draws, summed over pairs
    long geometry_updates = 0; // (epoch, user) geometry recomputations
    long link_redraws = 0;     // (epoch, user) blockage redraws
    long truncated_pairs = 0;  // (block, pair) channels zeroed by far-pair truncation

    DropDiagnostics &operator+=(const DropDiagnostics &o) {
        eigen_nonconverged += o.eigen_nonconverged;
        division_guards += o.division_guards;
        degenerate_beams += o.degenerate_beams;
        gain_evolutions += o.gain_evolutions;
        gain_resets += o.gain_resets;
        geometry_updates += o.geometry_updates;
        link_redraws += o.link_redraws;
        truncated_pairs += o.truncated_pairs;
        return *this;
    }

    friend bool operator==(const DropDiagnostics &, const DropDiagnostics &) = default;
};

struct DropResult {
    int drop = 0;
    std::uint64_t seed = 0;
    std::vector<RateSample> samples;
    std::vector<HandoverEvent> handovers;
    std::vector<long> handovers_per_ue;
    std::vector<ClusterState> clusters; // serving sets per epoch
    DropDiagnostics diagnostics;

    friend bool operator==(const DropResult &, const DropResult &) = default;
};

namespace detail {

// Beams that stay fixed over an epoch for the long-term and analog schemes.
inline BeamformerSet epoch_beams(const SystemConfig &cfg, const std::vector<CMatrix> &r_ap,
                                 const std::vector<CMatrix> &r_ue, const std::vector<PairChannel> &channels,
                                 const ClusterState &cluster, ArrayDims dims) {
    BeamformerSet beams = cfg.scheme == Scheme::Abf ? abf(channels, cluster, dims) : ltb(r_ap, r_ue, cluster, dims);
    if (is_constant_modulus(cfg.scheme))
        apply_constant_modulus(beams);
    return beams;
}

inline long count_degenerate(const BeamformerSet &b) {
    return static_cast<long>(std::count(b.degenerate.begin(), b.degenerate.end(), true));
}

} // namespace detail

inline DropResult run_drop(const SystemConfig &cfg, std::uint64_t drop_seed, int drop_index = 0) {
    validate(cfg);
    const int M = cfg.M;
    const int K = cfg.K;
    const ArrayDims dims{cfg.n_ap, cfg.n_ue};
    const double T = derive_numerology(cfg).t0_s;
    const double dt = epoch_duration_s(cfg);
    const int blocks = static_cast<int>(blocks_per_epoch(cfg));
    const double noise = noise_power(cfg.noise_psd_dbm_hz, cfg.bandwidth_hz, cfg.noise_figure_db);
    const auto pair = [K](int m, int k) { return static_cast<std::size_t>(m) * K + k; };

    DropResult res;
    res.drop = drop_index;
    res.seed = drop_seed;
    res.handovers_per_ue.assign(K, 0);
    DropDiagnostics &diag = res.diagnostics;

    Rng layout_rng = make_stream(drop_seed, stream::kLayout);
    Layout layout = init_layout(cfg, layout_rng);
    const Topology &topo = layout.topology;
    std::vector<UEState> &ues = layout.ues;

    const std::size_t n_pairs = static_cast<std::size_t>(M) * K;
    std::vector<LinkDraws> draws(n_pairs);
    std::vector<PairChannel> channels(n_pairs);
    std::vector<FadingState> fading(n_pairs);
    std::vector<double> delta(n_pairs, 1.0);
    std::vector<CMatrix> r_ap(n_pairs);
    std::vector<CMatrix> r_ue(n_pairs);
    std::vector<CMatrix> h(n_pairs);
    std::vector<bool> truncated(n_pairs, false);
    StrengthMatrix rho = StrengthMatrix::Zero(M, K);
    StrengthMatrix rho_prev = rho;

    std::vector<double> travelled(K, 0.0); // path length since the last link draw

    ClusterState cluster;
    HandoverLedger ledger(K);
    res.samples.reserve(static_cast<std::size_t>(cfg.epochs) * blocks * K);

    for (int q = 0; q < cfg.epochs; ++q) {
        std::vector<bool> geometry_changed(K, false);
        for (int k = 0; k < K; ++k) {
            UEState &ue = ues[k];
            bool moved = false;
            if (q > 0) {
                const UEState next = step_mobility(ue, dt, cfg.ap_area_m);
                moved = !(next.position == ue.position);
                if (moved)
                    travelled[k] += ue.speed * dt;
                ue = next;
                if (cfg.mobility_redraw == MobilityRedraw::Epoch) {
                    Rng mob = make_stream(drop_seed, stream::kMobility, q, k);
                    redraw_velocity(ue, cfg, mob);
                }
            }
            const bool redraw_links =
                q == 0 || cfg.blockage_redraw == BlockageRedraw::EveryEpoch ||
                (cfg.blockage_redraw == BlockageRedraw::OnMove && moved && travelled[k] >= cfg.blockage_distance_m);
            if (redraw_links) {
                travelled[k] = 0.0;
                Rng lr = make_stream(drop_seed, stream::kLinks, q, k);
                for (int m = 0; m < M; ++m)
                    draws[pair(m, k)] = draw_links(topo, m, ue, cfg, lr);
                ++diag.link_redraws;
            }
            if (redraw_links || moved) {
                for (int m = 0; m < M; ++m) {
                    const std::size_t i = pair(m, k);
                    const PairGeometry g = pair_geometry(topo, m, ue, topo.ue_orientations[k], draws[i], cfg);
                    channels[i] = path_components(g, cfg.fc_hz);
                    r_ap[i] = covariance_ap(channels[i], dims);
                    r_ue[i] = covariance_ue(channels[i], dims);
                    rho(m, k) = channel_strength(r_ap[i]);
                }
                geometry_changed[k] = true;
                ++diag.geometry_updates;
            }
            double strongest = 0.0;
            for (int m = 0; m < M; ++m) {
                const std::size_t i = pair(m, k);
                const double fd = doppler_frequency(radial_velocity(topo.ap_positions[m], ue), cfg.fc_hz);
                fading[i].doppler_hz = fd;
                delta[i] = jakes_correlation(fd, cfg.tau_c, T);
                for (const PathComponent &p : channels[i].paths)
                    strongest = std::max(strongest, p.beta);
            }
            for (int m = 0; m < M; ++m) {
                const std::size_t i = pair(m, k);
                double best = 0.0;
                for (const PathComponent &p : channels[i].paths)
                    best = std::max(best, p.beta);
                truncated[i] = cfg.truncate_far_pairs && best < 1e-16 * strongest;
            }
        }

        if (q == 0) {
            cluster = initial_cluster(rho, cfg.n_uc);
        } else {
            const long guards_before = ledger.division_guards;
            AssociationUpdate upd = hysteresis_update(cluster, ledger, rho_prev, rho, cfg.zeta_ho, cfg.n_ho, q);
            cluster = std::move(upd.cluster);
            ledger = std::move(upd.ledger);
            diag.division_guards += ledger.division_guards - guards_before;
        }
        rho_prev = rho;
        res.clusters.push_back(cluster);
        const PowerAllocation power = allocate_power(cluster, cfg.p_dl_w);

        BeamformerSet beams;
        if (!is_short_term(cfg.scheme)) {
            beams = detail::epoch_beams(cfg, r_ap, r_ue, channels, cluster, dims);
            diag.eigen_nonconverged += beams.eigen_nonconverged;
        }

        std::vector<Rng> fade_rng;
        fade_rng.reserve(K);
        for (int k = 0; k < K; ++k)
            fade_rng.push_back(make_stream(drop_seed, stream::kFading, q, k));

        for (int b = 0; b < blocks; ++b) {
            for (int k = 0; k < K; ++k) {
                for (int m = 0; m < M; ++m) {
                    const std::size_t i = pair(m, k);
                    if (b == 0 && geometry_changed[k]) {
                        const double fd = fading[i].doppler_hz;
                        fading[i] = init_fading(channels[i], fd, fade_rng[k]);
                        ++diag.gain_resets;
                    } else {
                        fading[i] = evolve_gains(fading[i], channels[i], delta[i], fade_rng[k]);
                        ++diag.gain_evolutions;
                    }
                    if (truncated[i]) {
                        h[i] = CMatrix::Zero(dims.n_ap, dims.n_ue);
                        ++diag.truncated_pairs;
                    } else {
                        h[i] = assemble_channel(channels[i], fading[i], dims);
                    }
                }
            }
            if (is_short_term(cfg.scheme)) {
                beams = stb(h, cluster, dims);
                if (is_constant_modulus(cfg.scheme))
                    apply_constant_modulus(beams);
                diag.eigen_nonconverged += beams.eigen_nonconverged;
            }
            diag.degenerate_beams += detail::count_degenerate(beams);
            const std::vector<SinrTerms> s = sinr(h, beams, power, cluster, noise);
            for (int k = 0; k < K; ++k)
                res.samples.push_back({q, b, k, s[k].sinr, rate(s[k].sinr, cfg.bandwidth_hz)});
        }
    }

    res.handovers = ledger.events;
    for (int k = 0; k < K; ++k)
        res.handovers_per_ue[k] = ledger.ues[k].handovers;
    return res;
}

// ---- Campaign statistics ------------------------------------------------------

// Inverse of the empirical CDF: smallest sample x with F(x) >= p. Invariant
// under duplication of the sample set. `sorted` must be ascending.
inline double quantile(std::span<const double> sorted, double p) {
    if (sorted.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(sorted.size());
    double rank = std::ceil(p * n - 1e-9);
    rank = std::clamp(rank, 1.0, n);
    return sorted[static_cast<std::size_t>(rank) - 1];
}

inline double ecdf(std::span<const double> sorted, double x) {
    if (sorted.empty())
        return 0.0;
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

struct CdfPoint {
    double rate_bps = 0.0;
    double cdf = 0.0;

    friend bool operator==(const CdfPoint &, const CdfPoint &) = default;
};

inline constexpr int kCdfPoints = 256;

// ECDF evaluated at the quantiles of kCdfPoints equally spaced probability levels.
inline std::vector<CdfPoint> cdf_support(std::span<const double> sorted, int points = kCdfPoints) {
    std::vector<CdfPoint> out;
    if (sorted.empty())
        return out;
    out.reserve(points);
    for (int i = 1; i <= points; ++i) {
        const double x = quantile(sorted, static_cast<double>(i) / points);
        out.push_back({x, ecdf(sorted, x)});
    }
    return out;
}

struct CampaignSummary {
    SystemConfig config;
    std::vector<std::uint64_t> drop_seeds;
    std::vector<DropResult> drops;
    std::vector<double> pooled_rates; // ascending
    double median_rate_bps = std::numeric_limits<double>::quiet_NaN();
    double likely95_rate_bps = std::numeric_limits<double>::quiet_NaN(); // 5th percentile
    long total_handovers = 0;
    std::vector<long> handovers_per_ue;
    double handovers_per_ue_per_minute = 0.0;
    std::vector<CdfPoint> cdf;
    DropDiagnostics diagnostics;
};

inline std::uint64_t drop_seed(std::uint64_t master, int drop) {
    return derive_seed(master, stream::kDrop, static_cast<std::uint64_t>(drop));
}

inline CampaignSummary summarize(const SystemConfig &cfg, std::vector<std::uint64_t> seeds,
                                 std::vector<DropResult> drops) {
    CampaignSummary s;
    s.config = cfg;
    s.drop_seeds = std::move(seeds);
    s.drops = std::move(drops);
    s.handovers_per_ue.assign(cfg.K, 0);
    for (const DropResult &d : s.drops) {
        for (const RateSample &r : d.samples)
            s.pooled_rates.push_back(r.rate_bps);
        s.total_handovers += static_cast<long>(d.handovers.size());
        for (int k = 0; k < cfg.K && k < static_cast<int>(d.handovers_per_ue.size()); ++k)
            s.handovers_per_ue[k] += d.handovers_per_ue[k];
        s.diagnostics += d.diagnostics;
    }
    std::sort(s.pooled_rates.begin(), s.pooled_rates.end());
    s.median_rate_bps = quantile(s.pooled_rates, 0.5);
    s.likely95_rate_bps = quantile(s.pooled_rates, 0.05);
    s.cdf = cdf_support(s.pooled_rates);
    const double minutes = static_cast<double>(cfg.epochs) * epoch_duration_s(cfg) / 60.0;
    const double ue_drops = static_cast<double>(cfg.K) * static_cast<double>(s.drops.size());
    s.handovers_per_ue_per_minute = minutes > 0.0 && ue_drops > 0.0 ? s.total_handovers / ue_drops / minutes : 0.0;
    return s;
}

using ProgressCallback = std::function<void(int done, int total)>;

// Runs one drop per seed on `workers` threads. Results are stored by drop
// index, so the outcome does not depend on scheduling.
inline CampaignSummary run_campaign(const SystemConfig &cfg, std::span<const std::uint64_t> seeds,
                                    int workers = 1, const ProgressCallback &progress = {}) {
    validate(cfg);
    const int n = static_cast<int>(seeds.size());
    std::vector<DropResult> drops(n);
    std::atomic<int> next{0};
    std::atomic<int> done{0};
    std::exception_ptr failure;
    std::mutex mtx;

    auto worker = [&] {
        for (;;) {
            const int d = next.fetch_add(1);
            if (d >= n)
                return;
            try {
                drops[d] = run_drop(cfg, seeds[d], d);
            } catch (...) {
                std::lock_guard lock(mtx);
                if (!failure)
                    failure = std::current_exception();
                next.store(n);
                return;
            }
            const int finished = ++done;
            if (progress) {
                std::lock_guard lock(mtx);
                progress(finished, n);
            }
        }
    };

    const int threads = std::clamp(workers, 1, std::max(n, 1));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return summarize(cfg, std::vector<std::uint64_t>(seeds.begin(), seeds.end()), std::move(drops));
}

inline CampaignSummary run_campaign(const SystemConfig &cfg, const ProgressCallback &progress = {}) {
    validate(cfg);
    std::vector<std::uint64_t> seeds(cfg.drops);
    for (int d = 0; d < cfg.drops; ++d)
        seeds[d] = drop_seed(cfg.seed, d);
    return run_campaign(cfg, seeds, cfg.workers, progress);
}

} // namespace cfmimo

#endif

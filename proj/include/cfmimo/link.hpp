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

#ifndef CFMIMO_LINK_HPP
#define CFMIMO_LINK_HPP

#include "cfmimo/assoc.hpp"
#include "cfmimo/beamform.hpp"
#include "cfmimo/common.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace cfmimo {

// eta(m, k) in watts; M rows, K columns.
struct PowerAllocation {
    Eigen::MatrixXd eta;
    std::vector<double> budget; // per AP, watts
};

// Equal split of each AP's budget over the users it serves.
inline PowerAllocation allocate_power(const ClusterState &cluster, double p_dl_w) {
    if (!(p_dl_w > 0.0))
        throw DomainError("allocate_power: budget must be positive");
    PowerAllocation pa;
    pa.eta = Eigen::MatrixXd::Zero(cluster.M, cluster.K());
    pa.budget.assign(cluster.M, p_dl_w);
    for (int m = 0; m < cluster.M; ++m) {
        const int load = cluster.load(m);
        if (load == 0)
            continue;
        for (int k = 0; k < cluster.K(); ++k)
            if (cluster.serves(m, k))
                pa.eta(m, k) = p_dl_w / load;
    }
    return pa;
}

struct SinrTerms {
    double sinr = 0.0;
    double useful = 0.0;       // watts
    double interference = 0.0; // watts
};

// Downlink SINR of every user with perfect CSI:
//
//   |sum_m a_mk sqrt(eta_mk) v_k^H H_mk^H u_mk|^2
//   ---------------------------------------------------------------------
//   sum_{j != k} |sum_m a_mj sqrt(eta_mj) v_k^H H_mk^H u_mj|^2 + sigma^2
//
// `h` holds H_mk (N_AP x N_UE) indexed [m * K + k]; only pairs whose AP
// serves at least one user are read. Serving pairs in `beams.silent` have no
// channel to steer at and do not transmit.
inline std::vector<SinrTerms> sinr(const std::vector<CMatrix> &h, const BeamformerSet &beams,
                                   const PowerAllocation &power, const ClusterState &cluster, double noise_w) {
    const int M = cluster.M;
    const int K = cluster.K();
    if (static_cast<int>(h.size()) != M * K || static_cast<int>(beams.combiners.size()) != K ||
        power.eta.rows() != M || power.eta.cols() != K)
        throw InternalError("sinr: dimension mismatch");
    if (!(noise_w > 0.0))
        throw DomainError("sinr: noise power must be positive");

    std::vector<SinrTerms> out(K);
    std::vector<cdouble> amplitude(K);
    for (int k = 0; k < K; ++k) {
        std::fill(amplitude.begin(), amplitude.end(), cdouble(0.0, 0.0));
        for (int m = 0; m < M; ++m) {
            if (cluster.load(m) == 0)
                continue;
            const CMatrix &H = h[static_cast<std::size_t>(m) * K + k];
            if (H.cols() != beams.combiners[k].size())
                throw InternalError("sinr: channel and combiner sizes differ");
            // (H v_k)^H u_mj = v_k^H H^H u_mj
            const CVector hv = H * beams.combiners[k];
            for (int j = 0; j < K; ++j)
                if (cluster.serves(m, j) && !beams.silent.contains({m, j})) {
                    const CVector &u = beams.precoder(m, j);
                    if (u.size() != hv.size())
                        throw InternalError("sinr: channel and precoder sizes differ");
                    amplitude[j] += std::sqrt(power.eta(m, j)) * hv.dot(u);
                }
        }
        SinrTerms &t = out[k];
        t.useful = std::norm(amplitude[k]);
        for (int j = 0; j < K; ++j)
            if (j != k)
                t.interference += std::norm(amplitude[j]);
        t.sinr = t.useful / (t.interference + noise_w);
    }
    return out;
}

inline double rate(double sinr_linear, double bandwidth_hz) {
    if (!(sinr_linear >= 0.0))
        throw DomainError("rate: SINR must be >= 0");
    if (!(bandwidth_hz > 0.0))
        throw DomainError("rate: bandwidth must be positive");
    return bandwidth_hz * std::log2(1.0 + sinr_linear);
}

// Thermal noise over the band, watts.
inline double noise_power(double psd_dbm_per_hz, double bandwidth_hz, double noise_figure_db) {
    if (!(bandwidth_hz > 0.0))
        throw DomainError("noise_power: bandwidth must be positive");
    return dbm_to_watt(psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

} // namespace cfmimo

#endif

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

// Precoders u_mk (one per serving pair) and combiners v_k (one per user).
//
//   LTB  dominant eigenvectors of the AP-side covariance / the summed
//        UE-side covariance of the serving cluster
//   STB  same, from the instantaneous H H^H and sum_m H^H H
//   ABF  steering vectors of the strongest path
//   *-CI constant-modulus projection of the DI vectors

#ifndef CFMIMO_BEAMFORM_HPP
#define CFMIMO_BEAMFORM_HPP

#include "cfmimo/assoc.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/common.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/dominant_eig.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace cfmimo {

struct BeamformerSet {
    std::map<std::pair<int, int>, CVector> precoders; // (m, k) -> u_mk
    std::vector<CVector> combiners;                   // [k] -> v_k
    std::vector<bool> degenerate;                     // [k] -> a convention vector was emitted
    std::set<std::pair<int, int>> silent;             // (m, k) whose precoder is a convention vector
    int eigen_nonconverged = 0;

    const CVector &precoder(int m, int k) const { return precoders.at({m, k}); }
};

inline CVector basis_vector(Eigen::Index n) {
    CVector e = CVector::Zero(n);
    e[0] = 1.0;
    return e;
}

// Per-entry modulus 1/sqrt(N) with the phase of the input; zero entries get
// phase 0.
inline CVector constant_modulus(const CVector &b) {
    const Eigen::Index n = b.size();
    CVector out(n);
    const double mag = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        out[i] = b[i] == cdouble(0.0, 0.0) ? cdouble(mag, 0.0) : std::polar(mag, std::arg(b[i]));
    return out;
}

inline void apply_constant_modulus(BeamformerSet &set) {
    for (auto &[key, u] : set.precoders)
        u = constant_modulus(u);
    for (auto &v : set.combiners)
        v = constant_modulus(v);
}

namespace detail {

inline CVector dominant_or_convention(const CMatrix &A, bool &degenerate, int &nonconverged) {
    if (A.cwiseAbs().maxCoeff() == 0.0) {
        degenerate = true;
        return basis_vector(A.rows());
    }
    EigenPair ep = dominant_eigpair(A);
    if (!ep.converged)
        ++nonconverged;
    return std::move(ep.vector);
}

// Shared eigen-beamforming skeleton: `ap_matrix(m, k)` and `ue_matrix(m, k)`
// return the AP-side and UE-side second-moment matrices of a pair.
template <class ApMatrix, class UeMatrix>
BeamformerSet eigen_beams(const ClusterState &cluster, ArrayDims dims, ApMatrix &&ap_matrix, UeMatrix &&ue_matrix) {
    BeamformerSet set;
    const int K = cluster.K();
    set.combiners.resize(K);
    set.degenerate.assign(K, false);
    for (int k = 0; k < K; ++k) {
        bool flag = false;
        CMatrix ue_sum = CMatrix::Zero(dims.n_ue, dims.n_ue);
        for (int m : cluster.serving[k]) {
            bool dead = false;
            set.precoders[{m, k}] = dominant_or_convention(ap_matrix(m, k), dead, set.eigen_nonconverged);
            if (dead) {
                set.silent.insert({m, k});
                flag = true;
            }
            ue_sum += ue_matrix(m, k);
        }
        if (cluster.serving[k].empty())
            flag = true;
        set.combiners[k] = dominant_or_convention(ue_sum, flag, set.eigen_nonconverged);
        set.degenerate[k] = flag;
    }
    return set;
}

} // namespace detail

// Long-term beams from per-pair covariances, indexed [m * K + k].
inline BeamformerSet ltb(const std::vector<CMatrix> &r_ap, const std::vector<CMatrix> &r_ue,
                         const ClusterState &cluster, ArrayDims dims) {
    const int K = cluster.K();
    return detail::eigen_beams(
        cluster, dims, [&](int m, int k) -> const CMatrix & { return r_ap[static_cast<std::size_t>(m) * K + k]; },
        [&](int m, int k) -> const CMatrix & { return r_ue[static_cast<std::size_t>(m) * K + k]; });
}

// Short-term beams from instantaneous channels H_mk (N_AP x N_UE), indexed [m * K + k].
inline BeamformerSet stb(const std::vector<CMatrix> &h, const ClusterState &cluster, ArrayDims dims) {
    const int K = cluster.K();
    return detail::eigen_beams(
        cluster, dims,
        [&](int m, int k) -> CMatrix {
            const CMatrix &H = h[static_cast<std::size_t>(m) * K + k];
            return H * H.adjoint();
        },
        [&](int m, int k) -> CMatrix {
            const CMatrix &H = h[static_cast<std::size_t>(m) * K + k];
            return H.adjoint() * H;
        });
}

// Index of the strongest path of a pair, or -1 when it has none.
inline int strongest_path(const PairChannel &pc) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(pc.paths.size()); ++i)
        if (best < 0 || pc.paths[i].beta > pc.paths[best].beta)
            best = i;
    return best;
}

// Analog beams: each precoder steers at the AP-side angle of its pair's
// strongest path; the combiner steers at the UE-side angle of the strongest
// path among the serving APs.
inline BeamformerSet abf(const std::vector<PairChannel> &channels, const ClusterState &cluster, ArrayDims dims) {
    BeamformerSet set;
    const int K = cluster.K();
    set.combiners.resize(K);
    set.degenerate.assign(K, false);
    for (int k = 0; k < K; ++k) {
        bool flag = false;
        const PathComponent *best_for_ue = nullptr;
        for (int m : cluster.serving[k]) {
            const PairChannel &pc = channels[static_cast<std::size_t>(m) * K + k];
            const int i = strongest_path(pc);
            if (i < 0) {
                set.precoders[{m, k}] = basis_vector(dims.n_ap);
                set.silent.insert({m, k});
                flag = true;
                continue;
            }
            const PathComponent &p = pc.paths[i];
            set.precoders[{m, k}] = steering_vector(p.aoa, dims.n_ap);
            if (best_for_ue == nullptr || p.beta > best_for_ue->beta)
                best_for_ue = &p;
        }
        if (best_for_ue != nullptr) {
            set.combiners[k] = steering_vector(best_for_ue->aod, dims.n_ue);
        } else {
            set.combiners[k] = basis_vector(dims.n_ue);
            flag = true;
        }
        set.degenerate[k] = flag;
    }
    return set;
}

} // namespace cfmimo

#endif

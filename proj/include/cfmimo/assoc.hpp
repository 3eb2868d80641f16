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

// User-centric clustering and hysteresis handover.
//
// Every user is served by the N_UC APs with the largest channel strength
// (dominant eigenvalue of the AP-side covariance). After the initial
// clustering, at every slow-fading epoch q each user compares its weakest
// serving AP m- (strengths of epoch q-1) against the strongest outside AP m+
// (strengths of epoch q):
//
//     (rho_q[m+] - rho_{q-1}[m-]) / rho_{q-1}[m-] > zeta_HO
//
// m- and m+ are re-identified at every epoch. Once the condition has held for
// N_HO + 1 consecutive epochs, the current m- is replaced by the current m+.

#ifndef CFMIMO_ASSOC_HPP
#define CFMIMO_ASSOC_HPP

#include "cfmimo/common.hpp"
#include "cfmimo/dominant_eig.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace cfmimo {

// rho(m, k) for one epoch; M rows, K columns.
using StrengthMatrix = Eigen::MatrixXd;

// Serving sets M_k of every user. Order within a set is insertion order; a
// handover replaces the outgoing AP in place.
struct ClusterState {
    int M = 0;
    std::vector<std::vector<int>> serving; // [k] -> AP indices

    int K() const { return static_cast<int>(serving.size()); }

    bool serves(int m, int k) const {
        return std::find(serving[k].begin(), serving[k].end(), m) != serving[k].end();
    }

    // Number of users served by AP m.
    int load(int m) const {
        int n = 0;
        for (int k = 0; k < K(); ++k)
            n += serves(m, k) ? 1 : 0;
        return n;
    }

    friend bool operator==(const ClusterState &, const ClusterState &) = default;
};

struct HandoverEvent {
    int epoch = 0;
    int ue = 0;
    int ap_out = 0;
    int ap_in = 0;

    friend bool operator==(const HandoverEvent &, const HandoverEvent &) = default;
};

struct UeHysteresis {
    int streak = 0; // consecutive epochs the condition held
    long handovers = 0;

    friend bool operator==(const UeHysteresis &, const UeHysteresis &) = default;
};

struct HandoverLedger {
    std::vector<UeHysteresis> ues;
    std::vector<HandoverEvent> events;
    long division_guards = 0; // evaluations with a zero-strength outgoing AP

    explicit HandoverLedger(int K = 0) : ues(K) {}

    long total_handovers() const { return static_cast<long>(events.size()); }

    friend bool operator==(const HandoverLedger &, const HandoverLedger &) = default;
};

inline double channel_strength(const CMatrix &r_ap) { return dominant_eigpair(r_ap).value; }

// Top-N_UC APs per user by strength, ties to the lower AP index.
inline ClusterState initial_cluster(const StrengthMatrix &rho, int n_uc) {
    const int M = static_cast<int>(rho.rows());
    const int K = static_cast<int>(rho.cols());
    if (n_uc < 1 || n_uc > M)
        throw ConfigError("assoc.N_UC", "must satisfy 1 <= N_UC <= M");
    ClusterState cs;
    cs.M = M;
    cs.serving.resize(K);
    std::vector<int> order(M);
    for (int k = 0; k < K; ++k) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rho(a, k) > rho(b, k); });
        cs.serving[k].assign(order.begin(), order.begin() + n_uc);
    }
    return cs;
}

struct AssociationUpdate {
    ClusterState cluster;
    HandoverLedger ledger;
};

// Relative gain of the best outside AP over the worst serving AP. A dead
// outgoing link gives +inf for any live candidate and NaN (never satisfied)
// when the candidate is dead too.
inline double hysteresis_ratio(double rho_in, double rho_out) {
    if (rho_out == 0.0)
        return rho_in > 0.0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
    return (rho_in - rho_out) / rho_out;
}

inline AssociationUpdate hysteresis_update(const ClusterState &cluster, const HandoverLedger &ledger,
                                           const StrengthMatrix &rho_prev, const StrengthMatrix &rho_curr,
                                           double zeta_ho, int n_ho, int epoch) {
    const int M = cluster.M;
    const int K = cluster.K();
    if (rho_prev.rows() != M || rho_curr.rows() != M || rho_prev.cols() != K || rho_curr.cols() != K ||
        static_cast<int>(ledger.ues.size()) != K)
        throw InternalError("hysteresis_update: dimension mismatch");

    AssociationUpdate out{cluster, ledger};
    for (int k = 0; k < K; ++k) {
        std::vector<int> &set = out.cluster.serving[k];
        UeHysteresis &h = out.ledger.ues[k];

        int m_out = -1;
        for (int m : set)
            if (m_out < 0 || rho_prev(m, k) < rho_prev(m_out, k) ||
                (rho_prev(m, k) == rho_prev(m_out, k) && m < m_out))
                m_out = m;
        int m_in = -1;
        for (int m = 0; m < M; ++m) {
            if (std::find(set.begin(), set.end(), m) != set.end())
                continue;
            if (m_in < 0 || rho_curr(m, k) > rho_curr(m_in, k))
                m_in = m;
        }
        if (m_out < 0 || m_in < 0) {
            h.streak = 0;
            continue;
        }

        if (rho_prev(m_out, k) == 0.0)
            ++out.ledger.division_guards;
        if (!(hysteresis_ratio(rho_curr(m_in, k), rho_prev(m_out, k)) > zeta_ho)) {
            h.streak = 0;
            continue;
        }
        if (++h.streak >= n_ho + 1) {
            *std::find(set.begin(), set.end(), m_out) = m_in;
            ++h.handovers;
            out.ledger.events.push_back({epoch, k, m_out, m_in});
            h.streak = 0;
        }
    }
    return out;
}

} // namespace cfmimo

#endif

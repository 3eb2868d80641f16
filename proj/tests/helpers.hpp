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

#ifndef CFMIMO_TESTS_HELPERS_HPP
#define CFMIMO_TESTS_HELPERS_HPP

#include "cfmimo/cfmimo.hpp"

#include <complex>
#include <vector>

namespace testing_util {

using namespace cfmimo;

inline CMatrix random_complex(Rng &rng, int rows, int cols) {
    CMatrix a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            a(i, j) = complex_gaussian(rng, 1.0);
    return a;
}

// B B^H with B of size n x rank.
inline CMatrix random_psd(Rng &rng, int n, int rank) {
    const CMatrix b = random_complex(rng, n, rank);
    CMatrix a = b * b.adjoint();
    return 0.5 * (a + CMatrix(a.adjoint()));
}

inline CVector random_unit(Rng &rng, int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i)
        v[i] = complex_gaussian(rng, 1.0);
    return v.normalized();
}

// |<a, b>| for unit vectors; 1 when they agree up to a global phase.
inline double alignment(const CVector &a, const CVector &b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }

// Reduced-scale configuration shared by engine-level tests.
inline SystemConfig small_config() {
    SystemConfig c;
    c.M = 12;
    c.K = 4;
    c.n_ap = 4;
    c.n_ue = 2;
    c.n_scatterers = 20;
    c.drops = 2;
    c.epochs = 4;
    c.tau_c = 224;
    c.tau_s = 896;
    c.n_uc = 3;
    return c;
}

inline PathComponent los_path(double beta, double aoa, double aod) { return {beta, aoa, aod, 10.0, true}; }

inline PathComponent nlos_path(double beta, double aoa, double aod) { return {beta, aoa, aod, 50.0, false}; }

} // namespace testing_util

#endif

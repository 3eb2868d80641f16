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

#ifndef CFMIMO_DOMINANT_EIG_HPP
#define CFMIMO_DOMINANT_EIG_HPP

#include "cfmimo/common.hpp"

#include <algorithm>
#include <cmath>

namespace cfmimo {

struct PowerIterationOptions {
    // Upper bound on the matrix squarings applied before iterating. Squaring
    // stops early once the trace-normalised power is numerically rank one.
    int max_squarings = 40;
    int max_iterations = 1000;
    // Stop when ||A v - lambda v|| <= tolerance * max(lambda, trace(A) / n).
    double residual_tolerance = 1e-11;
    double hermitian_tolerance = 1e-9;
    // Perturbation added to the first entry of the all-ones start vector.
    double start_perturbation = 1e-3;
};

struct EigenPair {
    double value = 0.0;
    CVector vector;
    bool converged = true;
    int iterations = 0;
};

namespace detail {

// Rotates v so that its first entry of non-negligible modulus is real positive.
inline void normalize_phase(CVector &v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > 1e-8) {
            v *= std::conj(v[i]) / mag;
            v[i] = cdouble(std::real(v[i]), 0.0);
            return;
        }
    }
}

} // namespace detail

// Largest eigenvalue and its unit eigenvector of a Hermitian PSD matrix.
//
// Power iteration from a fixed start vector, accelerated by repeated squaring
// of the trace-normalised matrix (each squaring doubles the exponent of the
// eigenvalue ratio) until it is numerically rank one, then polished with plain iterations on A until the
// eigen-residual drops below tolerance. The zero matrix returns (0, e_1).
inline EigenPair dominant_eigpair(const CMatrix &A, const PowerIterationOptions &opt = {}) {
    const Eigen::Index n = A.rows();
    if (n == 0 || A.cols() != n)
        throw DomainError("dominant_eigpair: matrix must be square and non-empty");
    if (!A.allFinite())
        throw DomainError("dominant_eigpair: matrix has non-finite entries");

    const double max_abs = A.cwiseAbs().maxCoeff();
    EigenPair out;
    if (max_abs == 0.0) {
        out.vector = CVector::Zero(n);
        out.vector[0] = 1.0;
        return out;
    }
    if ((A - A.adjoint()).cwiseAbs().maxCoeff() > opt.hermitian_tolerance * max_abs)
        throw DomainError("dominant_eigpair: matrix is not Hermitian");

    const double trace = A.diagonal().real().sum();
    const double scale = trace > 0.0 ? trace : max_abs * static_cast<double>(n);

    CVector v = CVector::Ones(n);
    v[0] += opt.start_perturbation;
    v.normalize();

    CMatrix P = A / scale;
    for (int s = 0; s < opt.max_squarings; ++s) {
        // tr(P^2) = ||P||_F^2 = 1 exactly when the normalised P has rank one.
        if (P.squaredNorm() >= 1.0 - 1e-15 * static_cast<double>(n))
            break;
        P = P * P;
        const double t = P.diagonal().real().sum();
        if (!(t > 0.0))
            break;
        P /= t;
    }
    CVector w = P * v;
    const double p_norm = P.cwiseAbs().maxCoeff();
    if (w.norm() <= 1e-6 * p_norm) {
        // Start vector (numerically) orthogonal to the dominant subspace:
        // restart from the strongest column of the powered matrix.
        Eigen::Index best = 0;
        P.colwise().norm().maxCoeff(&best);
        w = P.col(best);
    }
    if (w.norm() > 0.0)
        v = w.normalized();

    const double floor = std::max(0.0, trace / static_cast<double>(n));
    out.converged = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
        w.noalias() = A * v;
        const double lambda = std::real(v.dot(w));
        out.value = lambda;
        out.iterations = it + 1;
        const double residual = (w - lambda * v).norm();
        if (residual <= opt.residual_tolerance * std::max(std::abs(lambda), floor)) {
            out.converged = true;
            break;
        }
        const double wn = w.norm();
        if (wn == 0.0)
            break;
        v = w / wn;
    }
    out.value = std::max(out.value, 0.0);
    detail::normalize_phase(v);
    out.vector = std::move(v);
    return out;
}

} // namespace cfmimo

#endif

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

#ifndef CFMIMO_COMMON_HPP
#define CFMIMO_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace cfmimo {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 3.0e8; // m/s

// Invalid configuration value; carries the offending key when known.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, const std::string &what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string &key() const noexcept { return key_; }

  private:
    std::string key_;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Broken internal consistency (dimension mismatch between cooperating states).
class InternalError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline double horizontal_distance(Point2 a, Point2 b) { return std::hypot(b.x - a.x, b.y - a.y); }

// Bearing of b as seen from a, radians, measured from the +x axis.
inline double bearing(Point2 a, Point2 b) { return std::atan2(b.y - a.y, b.x - a.x); }

// Wraps any finite angle into (-pi, pi].
inline double wrap_angle(double angle) {
    double w = std::remainder(angle, kTwoPi); // in [-pi, pi]
    if (w <= -kPi)
        w += kTwoPi;
    return w;
}

// Wraps any finite angle into [0, 2 pi).
inline double wrap_angle_positive(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0)
        w += kTwoPi;
    if (w >= kTwoPi)
        w = 0.0;
    return w;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

// ---- Random streams ---------------------------------------------------------

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic child seed of (parent, a, b, c). Used to give every
// (purpose, epoch, user) its own independent stream so that draws line up
// across runs that differ only in parameters not consumed by that stream.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(parent);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ (b + 0x632BE59BD9B4E019ULL));
    h = splitmix64(h ^ (c + 0x8CB92BA72F3D8DD7ULL));
    return h;
}

inline Rng make_stream(std::uint64_t parent, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    return Rng(derive_seed(parent, a, b, c));
}

inline double uniform(Rng &rng, double lo, double hi) {
    if (lo == hi)
        return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool bernoulli(Rng &rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

// Zero-mean circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline cdouble complex_gaussian(Rng &rng, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

} // namespace cfmimo

#endif

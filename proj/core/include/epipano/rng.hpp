// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

#include "epipano/grid.hpp"

namespace epipano {

/// Seeded generator with hand-rolled distributions. std::mt19937_64 output
/// is pinned by the standard, and every draw below is arithmetic on raw
/// engine words, so identical seeds give identical sequences on every
/// platform and standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t raw() { return eng_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [lo, hi] inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(uniform01() * static_cast<double>(hi - lo + 1));
  }

  /// Standard normal via Box-Muller (one value per call, no cached state).
  double gaussian() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  Vec3 gaussian3() {
    const double a = gaussian(), b = gaussian(), c = gaussian();
    return {a, b, c};
  }

  /// Isotropic unit vector.
  Vec3 unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, kTwoPi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), z, r * std::sin(phi)};
  }

  /// Uniform random rotation from a uniform unit quaternion.
  Mat3 rotation() {
    const double u1 = uniform01(), u2 = uniform01(), u3 = uniform01();
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    const double qx = a * std::sin(kTwoPi * u2);
    const double qy = a * std::cos(kTwoPi * u2);
    const double qz = b * std::sin(kTwoPi * u3);
    const double qw = b * std::cos(kTwoPi * u3);
    Mat3 m;
    m << 1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qz * qw), 2 * (qx * qz + qy * qw),
        2 * (qx * qy + qz * qw), 1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qx * qw),
        2 * (qx * qz - qy * qw), 2 * (qy * qz + qx * qw), 1 - 2 * (qx * qx + qy * qy);
    return m;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace epipano

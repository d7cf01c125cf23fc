// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epipano {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Equirectangular pixel grid. Width is the longitude axis, height the
/// latitude axis. W >= 2 and H >= 1; a 2:1 aspect is conventional but not
/// required.
struct GridSpec {
  int width = 0;
  int height = 0;

  constexpr bool valid() const { return width >= 2 && height >= 1; }
};

inline void require_valid(const GridSpec& g) {
  if (!g.valid()) throw std::invalid_argument("GridSpec: need W >= 2, H >= 1");
}

/// Continuous pixel position. u wraps modulo the grid width and is kept in
/// [0, W) by wrap(); v spans [-0.5, H - 0.5] with -0.5 at the north pole.
/// Integer coordinates address pixel centers: pixel (i, j) sits exactly at
/// u = i, v = j, and the half-sample phase lives inside the angular
/// transforms below.
struct PixelCoord {
  double u = 0.0;
  double v = 0.0;

  static PixelCoord wrapped(double u, double v, const GridSpec& g) {
    double w = static_cast<double>(g.width);
    double r = std::fmod(u, w);
    if (r < 0.0) r += w;
    if (r >= w) r = 0.0;  // fmod can land on w after the negative fixup
    return {r, v};
  }
};

/// Angular position on the sphere. In DefaultLatitude mode the fields hold
/// longitude in [0, 2pi) and latitude in [-pi/2, pi/2], +y toward latitude
/// +pi/2. In PaperLiteral mode the same fields carry (phi, theta) with
/// theta in [0, pi].
struct SphericalCoord {
  double lon = 0.0;
  double lat = 0.0;
};

/// Pixel-to-angle convention. DefaultLatitude covers the full sphere and is
/// used everywhere; PaperLiteral exists to cross-check printed closed forms
/// and never feeds the mask pipeline.
enum class ConventionMode { DefaultLatitude, PaperLiteral };

/// Unit direction with a checked constructor. from() rejects vectors whose
/// norm strays from 1 by more than 1e-9.
class UnitVec3 {
 public:
  static UnitVec3 from(const Vec3& v) {
    if (std::abs(v.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("UnitVec3: norm deviates from 1 by > 1e-9");
    return UnitVec3(v);
  }
  static UnitVec3 normalized(const Vec3& v) { return UnitVec3(v.normalized()); }

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

 private:
  explicit UnitVec3(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

/// Pixel position to angles.
/// DefaultLatitude: lon = 2pi (u + 0.5) / W mod 2pi, lat = pi/2 - pi (v + 0.5) / H.
/// PaperLiteral: phi = 2pi u / W, theta = pi v / H, exactly as printed.
SphericalCoord pixel_to_spherical(const PixelCoord& p, const GridSpec& g,
                                  ConventionMode mode);

/// Angles to unit direction: (cos(lat) sin(lon), sin(lat), cos(lat) cos(lon)).
/// PaperLiteral uses theta in place of lat with the identical formula.
UnitVec3 spherical_to_direction(const SphericalCoord& s, ConventionMode mode);

/// Unit direction to pixel position; exact inverse of the two maps above in
/// DefaultLatitude mode. At the poles (|y| >= 1 - 1e-12) the longitude is
/// undefined and the result is pinned to u = 0 with v = -0.5 (north) or
/// v = H - 0.5 (south).
PixelCoord direction_to_pixel(const UnitVec3& d, const GridSpec& g,
                              ConventionMode mode);

/// Convenience composition of pixel_to_spherical and spherical_to_direction.
inline UnitVec3 pixel_to_direction(const PixelCoord& p, const GridSpec& g,
                                   ConventionMode mode) {
  return spherical_to_direction(pixel_to_spherical(p, g, mode), mode);
}

}  // namespace epipano

// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include "epipano/grid.hpp"

#include <algorithm>

namespace epipano {

SphericalCoord pixel_to_spherical(const PixelCoord& p, const GridSpec& g,
                                  ConventionMode mode) {
  require_valid(g);
  const double W = g.width, H = g.height;
  if (mode == ConventionMode::PaperLiteral) {
    return {kTwoPi * p.u / W, kPi * p.v / H};
  }
  double lon = std::fmod(kTwoPi * (p.u + 0.5) / W, kTwoPi);
  if (lon < 0.0) lon += kTwoPi;
  if (lon >= kTwoPi) lon = 0.0;
  const double lat = kPi / 2.0 - kPi * (p.v + 0.5) / H;
  return {lon, lat};
}

UnitVec3 spherical_to_direction(const SphericalCoord& s, ConventionMode /*mode*/) {
  // Both modes share the printed formula; only the meaning of s.lat differs.
  const double cl = std::cos(s.lat);
  return UnitVec3::normalized(
      Vec3(cl * std::sin(s.lon), std::sin(s.lat), cl * std::cos(s.lon)));
}

PixelCoord direction_to_pixel(const UnitVec3& d, const GridSpec& g,
                              ConventionMode mode) {
  require_valid(g);
  const double W = g.width, H = g.height;
  const double y = std::clamp(d.y(), -1.0, 1.0);
  if (std::abs(y) >= 1.0 - 1e-12) {
    // Longitude is undefined at the poles; pin u for determinism.
    return {0.0, y > 0.0 ? -0.5 : H - 0.5};
  }
  const double lon = std::atan2(d.x(), d.z());  // (0,0,1) -> 0, (1,0,0) -> pi/2
  const double lat = std::asin(y);
  if (mode == ConventionMode::PaperLiteral) {
    double u = std::fmod(W * lon / kTwoPi, W);
    if (u < 0.0) u += W;
    double v = std::fmod(H * lat / kPi, H);
    if (v < 0.0) v += H;
    return {u, v};
  }
  const double u = W * lon / kTwoPi - 0.5;
  const double v = H * (kPi / 2.0 - lat) / kPi - 0.5;
  return PixelCoord::wrapped(u, v, g);
}

}  // namespace epipano

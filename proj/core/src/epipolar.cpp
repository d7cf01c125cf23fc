// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include "epipano/epipolar.hpp"

#include <algorithm>
#include <limits>

namespace epipano {

Vec3 project_point(const RelativePose& rel, const UnitVec3& p_i) {
  return rel.rotation.m * p_i.vec() + rel.translation;
}

Vec3 epipole(const RelativePose& rel) { return rel.translation; }

EpipolarPlane epipolar_plane(const RelativePose& rel, const PixelCoord& query,
                             const GridSpec& g) {
  const UnitVec3 d = pixel_to_direction(query, g, ConventionMode::DefaultLatitude);
  const Vec3 o = epipole(rel);
  const Vec3 p = project_point(rel, d);
  EpipolarPlane plane;
  plane.normal = o.cross(p);
  plane.degenerate = plane.normal.norm() < EpipolarPlane::kNormEps;
  plane.source_pixel = query;
  return plane;
}

PlaneCoeffs plane_coeffs_literal(const EpipolarPlane& plane) {
  const Vec3& n = plane.normal;
  if (std::abs(n.z()) < 1e-12)
    throw degenerate_error("plane_coeffs_literal: n_z vanishes");
  return {n.x() / n.z(), n.y() / n.z()};
}

double epipolar_v_of_u(double a_prime, double b_prime, double u,
                       const GridSpec& g) {
  require_valid(g);
  if (b_prime == 0.0)
    throw degenerate_error("epipolar_v_of_u: vertical great circle (B' = 0)");
  const double W = g.width, H = g.height;
  const double ang = kTwoPi * u / W;
  double v = -(H / kPi) *
             std::atan((a_prime * std::sin(ang) + std::cos(ang)) / b_prime);
  v = std::fmod(v, H);
  if (v < 0.0) v += H;
  return v;
}

EpipolarSamples sample_epipolar(const EpipolarPlane& plane, int k,
                                const GridSpec& g, const RelativePose& rel,
                                double eps_t) {
  require_valid(g);
  if (k < 1) throw std::invalid_argument("sample_epipolar: K >= 1 required");
  EpipolarSamples out;
  out.k = k;
  out.points.reserve(k);
  const auto mode = ConventionMode::DefaultLatitude;

  if (plane.degenerate) {
    PixelCoord c;
    if (rel.baseline_norm < eps_t) {
      // Zero baseline: the correspondence is the exact rotation reprojection.
      const UnitVec3 d = pixel_to_direction(plane.source_pixel, g, mode);
      c = direction_to_pixel(UnitVec3::normalized(rel.rotation.m * d.vec()), g,
                             mode);
    } else {
      // Query direction parallel to the epipole: the curve collapses there.
      c = direction_to_pixel(UnitVec3::normalized(epipole(rel)), g, mode);
    }
    out.points.assign(k, c);
    return out;
  }

  const Vec3 n = plane.normal.normalized();
  const Vec3 o = epipole(rel);
  Vec3 e1 = o - o.dot(n) * n;  // epipole projected into the plane
  if (e1.norm() < 1e-12) {
    // No usable epipole direction; any deterministic in-plane basis works.
    const Vec3 seed =
        std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    e1 = seed - seed.dot(n) * n;
  }
  e1.normalize();
  const Vec3 e2 = n.cross(e1);
  for (int i = 0; i < k; ++i) {
    const double s = kTwoPi * i / k;
    const Vec3 dir = std::cos(s) * e1 + std::sin(s) * e2;
    out.points.push_back(direction_to_pixel(UnitVec3::normalized(dir), g, mode));
  }
  return out;
}

double min_distance(const PixelCoord& p, const EpipolarSamples& samples,
                    const GridSpec& g, bool wrap_u) {
  if (samples.points.empty())
    throw std::invalid_argument("min_distance: empty sample list");
  const double W = g.width;
  double best = std::numeric_limits<double>::infinity();
  for (const PixelCoord& c : samples.points) {
    double du = std::abs(p.u - c.u);
    if (wrap_u) du = std::min(du, W - du);
    const double dv = p.v - c.v;
    best = std::min(best, du * du + dv * dv);
  }
  return std::sqrt(best);
}

}  // namespace epipano

// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "epipano/pose.hpp"

namespace epipano {

struct degenerate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Epipolar plane through the camera-j origin, represented by its (not
/// necessarily unit) normal in the camera-j frame. The plane offset is zero
/// by construction. degenerate marks |n| < 1e-12: zero baseline, or the
/// query direction parallel to the epipole.
struct EpipolarPlane {
  Vec3 normal = Vec3::Zero();
  bool degenerate = true;
  int source_frame = -1;
  PixelCoord source_pixel;

  static constexpr double kNormEps = 1e-12;
};

/// K pixel positions on the epipolar curve in view j, in sampling order.
struct EpipolarSamples {
  std::vector<PixelCoord> points;
  int k = 0;
};

/// Mask-construction parameters at the feature (latent) grid resolution.
/// tau is the bit threshold in feature pixels; half a cell diagonal by
/// default. eps_t is the baseline norm below which the pure-rotation
/// fallback applies. wrap_u selects the periodic horizontal metric.
struct MaskParams {
  GridSpec feature{64, 32};
  int k = 250;
  double tau = 0.7071067811865476;
  double eps_t = 1e-8;
  bool wrap_u = true;
};

/// R p + t: a camera-i unit direction expressed in the camera-j frame.
Vec3 project_point(const RelativePose& rel, const UnitVec3& p_i);

/// The camera-i origin seen from camera j; equals the relative translation.
Vec3 epipole(const RelativePose& rel);

/// Plane spanned by the epipole o and the projected query direction:
/// n = o x (R dir(query) + t). Degeneracy is data, never an error.
EpipolarPlane epipolar_plane(const RelativePose& rel, const PixelCoord& query,
                             const GridSpec& g);

/// The printed closed-form plane ratios A' = n_x / n_z, B' = n_y / n_z.
/// Throws degenerate_error when |n_z| < 1e-12; callers use the homogeneous
/// normal instead. Cross-check path only.
struct PlaneCoeffs {
  double a_prime = 0.0;
  double b_prime = 0.0;
};
PlaneCoeffs plane_coeffs_literal(const EpipolarPlane& plane);

/// The printed curve v(u) = -(H/pi) atan((A' sin(2pi u/W) + cos(2pi u/W)) / B'),
/// reduced modulo H into [0, H). PaperLiteral pixel convention. Cross-check
/// path only; throws degenerate_error when B' = 0 (vertical great circle).
double epipolar_v_of_u(double a_prime, double b_prime, double u,
                       const GridSpec& g);

/// K pixels uniform in great-circle arc angle. Basis: e1 is the epipole
/// direction projected into the plane, e2 = n x e1, samples at angles
/// 2pi k / K from e1. Degenerate fallbacks emit K copies of one pixel: the
/// rotation-reprojected query when the baseline is below eps_t, else the
/// epipole pixel (query parallel to the epipole).
EpipolarSamples sample_epipolar(const EpipolarPlane& plane, int k,
                                const GridSpec& g, const RelativePose& rel,
                                double eps_t = 1e-8);

/// Minimum Euclidean pixel distance from p to the samples. du is reduced
/// modulo the grid width when wrap_u (the seam-crossing metric); dv is the
/// plain difference.
double min_distance(const PixelCoord& p, const EpipolarSamples& samples,
                    const GridSpec& g, bool wrap_u);

}  // namespace epipano

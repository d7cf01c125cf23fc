// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "epipano/grid.hpp"

namespace epipano {

/// Rotation matrix with validation: RtR = I and det R = +1, both within 1e-8.
struct Rotation3 {
  Mat3 m = Mat3::Identity();

  bool valid(double tol = 1e-8) const {
    return (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(m.determinant() - 1.0) <= tol;
  }
};

struct convention_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pose convention. CamToWorld maps camera coordinates to world coordinates
/// (x_w = R x_c + t); WorldToCam is the inverse map. The tag is explicit and
/// never inferred from data.
enum class Convention { CamToWorld, WorldToCam };

struct CameraPose {
  Rotation3 rotation;
  Vec3 translation = Vec3::Zero();
  Convention convention = Convention::CamToWorld;

  void validate() const {
    if (!rotation.valid())
      throw std::invalid_argument("CameraPose: rotation fails orthonormality");
  }
};

/// Inverts the pose map: (R, t) -> (R^T, -R^T t) with the tag flipped.
/// Involutive up to floating-point roundoff.
CameraPose convert_convention(const CameraPose& pose);

/// Relative motion taking camera-i coordinates to camera-j coordinates:
/// x_j = R x_i + t. baseline_norm caches |t|.
struct RelativePose {
  Rotation3 rotation;
  Vec3 translation = Vec3::Zero();
  double baseline_norm = 0.0;

  static RelativePose make(const Mat3& r, const Vec3& t) {
    return {{r}, t, t.norm()};
  }
};

/// Relative motion from view i to view j: both inputs are normalized to
/// WorldToCam first, then R_ij = R_j R_i^T and t_ij = t_j - R_ij t_i.
RelativePose relative_pose(const CameraPose& pose_i, const CameraPose& pose_j);

/// Composition r2 after r1: x_k = R2 (R1 x_i + t1) + t2.
RelativePose compose(const RelativePose& r2, const RelativePose& r1);

}  // namespace epipano

// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include "epipano/pose.hpp"

namespace epipano {

CameraPose convert_convention(const CameraPose& pose) {
  CameraPose out;
  out.rotation.m = pose.rotation.m.transpose();
  out.translation = -(pose.rotation.m.transpose() * pose.translation);
  out.convention = pose.convention == Convention::CamToWorld
                       ? Convention::WorldToCam
                       : Convention::CamToWorld;
  return out;
}

static CameraPose as_world_to_cam(const CameraPose& pose) {
  return pose.convention == Convention::WorldToCam ? pose
                                                   : convert_convention(pose);
}

RelativePose relative_pose(const CameraPose& pose_i, const CameraPose& pose_j) {
  pose_i.validate();
  pose_j.validate();
  const CameraPose wi = as_world_to_cam(pose_i);
  const CameraPose wj = as_world_to_cam(pose_j);
  const Mat3 r = wj.rotation.m * wi.rotation.m.transpose();
  const Vec3 t = wj.translation - r * wi.translation;
  return RelativePose::make(r, t);
}

RelativePose compose(const RelativePose& r2, const RelativePose& r1) {
  const Mat3 r = r2.rotation.m * r1.rotation.m;
  const Vec3 t = r2.rotation.m * r1.translation + r2.translation;
  return RelativePose::make(r, t);
}

}  // namespace epipano

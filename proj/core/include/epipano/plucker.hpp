// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "epipano/pose.hpp"

namespace epipano {

/// World-space ray through a panorama pixel in Plucker form: unit direction d
/// and moment m = t x d taken about the world origin. m . d = 0 always.
struct PluckerRay {
  Vec3 moment = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();
};

/// Dense H x W ray grid for one frame, row-major, one ray per pixel center.
/// All rays share the camera center: m_k = t x d_k for the common t.
struct PluckerField {
  GridSpec grid;
  int frame_index = 0;
  std::vector<PluckerRay> data;

  const PluckerRay& at(int u, int v) const {
    return data[static_cast<size_t>(v) * grid.width + u];
  }
};

/// Ray through one pixel. The pose must be tagged CamToWorld; WorldToCam
/// input is rejected so the caller converts explicitly.
PluckerRay plucker_ray(const CameraPose& pose, const PixelCoord& p,
                       const GridSpec& g);

/// Full per-pixel field at pixel centers. A WorldToCam pose is converted
/// internally. Output is bitwise identical for any worker-thread count.
PluckerField plucker_field(const CameraPose& pose, const GridSpec& g,
                           int frame_index = 0);

}  // namespace epipano

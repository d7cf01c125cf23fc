// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include "epipano/plucker.hpp"

#include "epipano/parallel.hpp"

namespace epipano {

PluckerRay plucker_ray(const CameraPose& pose, const PixelCoord& p,
                       const GridSpec& g) {
  if (pose.convention != Convention::CamToWorld)
    throw convention_error("plucker_ray: pose must be CamToWorld");
  pose.validate();
  const Vec3 d = pose.rotation.m *
                 pixel_to_direction(p, g, ConventionMode::DefaultLatitude).vec();
  return {pose.translation.cross(d), d};
}

PluckerField plucker_field(const CameraPose& pose, const GridSpec& g,
                           int frame_index) {
  require_valid(g);
  const CameraPose c2w = pose.convention == Convention::CamToWorld
                             ? pose
                             : convert_convention(pose);
  c2w.validate();
  PluckerField field{g, frame_index, {}};
  field.data.resize(static_cast<size_t>(g.width) * g.height);
  const Mat3 r = c2w.rotation.m;
  const Vec3 t = c2w.translation;
  parallel::for_range(g.height, [&](int64_t v0, int64_t v1) {
    for (int64_t v = v0; v < v1; ++v) {
      for (int u = 0; u < g.width; ++u) {
        const Vec3 d =
            r * pixel_to_direction({static_cast<double>(u), static_cast<double>(v)},
                                   g, ConventionMode::DefaultLatitude)
                    .vec();
        field.data[v * g.width + u] = {t.cross(d), d};
      }
    }
  });
  return field;
}

}  // namespace epipano

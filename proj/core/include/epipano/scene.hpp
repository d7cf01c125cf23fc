// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "epipano/pose.hpp"

namespace epipano {

using Color = std::array<uint8_t, 3>;

struct SphereObj {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  Color color{0, 0, 0};
};

/// Two checker colors for one wall of the room box.
struct WallColors {
  Color a{0, 0, 0};
  Color b{0, 0, 0};
};

/// Seeded procedural room: axis-aligned box walls with checkerboard texture
/// and a set of colored spheres. Trajectories stay inside the room and clear
/// of every sphere.
struct Scene {
  uint64_t seed = 0;
  Vec3 room_min = Vec3(-4.0, -1.5, -5.0);
  Vec3 room_max = Vec3(4.0, 1.5, 5.0);
  double checker_cell = 1.0;
  // Wall order: -x, +x, -y, +y, -z, +z (axis * 2 + positive side).
  std::array<WallColors, 6> walls;
  std::vector<SphereObj> spheres;
};

/// Deterministic scene from a seed: the default 8 x 3 x 10 room with 12
/// spheres, all strictly inside the room.
Scene generate_scene(uint64_t seed, int sphere_count = 12);

/// Piecewise-linear camera path with smoothly interpolated yaw; poses are
/// CamToWorld. sampled_indices picks the rendered subset, strictly
/// increasing.
struct Trajectory {
  std::vector<CameraPose> poses;
  int frame_count = 0;
  std::vector<int> sampled_indices;

  std::vector<CameraPose> sampled_poses() const;
};

enum class SampleMode { UniformStride, SeededRandom };

struct generation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Collision-free path through the scene interior. Waypoints and yaws are
/// drawn from the seed; positions interpolate waypoints piecewise linearly
/// and yaw interpolates along the shortest arc. Throws generation_error when
/// no collision-free path is found within bounded retries.
Trajectory generate_trajectory(const Scene& scene, uint64_t seed,
                               int frame_count = 40, int sample = 16,
                               SampleMode sampling = SampleMode::SeededRandom);

/// 8-bit RGB raster, row-major, three bytes per pixel.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;

  uint8_t* px(int u, int v) {
    return rgb.data() + (static_cast<size_t>(v) * width + u) * 3;
  }
  const uint8_t* px(int u, int v) const {
    return rgb.data() + (static_cast<size_t>(v) * width + u) * 3;
  }
};

/// Nearest surface hit along a ray from inside the room; flat shading.
struct RayHit {
  double distance = 0.0;
  Color color{0, 0, 0};
};
RayHit cast_ray(const Scene& scene, const Vec3& origin, const Vec3& dir);

/// Ray-cast ground-truth panorama: one ray per pixel center along the
/// camera direction for that pixel.
Image render_equirect(const Scene& scene, const CameraPose& pose,
                      const GridSpec& g);

/// Six 90-degree perspective faces in order +x, -x, +y, -y, +z, -z, rendered
/// with the same ray caster. Face pixel (a, b) maps to the camera-frame
/// direction of face_basis * (2(a+0.5)/F - 1, 2(b+0.5)/F - 1, 1).
std::array<Image, 6> render_cubemap(const Scene& scene, const CameraPose& pose,
                                    int face_size);

/// Equirectangular resampling of a cubemap: per pixel, pick the face by the
/// direction's dominant axis and bilinear-sample it.
Image cubemap_to_equirect(const std::array<Image, 6>& faces, const GridSpec& g);

struct CorrespondenceObs {
  int frame = 0;  // index into the sampled frame set
  PixelCoord pixel;
  bool visible = false;
};

/// One 3D surface point with its per-frame projections. Visible projections
/// reproject to the stored pixel exactly under the renderer's own model.
struct Correspondence {
  Vec3 point = Vec3::Zero();
  std::vector<CorrespondenceObs> obs;
};

/// Ground-truth correspondences on sphere surfaces and wall checker corners,
/// with per-frame occlusion tests against the sampled poses.
std::vector<Correspondence> extract_correspondences(const Scene& scene,
                                                    const Trajectory& traj,
                                                    const GridSpec& g,
                                                    int count);

}  // namespace epipano

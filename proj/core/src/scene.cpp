// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include "epipano/scene.hpp"

#include <algorithm>
#include <cmath>

#include "epipano/parallel.hpp"
#include "epipano/rng.hpp"

namespace epipano {

namespace {

constexpr double kWallMargin = 0.4;    // camera clearance from walls
constexpr double kSphereMargin = 0.35; // camera clearance beyond sphere radius

Color random_color(Rng& rng) {
  return {static_cast<uint8_t>(rng.uniform_int(30, 225)),
          static_cast<uint8_t>(rng.uniform_int(30, 225)),
          static_cast<uint8_t>(rng.uniform_int(30, 225))};
}

Mat3 rot_y(double yaw) {
  Mat3 m;
  m << std::cos(yaw), 0.0, std::sin(yaw), 0.0, 1.0, 0.0, -std::sin(yaw), 0.0,
      std::cos(yaw);
  return m;
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

}  // namespace

Scene generate_scene(uint64_t seed, int sphere_count) {
  Scene scene;
  scene.seed = seed;
  Rng rng(seed);
  for (auto& wall : scene.walls) {
    wall.a = random_color(rng);
    wall.b = random_color(rng);
  }
  scene.spheres.reserve(sphere_count);
  for (int i = 0; i < sphere_count; ++i) {
    SphereObj s;
    s.radius = rng.uniform(0.25, 0.6);
    for (int axis = 0; axis < 3; ++axis) {
      const double lo = scene.room_min[axis] + s.radius + 0.1;
      const double hi = scene.room_max[axis] - s.radius - 0.1;
      s.center[axis] = rng.uniform(lo, hi);
    }
    s.color = random_color(rng);
    scene.spheres.push_back(s);
  }
  return scene;
}

std::vector<CameraPose> Trajectory::sampled_poses() const {
  std::vector<CameraPose> out;
  out.reserve(sampled_indices.size());
  for (int i : sampled_indices) out.push_back(poses[i]);
  return out;
}

namespace {

bool position_clear(const Scene& scene, const Vec3& p) {
  for (int axis = 0; axis < 3; ++axis) {
    if (p[axis] < scene.room_min[axis] + kWallMargin ||
        p[axis] > scene.room_max[axis] - kWallMargin)
      return false;
  }
  for (const SphereObj& s : scene.spheres) {
    if ((p - s.center).norm() < s.radius + kSphereMargin) return false;
  }
  return true;
}

bool segment_clear(const Scene& scene, const Vec3& a, const Vec3& b) {
  // Endpoints are inside the shrunk box, which is convex, so only spheres
  // can obstruct the segment.
  for (const SphereObj& s : scene.spheres) {
    if (point_segment_distance(s.center, a, b) < s.radius + kSphereMargin)
      return false;
  }
  return true;
}

std::vector<int> pick_indices(Rng& rng, int frame_count, int sample,
                              SampleMode mode) {
  std::vector<int> out;
  out.reserve(sample);
  if (sample == frame_count) {
    for (int i = 0; i < frame_count; ++i) out.push_back(i);
    return out;
  }
  if (mode == SampleMode::UniformStride) {
    // Even spacing, floor semantics: 40 -> 16 gives {0, 2, 5, ..., 39}.
    for (int k = 0; k < sample; ++k)
      out.push_back(sample == 1 ? 0 : k * (frame_count - 1) / (sample - 1));
    return out;
  }
  std::vector<int> pool(frame_count);
  for (int i = 0; i < frame_count; ++i) pool[i] = i;
  for (int i = 0; i < sample; ++i) {
    const int j = static_cast<int>(rng.uniform_int(i, frame_count - 1));
    std::swap(pool[i], pool[j]);
  }
  out.assign(pool.begin(), pool.begin() + sample);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Trajectory generate_trajectory(const Scene& scene, uint64_t seed,
                               int frame_count, int sample,
                               SampleMode sampling) {
  if (frame_count < 1 || sample < 1 || sample > frame_count)
    throw std::invalid_argument(
        "generate_trajectory: need frame_count >= sample >= 1");
  Rng rng(seed);
  constexpr int kWaypoints = 4;
  constexpr int kPathRetries = 200;
  constexpr int kPointRetries = 1000;

  std::vector<Vec3> waypoints;
  bool ok = false;
  for (int attempt = 0; attempt < kPathRetries && !ok; ++attempt) {
    waypoints.clear();
    ok = true;
    for (int i = 0; i < kWaypoints && ok; ++i) {
      bool placed = false;
      for (int t = 0; t < kPointRetries; ++t) {
        Vec3 p;
        for (int axis = 0; axis < 3; ++axis)
          p[axis] = rng.uniform(scene.room_min[axis] + kWallMargin,
                                scene.room_max[axis] - kWallMargin);
        if (!position_clear(scene, p)) continue;
        if (!waypoints.empty() && !segment_clear(scene, waypoints.back(), p))
          continue;
        waypoints.push_back(p);
        placed = true;
        break;
      }
      ok = placed;
    }
  }
  if (!ok)
    throw generation_error(
        "generate_trajectory: no collision-free path within retry budget");

  std::vector<double> yaws(kWaypoints);
  for (double& y : yaws) y = rng.uniform(-kPi, kPi);
  // Unwrap to the shortest arc so interpolation never spins the long way.
  for (int i = 1; i < kWaypoints; ++i) {
    double d = yaws[i] - yaws[i - 1];
    while (d > kPi) d -= kTwoPi;
    while (d < -kPi) d += kTwoPi;
    yaws[i] = yaws[i - 1] + d;
  }

  Trajectory traj;
  traj.frame_count = frame_count;
  traj.poses.reserve(frame_count);
  for (int k = 0; k < frame_count; ++k) {
    const double a = frame_count == 1
                         ? 0.0
                         : static_cast<double>(k) * (kWaypoints - 1) /
                               (frame_count - 1);
    const int seg = std::min(static_cast<int>(a), kWaypoints - 2);
    const double f = a - seg;
    const Vec3 pos = (1.0 - f) * waypoints[seg] + f * waypoints[seg + 1];
    const double yaw = (1.0 - f) * yaws[seg] + f * yaws[seg + 1];
    traj.poses.push_back({{rot_y(yaw)}, pos, Convention::CamToWorld});
  }
  traj.sampled_indices = pick_indices(rng, frame_count, sample, sampling);
  return traj;
}

RayHit cast_ray(const Scene& scene, const Vec3& origin, const Vec3& dir) {
  double best = std::numeric_limits<double>::infinity();
  Color color{0, 0, 0};

  for (const SphereObj& s : scene.spheres) {
    const Vec3 oc = origin - s.center;
    const double b = oc.dot(dir);
    const double c = oc.squaredNorm() - s.radius * s.radius;
    const double disc = b * b - c;
    if (disc < 0.0) continue;
    const double sq = std::sqrt(disc);
    double t = -b - sq;
    if (t <= 1e-9) t = -b + sq;
    if (t > 1e-9 && t < best) {
      best = t;
      color = s.color;
    }
  }

  for (int axis = 0; axis < 3; ++axis) {
    if (dir[axis] == 0.0) continue;
    const bool positive = dir[axis] > 0.0;
    const double bound = positive ? scene.room_max[axis] : scene.room_min[axis];
    const double t = (bound - origin[axis]) / dir[axis];
    if (t <= 1e-9 || t >= best) continue;
    const Vec3 hit = origin + t * dir;
    const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    const int64_t i = static_cast<int64_t>(
        std::floor(hit[a1] / scene.checker_cell));
    const int64_t j = static_cast<int64_t>(
        std::floor(hit[a2] / scene.checker_cell));
    const WallColors& wall = scene.walls[axis * 2 + (positive ? 1 : 0)];
    best = t;
    color = ((i + j) & 1) ? wall.b : wall.a;
  }
  return {best, color};
}

Image render_equirect(const Scene& scene, const CameraPose& pose,
                      const GridSpec& g) {
  require_valid(g);
  const CameraPose c2w = pose.convention == Convention::CamToWorld
                             ? pose
                             : convert_convention(pose);
  Image img{g.width, g.height, {}};
  img.rgb.resize(static_cast<size_t>(g.width) * g.height * 3);
  const Mat3 r = c2w.rotation.m;
  const Vec3 t = c2w.translation;
  parallel::for_range(g.height, [&](int64_t v0, int64_t v1) {
    for (int64_t v = v0; v < v1; ++v) {
      for (int u = 0; u < g.width; ++u) {
        const Vec3 d =
            r * pixel_to_direction({static_cast<double>(u), static_cast<double>(v)},
                                   g, ConventionMode::DefaultLatitude)
                    .vec();
        const RayHit hit = cast_ray(scene, t, d);
        uint8_t* px = img.px(u, static_cast<int>(v));
        px[0] = hit.color[0];
        px[1] = hit.color[1];
        px[2] = hit.color[2];
      }
    }
  });
  return img;
}

namespace {

// Camera-frame direction of face pixel (a, b) at parameter s, t in [-1, 1].
// Face order +x, -x, +y, -y, +z, -z.
Vec3 face_direction(int face, double s, double t) {
  switch (face) {
    case 0: return {1.0, t, -s};
    case 1: return {-1.0, t, s};
    case 2: return {s, 1.0, -t};
    case 3: return {s, -1.0, t};
    case 4: return {s, t, 1.0};
    default: return {-s, t, -1.0};
  }
}

// Inverse of face_direction: face index from the dominant axis, then (s, t).
void direction_to_face(const Vec3& d, int& face, double& s, double& t) {
  const double ax = std::abs(d.x()), ay = std::abs(d.y()), az = std::abs(d.z());
  if (ax >= ay && ax >= az) {
    if (d.x() > 0.0) {
      face = 0; s = -d.z() / d.x(); t = d.y() / d.x();
    } else {
      face = 1; s = -d.z() / d.x(); t = -d.y() / d.x();
    }
  } else if (ay >= az) {
    if (d.y() > 0.0) {
      face = 2; s = d.x() / d.y(); t = -d.z() / d.y();
    } else {
      face = 3; s = -d.x() / d.y(); t = -d.z() / d.y();
    }
  } else {
    if (d.z() > 0.0) {
      face = 4; s = d.x() / d.z(); t = d.y() / d.z();
    } else {
      face = 5; s = d.x() / d.z(); t = -d.y() / d.z();
    }
  }
}

}  // namespace

std::array<Image, 6> render_cubemap(const Scene& scene, const CameraPose& pose,
                                    int face_size) {
  if (face_size < 8)
    throw std::invalid_argument("render_cubemap: face size >= 8 required");
  const CameraPose c2w = pose.convention == Convention::CamToWorld
                             ? pose
                             : convert_convention(pose);
  const Mat3 r = c2w.rotation.m;
  const Vec3 t = c2w.translation;
  std::array<Image, 6> faces;
  for (int f = 0; f < 6; ++f) {
    Image& img = faces[f];
    img.width = img.height = face_size;
    img.rgb.resize(static_cast<size_t>(face_size) * face_size * 3);
    parallel::for_range(face_size, [&](int64_t b0, int64_t b1) {
      for (int64_t b = b0; b < b1; ++b) {
        const double tc = 2.0 * (b + 0.5) / face_size - 1.0;
        for (int a = 0; a < face_size; ++a) {
          const double sc = 2.0 * (a + 0.5) / face_size - 1.0;
          const Vec3 d = (r * face_direction(f, sc, tc)).normalized();
          const RayHit hit = cast_ray(scene, t, d);
          uint8_t* px = img.px(a, static_cast<int>(b));
          px[0] = hit.color[0];
          px[1] = hit.color[1];
          px[2] = hit.color[2];
        }
      }
    });
  }
  return faces;
}

Image cubemap_to_equirect(const std::array<Image, 6>& faces, const GridSpec& g) {
  require_valid(g);
  const int fs = faces[0].width;
  for (const Image& f : faces) {
    if (f.width != fs || f.height != fs)
      throw std::invalid_argument("cubemap_to_equirect: unequal face sizes");
  }
  Image img{g.width, g.height, {}};
  img.rgb.resize(static_cast<size_t>(g.width) * g.height * 3);
  parallel::for_range(g.height, [&](int64_t v0, int64_t v1) {
    for (int64_t v = v0; v < v1; ++v) {
      for (int u = 0; u < g.width; ++u) {
        const Vec3 d =
            pixel_to_direction({static_cast<double>(u), static_cast<double>(v)},
                               g, ConventionMode::DefaultLatitude)
                .vec();
        int face;
        double s, t;
        direction_to_face(d, face, s, t);
        const double a = (s + 1.0) * fs / 2.0 - 0.5;
        const double b = (t + 1.0) * fs / 2.0 - 0.5;
        const Image& src = faces[face];
        const int a0 = std::clamp(static_cast<int>(std::floor(a)), 0, fs - 1);
        const int b0 = std::clamp(static_cast<int>(std::floor(b)), 0, fs - 1);
        const int a1 = std::min(a0 + 1, fs - 1);
        const int b1 = std::min(b0 + 1, fs - 1);
        const double fa = std::clamp(a - a0, 0.0, 1.0);
        const double fb = std::clamp(b - b0, 0.0, 1.0);
        uint8_t* px = img.px(u, static_cast<int>(v));
        for (int c = 0; c < 3; ++c) {
          const double top = (1.0 - fa) * src.px(a0, b0)[c] + fa * src.px(a1, b0)[c];
          const double bot = (1.0 - fa) * src.px(a0, b1)[c] + fa * src.px(a1, b1)[c];
          px[c] = static_cast<uint8_t>(
              std::lround(std::clamp((1.0 - fb) * top + fb * bot, 0.0, 255.0)));
        }
      }
    }
  });
  return img;
}

std::vector<Correspondence> extract_correspondences(const Scene& scene,
                                                    const Trajectory& traj,
                                                    const GridSpec& g,
                                                    int count) {
  if (count < 1)
    throw std::invalid_argument("extract_correspondences: count >= 1 required");
  require_valid(g);
  Rng rng(scene.seed ^ 0x9e3779b97f4a7c15ull);
  const std::vector<CameraPose> cams = traj.sampled_poses();
  std::vector<Correspondence> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Correspondence corr;
    if ((i & 1) == 0 && !scene.spheres.empty()) {
      const SphereObj& s =
          scene.spheres[rng.uniform_int(0, scene.spheres.size() - 1)];
      corr.point = s.center + s.radius * rng.unit_vector();
    } else {
      // Checker corner on a random wall, strictly interior to the face.
      const int wall = static_cast<int>(rng.uniform_int(0, 5));
      const int axis = wall / 2;
      const bool positive = wall & 1;
      const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
      corr.point[axis] = positive ? scene.room_max[axis] : scene.room_min[axis];
      for (int other : {a1, a2}) {
        // Strictly interior corner lattice, a quarter cell off the edges.
        const int64_t kmin = static_cast<int64_t>(std::ceil(
            (scene.room_min[other] + 0.25 * scene.checker_cell) / scene.checker_cell));
        const int64_t kmax = static_cast<int64_t>(std::floor(
            (scene.room_max[other] - 0.25 * scene.checker_cell) / scene.checker_cell));
        corr.point[other] = rng.uniform_int(kmin, kmax) * scene.checker_cell;
      }
    }
    corr.obs.reserve(cams.size());
    for (size_t f = 0; f < cams.size(); ++f) {
      const CameraPose& cam = cams[f];
      const Vec3 to_point = corr.point - cam.translation;
      const double dist = to_point.norm();
      CorrespondenceObs obs;
      obs.frame = static_cast<int>(f);
      if (dist < 1e-9) {
        obs.visible = false;
        corr.obs.push_back(obs);
        continue;
      }
      const Vec3 dir = to_point / dist;
      const RayHit hit = cast_ray(scene, cam.translation, dir);
      obs.visible = hit.distance >= dist - 1e-6;
      const Vec3 d_cam = cam.rotation.m.transpose() * dir;
      obs.pixel = direction_to_pixel(UnitVec3::normalized(d_cam), g,
                                     ConventionMode::DefaultLatitude);
      corr.obs.push_back(obs);
    }
    out.push_back(std::move(corr));
  }
  return out;
}

}  // namespace epipano

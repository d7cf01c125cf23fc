// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "epipano/parallel.hpp"
#include "epipano/plucker.hpp"
#include "epipano/rng.hpp"
#include "test_util.hpp"

namespace epipano {
namespace {

using testutil::forward_pixel;
using testutil::random_c2w;

TEST_SUITE("plucker") {

TEST_CASE("zero translation gives zero moments") {
  const GridSpec g{64, 32};
  const CameraPose pose{{Mat3::Identity()}, Vec3::Zero(),
                        Convention::CamToWorld};
  const PluckerRay ray = plucker_ray(pose, {5.0, 9.0}, g);
  CHECK(ray.moment == Vec3::Zero());
  const auto d = pixel_to_direction({5.0, 9.0}, g,
                                    ConventionMode::DefaultLatitude);
  CHECK(ray.direction == d.vec());
}

TEST_CASE("moment is the cross product of center and direction") {
  const GridSpec g{64, 32};
  // North-pole pixel: direction (0, 1, 0), center offset (1, 0, 0).
  const CameraPose up{{Mat3::Identity()}, Vec3(1.0, 0.0, 0.0),
                      Convention::CamToWorld};
  const PluckerRay r1 = plucker_ray(up, {0.0, -0.5}, g);
  CHECK((r1.moment - Vec3(0.0, 0.0, 1.0)).cwiseAbs().maxCoeff() <= 1e-9);
  // Forward pixel: direction exactly (0, 0, 1), center (1, 2, 3).
  const CameraPose fwd{{Mat3::Identity()}, Vec3(1.0, 2.0, 3.0),
                       Convention::CamToWorld};
  const PluckerRay r2 = plucker_ray(fwd, forward_pixel(g), g);
  CHECK(r2.direction == Vec3(0.0, 0.0, 1.0));
  CHECK(r2.moment == Vec3(2.0, -1.0, 0.0));
}

TEST_CASE("world-to-camera input is rejected, not guessed") {
  const GridSpec g{64, 32};
  const CameraPose w2c{{Mat3::Identity()}, Vec3::Zero(),
                       Convention::WorldToCam};
  CHECK_THROWS_AS(plucker_ray(w2c, {5.0, 9.0}, g), convention_error);
}

TEST_CASE("field construction converts world-to-camera input") {
  const GridSpec g{16, 8};
  Rng rng(21);
  const CameraPose c2w = random_c2w(rng);
  const PluckerField a = plucker_field(c2w, g);
  const PluckerField b = plucker_field(convert_convention(c2w), g);
  REQUIRE(a.data.size() == b.data.size());
  for (size_t i = 0; i < a.data.size(); ++i) {
    // The rotation survives the double transpose exactly; the recovered
    // center R (R^T t) rounds, so moments agree only to working precision.
    CHECK((a.data[i].moment - b.data[i].moment).cwiseAbs().maxCoeff() <=
          1e-12);
    CHECK(a.data[i].direction == b.data[i].direction);
  }
}

TEST_CASE("identity field on a 2x4 grid is eight moment-free rays") {
  const GridSpec g{4, 2};
  const CameraPose id{{Mat3::Identity()}, Vec3::Zero(),
                      Convention::CamToWorld};
  const PluckerField f = plucker_field(id, g);
  REQUIRE(f.data.size() == 8);
  for (const auto& ray : f.data) CHECK(ray.moment == Vec3::Zero());
}

TEST_CASE("field invariants hold for a random pose") {
  const GridSpec g{128, 64};
  Rng rng(22);
  const PluckerField f = plucker_field(random_c2w(rng, 4.0), g);
  double worst_dot = 0.0, worst_norm = 0.0;
  for (const auto& ray : f.data) {
    worst_dot = std::max(worst_dot, std::abs(ray.moment.dot(ray.direction)));
    worst_norm = std::max(worst_norm, std::abs(ray.direction.norm() - 1.0));
  }
  CHECK(worst_dot <= 1e-9);
  CHECK(worst_norm <= 1e-9);
}

TEST_CASE("camera center is recoverable from two rays") {
  // m = t x d means cross(d) t = -m; two non-parallel rays pin t.
  const GridSpec g{128, 64};
  const CameraPose pose{{Mat3::Identity()}, Vec3(1.0, 0.0, 0.0),
                        Convention::CamToWorld};
  const PluckerField f = plucker_field(pose, g);
  const PluckerRay rays[2] = {f.at(3, 7), f.at(50, 20)};
  Eigen::Matrix<double, 6, 3> a;
  Eigen::Matrix<double, 6, 1> b;
  for (int i = 0; i < 2; ++i) {
    const Vec3& d = rays[i].direction;
    Mat3 cross;
    cross << 0.0, -d.z(), d.y(), d.z(), 0.0, -d.x(), -d.y(), d.x(), 0.0;
    a.block<3, 3>(3 * i, 0) = cross;
    b.segment<3>(3 * i) = -rays[i].moment;
  }
  const Vec3 t = a.colPivHouseholderQr().solve(b);
  CHECK((t - Vec3(1.0, 0.0, 0.0)).norm() <= 1e-9);
}

TEST_CASE("camera center recovery works for random poses") {
  const GridSpec g{64, 32};
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const CameraPose pose = random_c2w(rng, 3.0);
    const PluckerField f = plucker_field(pose, g);
    Eigen::Matrix<double, 15, 3> a;
    Eigen::Matrix<double, 15, 1> b;
    for (int i = 0; i < 5; ++i) {
      const PluckerRay& ray = f.at(5 + 11 * i, (3 + 5 * i) % g.height);
      const Vec3& d = ray.direction;
      Mat3 cross;
      cross << 0.0, -d.z(), d.y(), d.z(), 0.0, -d.x(), -d.y(), d.x(), 0.0;
      a.block<3, 3>(3 * i, 0) = cross;
      b.segment<3>(3 * i) = -ray.moment;
    }
    const Vec3 t = a.colPivHouseholderQr().solve(b);
    CHECK((t - pose.translation).norm() <= 1e-9);
  }
}

TEST_CASE("field bytes are identical for any worker-thread count") {
  const GridSpec g{64, 32};
  Rng rng(24);
  const CameraPose pose = random_c2w(rng);
  parallel::set_threads(1);
  const PluckerField one = plucker_field(pose, g);
  parallel::set_threads(5);
  const PluckerField five = plucker_field(pose, g);
  parallel::set_threads(4);  // leave a fixed count behind for later suites
  REQUIRE(one.data.size() == five.data.size());
  for (size_t i = 0; i < one.data.size(); ++i) {
    CHECK(one.data[i].moment == five.data[i].moment);
    CHECK(one.data[i].direction == five.data[i].direction);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace epipano

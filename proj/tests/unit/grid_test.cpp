// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "epipano/grid.hpp"
#include "test_util.hpp"

namespace epipano {
namespace {

using testutil::wrapped_distance;

TEST_SUITE("grid") {

TEST_CASE("grid spec validation") {
  CHECK(GridSpec{2, 1}.valid());
  CHECK(GridSpec{512, 256}.valid());
  CHECK_FALSE(GridSpec{1, 5}.valid());
  CHECK_FALSE(GridSpec{0, 0}.valid());
  CHECK_THROWS_AS(require_valid(GridSpec{1, 5}), std::invalid_argument);
}

TEST_CASE("pixel coordinate wrapping keeps u in [0, W)") {
  const GridSpec g{8, 4};
  CHECK(PixelCoord::wrapped(-1.0, 3.0, g).u == 7.0);
  CHECK(PixelCoord::wrapped(8.0, 3.0, g).u == 0.0);
  CHECK(PixelCoord::wrapped(7.5, 3.0, g).u == 7.5);
  CHECK(PixelCoord::wrapped(17.0, 3.0, g).u == 1.0);
  // A negative value within one ulp of zero must not round up to W itself.
  const double tiny = -1e-18;
  CHECK(PixelCoord::wrapped(tiny, 0.0, g).u == 0.0);
}

TEST_CASE("literal convention maps pixels by the plain ratio") {
  const GridSpec g{512, 256};
  const auto mid =
      pixel_to_spherical({256.0, 128.0}, g, ConventionMode::PaperLiteral);
  CHECK(mid.lon == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(mid.lat == doctest::Approx(kPi / 2.0).epsilon(1e-15));
  const auto zero =
      pixel_to_spherical({0.0, 0.0}, g, ConventionMode::PaperLiteral);
  CHECK(zero.lon == 0.0);
  CHECK(zero.lat == 0.0);
}

TEST_CASE("default convention puts the grid midpoint on the equator") {
  const GridSpec g{512, 256};
  const auto s =
      pixel_to_spherical({255.5, 127.5}, g, ConventionMode::DefaultLatitude);
  CHECK(s.lon == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(s.lat == 0.0);
}

TEST_CASE("spherical directions hit the coordinate axes") {
  const auto fwd = spherical_to_direction({0.0, 0.0},
                                          ConventionMode::DefaultLatitude);
  CHECK(fwd.x() == 0.0);
  CHECK(fwd.y() == 0.0);
  CHECK(fwd.z() == 1.0);
  const auto right = spherical_to_direction({kPi / 2.0, 0.0},
                                            ConventionMode::DefaultLatitude);
  CHECK(right.x() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(right.z()) < 1e-15);
  // The pole direction ignores longitude.
  for (double lon : {0.0, 1.0, 4.0}) {
    const auto up = spherical_to_direction({lon, kPi / 2.0},
                                           ConventionMode::DefaultLatitude);
    CHECK(up.y() == 1.0);
    CHECK(std::abs(up.x()) < 1e-15);
    CHECK(std::abs(up.z()) < 1e-15);
  }
}

TEST_CASE("direction_to_pixel wraps the forward axis to the seam") {
  const GridSpec g{512, 256};
  const auto p = direction_to_pixel(UnitVec3::from({0.0, 0.0, 1.0}), g,
                                    ConventionMode::DefaultLatitude);
  CHECK(p.u == doctest::Approx(511.5).epsilon(1e-15));
  CHECK(p.v == doctest::Approx(127.5).epsilon(1e-15));
}

TEST_CASE("poles pin longitude to zero") {
  const GridSpec g{512, 256};
  const auto north = direction_to_pixel(UnitVec3::from({0.0, 1.0, 0.0}), g,
                                        ConventionMode::DefaultLatitude);
  CHECK(north.u == 0.0);
  CHECK(north.v == -0.5);
  const auto south = direction_to_pixel(UnitVec3::from({0.0, -1.0, 0.0}), g,
                                        ConventionMode::DefaultLatitude);
  CHECK(south.u == 0.0);
  CHECK(south.v == 255.5);
}

TEST_CASE("round trip over every pixel center stays under 1e-9 px") {
  const GridSpec g{128, 64};
  double worst = 0.0;
  for (int v = 0; v < g.height; ++v) {
    for (int u = 0; u < g.width; ++u) {
      const PixelCoord p{static_cast<double>(u), static_cast<double>(v)};
      const auto d = pixel_to_direction(p, g, ConventionMode::DefaultLatitude);
      const auto q = direction_to_pixel(d, g, ConventionMode::DefaultLatitude);
      worst = std::max(worst, wrapped_distance(p, q, g));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("conventions agree up to the half-pixel offset and re-indexing") {
  const GridSpec g{512, 256};
  const PixelCoord canon[4] = {{0.0, 1.0}, {128.0, 64.0}, {256.0, 128.0},
                               {300.25, 200.5}};
  for (const auto& p : canon) {
    const auto lit = pixel_to_spherical(p, g, ConventionMode::PaperLiteral);
    const auto def = pixel_to_spherical({p.u - 0.5, p.v - 0.5}, g,
                                        ConventionMode::DefaultLatitude);
    double dlon = std::fmod(lit.lon - def.lon, kTwoPi);
    if (dlon < -kPi) dlon += kTwoPi;
    if (dlon > kPi) dlon -= kTwoPi;
    CHECK(std::abs(dlon) < 1e-12);
    CHECK(lit.lat == doctest::Approx(kPi / 2.0 - def.lat).epsilon(1e-12));
  }
}

TEST_CASE("unit vector construction rejects non-unit input") {
  CHECK_THROWS_AS(UnitVec3::from({1.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_NOTHROW(UnitVec3::from({0.0, 0.0, 1.0}));
  const auto n = UnitVec3::normalized({3.0, 0.0, 4.0});
  CHECK(n.x() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(n.z() == doctest::Approx(0.8).epsilon(1e-15));
}

}  // TEST_SUITE

}  // namespace
}  // namespace epipano

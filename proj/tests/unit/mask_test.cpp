// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <vector>

#include "epipano/mask.hpp"
#include "epipano/parallel.hpp"
#include "epipano/rng.hpp"
#include "test_util.hpp"

namespace epipano {
namespace {

using testutil::random_c2w;

/// Definitional reference: one slice by direct thresholding of the minimum
/// sample distance at every key pixel. Shares no code with the rasterizer.
std::vector<uint8_t> naive_row(const RelativePose& rel, const PixelCoord& q,
                               const MaskParams& mp) {
  const EpipolarPlane plane = epipolar_plane(rel, q, mp.feature);
  const EpipolarSamples s =
      sample_epipolar(plane, mp.k, mp.feature, rel, mp.eps_t);
  std::vector<uint8_t> out(
      static_cast<size_t>(mp.feature.width) * mp.feature.height, 0);
  for (int v = 0; v < mp.feature.height; ++v)
    for (int u = 0; u < mp.feature.width; ++u) {
      const PixelCoord p{static_cast<double>(u), static_cast<double>(v)};
      if (min_distance(p, s, mp.feature, mp.wrap_u) <= mp.tau)
        out[static_cast<size_t>(v) * mp.feature.width + u] = 1;
    }
  return out;
}

TEST_SUITE("mask") {

TEST_CASE("bit layout is query-major, then key frame, then key pixel") {
  MaskParams mp;
  mp.feature = GridSpec{4, 2};
  EpipolarMaskTensor t(0, 2, mp);
  t.set(3, 1, 5);
  CHECK(t.bit_index(3, 1, 5) == 61);
  CHECK(t.test(3, 1, 5));
  CHECK((t.bytes()[61 / 8] >> (61 % 8)) == 1);
  CHECK(t.popcount() == 1);
}

TEST_CASE("single identity frame masks each pixel to itself") {
  MaskParams mp;
  mp.feature = GridSpec{8, 4};
  const CameraPose pose{{Mat3::Identity()}, Vec3(0.3, 0.1, -0.2),
                        Convention::CamToWorld};
  const EpipolarMaskTensor t = build_mask({pose}, mp, 0);
  const int64_t px = t.pixels();
  CHECK(px == 32);
  CHECK(t.popcount() == px);  // bit density exactly 1 / (h w)
  for (int64_t p = 0; p < px; ++p) {
    CHECK(t.test(p, 0, p));
  }
  CHECK(t.all_rows_nonempty());
}

TEST_CASE("identical poses give identical key-frame slices") {
  MaskParams mp;
  mp.feature = GridSpec{16, 8};
  Rng rng(41);
  const CameraPose pose = random_c2w(rng);
  const EpipolarMaskTensor t = build_mask({pose, pose}, mp, 0);
  for (int64_t p = 0; p < t.pixels(); ++p)
    for (int64_t q = 0; q < t.pixels(); ++q)
      CHECK(t.test(p, 0, q) == t.test(p, 1, q));
}

TEST_CASE("rasterized slices equal the definitional threshold map") {
  MaskParams mp;
  mp.feature = GridSpec{16, 8};
  mp.k = 37;
  mp.tau = 0.9;
  Rng rng(42);
  for (bool wrap : {true, false}) {
    mp.wrap_u = wrap;
    for (int trial = 0; trial < 25; ++trial) {
      RelativePose rel = RelativePose::make(rng.rotation(), rng.gaussian3());
      if (trial % 5 == 0)
        rel = RelativePose::make(rng.rotation(), Vec3::Zero());
      const PixelCoord q{static_cast<double>(rng.uniform_int(0, 15)),
                         static_cast<double>(rng.uniform_int(0, 7))};
      CHECK(mask_row(rel, q, mp) == naive_row(rel, q, mp));
    }
  }
}

TEST_CASE("tensor rows match the single-row helper") {
  MaskParams mp;
  mp.feature = GridSpec{16, 8};
  Rng rng(43);
  std::vector<CameraPose> poses = {random_c2w(rng), random_c2w(rng),
                                   random_c2w(rng)};
  const int query_frame = 1;
  const EpipolarMaskTensor t = build_mask(poses, mp, query_frame);
  CHECK(t.all_rows_nonempty());
  for (int j = 0; j < 3; ++j) {
    const RelativePose rel = relative_pose(poses[query_frame], poses[j]);
    for (int64_t p = 0; p < t.pixels(); ++p) {
      const PixelCoord q{static_cast<double>(p % 16),
                         static_cast<double>(p / 16)};
      const std::vector<uint8_t> row = mask_row(rel, q, mp);
      for (int64_t kpx = 0; kpx < t.pixels(); ++kpx)
        CHECK(t.test(p, j, kpx) == (row[kpx] != 0));
    }
  }
}

TEST_CASE("self-frame diagonal bit is always set") {
  MaskParams mp;
  mp.feature = GridSpec{8, 4};
  Rng rng(44);
  const std::vector<CameraPose> poses = {random_c2w(rng), random_c2w(rng)};
  const EpipolarMaskTensor t = build_mask(poses, mp, 1);
  for (int64_t p = 0; p < t.pixels(); ++p) CHECK(t.test(p, 1, p));
}

TEST_CASE("jaccard endpoints and symmetry") {
  MaskParams mp;
  mp.feature = GridSpec{4, 2};
  EpipolarMaskTensor a(0, 1, mp), b(0, 1, mp);
  CHECK(mask_jaccard(a, b) == 1.0);  // both empty
  a.set(0, 0, 1);
  b.set(0, 0, 1);
  b.set(0, 0, 2);
  CHECK(mask_jaccard(a, a) == 1.0);
  CHECK(mask_jaccard(a, b) == 0.5);  // one-bit subset of a two-bit mask
  CHECK(mask_jaccard(b, a) == 0.5);
  EpipolarMaskTensor c(0, 1, mp);
  c.set(1, 0, 3);
  CHECK(mask_jaccard(a, c) == 0.0);  // disjoint

  const std::vector<double> per_frame = mask_jaccard_per_frame(a, b);
  REQUIRE(per_frame.size() == 1);
  CHECK(per_frame[0] == 0.5);

  EpipolarMaskTensor wrong(0, 2, mp);
  CHECK_THROWS_AS(mask_jaccard(a, wrong), std::invalid_argument);
}

TEST_CASE("scaling every translation leaves the mask bytes unchanged") {
  MaskParams mp;
  mp.feature = GridSpec{16, 8};
  Rng rng(45);
  std::vector<CameraPose> poses = {random_c2w(rng), random_c2w(rng),
                                   random_c2w(rng)};
  std::vector<CameraPose> scaled = poses;
  for (auto& p : scaled) p.translation *= 3.7;
  const EpipolarMaskTensor a = build_mask(poses, mp, 1);
  const EpipolarMaskTensor b = build_mask(scaled, mp, 1);
  CHECK(a.bytes() == b.bytes());
}

TEST_CASE("mask bytes are identical across runs and thread counts") {
  MaskParams mp;
  mp.feature = GridSpec{16, 8};
  Rng rng(46);
  const std::vector<CameraPose> poses = {random_c2w(rng), random_c2w(rng),
                                         random_c2w(rng), random_c2w(rng)};
  parallel::set_threads(1);
  const EpipolarMaskTensor one = build_mask(poses, mp, 0);
  parallel::set_threads(5);
  const EpipolarMaskTensor five = build_mask(poses, mp, 0);
  const EpipolarMaskTensor again = build_mask(poses, mp, 0);
  parallel::set_threads(4);
  CHECK(one.bytes() == five.bytes());
  CHECK(five.bytes() == again.bytes());
}

TEST_CASE("rows grow monotonically with the threshold") {
  MaskParams narrow, base, wide;
  for (MaskParams* mp : {&narrow, &base, &wide}) mp->feature = GridSpec{16, 8};
  narrow.tau = 0.35;
  wide.tau = 1.3;
  Rng rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const RelativePose rel =
        RelativePose::make(rng.rotation(), rng.gaussian3());
    const PixelCoord q{static_cast<double>(rng.uniform_int(0, 15)),
                       static_cast<double>(rng.uniform_int(0, 7))};
    const auto small = mask_row(rel, q, narrow);
    const auto mid = mask_row(rel, q, base);
    const auto large = mask_row(rel, q, wide);
    for (size_t i = 0; i < small.size(); ++i) {
      if (small[i]) CHECK(mid[i]);
      if (mid[i]) CHECK(large[i]);
    }
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace epipano

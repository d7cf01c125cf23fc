// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0
//
// Throughput benchmarks for the hot paths: grid transforms, ray fields,
// curve sampling, mask construction, the oracle, and the attention kernel.

#include <benchmark/benchmark.h>

#include <vector>

#include "epipano/attention.hpp"
#include "epipano/mask.hpp"
#include "epipano/oracle.hpp"
#include "epipano/parallel.hpp"
#include "epipano/plucker.hpp"
#include "epipano/rng.hpp"

namespace epipano {
namespace {

CameraPose bench_pose(Rng& rng) {
  return {{rng.rotation()}, rng.gaussian3(), Convention::CamToWorld};
}

void BM_PixelRoundtrip(benchmark::State& state) {
  const GridSpec g{512, 256};
  double sink = 0.0;
  for (auto _ : state) {
    for (int v = 0; v < g.height; v += 16)
      for (int u = 0; u < g.width; u += 16) {
        const UnitVec3 d = pixel_to_direction(
            {static_cast<double>(u), static_cast<double>(v)}, g,
            ConventionMode::DefaultLatitude);
        sink += direction_to_pixel(d, g, ConventionMode::DefaultLatitude).u;
      }
  }
  benchmark::DoNotOptimize(sink);
  state.SetItemsProcessed(state.iterations() * (g.width / 16) *
                          (g.height / 16));
}
BENCHMARK(BM_PixelRoundtrip);

void BM_PluckerField(benchmark::State& state) {
  Rng rng(1);
  const CameraPose pose = bench_pose(rng);
  const GridSpec g{512, 256};
  for (auto _ : state) {
    const PluckerField field = plucker_field(pose, g);
    benchmark::DoNotOptimize(field.data.data());
  }
  state.SetItemsProcessed(state.iterations() * g.width * g.height);
}
BENCHMARK(BM_PluckerField);

void BM_SampleEpipolar(benchmark::State& state) {
  Rng rng(2);
  const GridSpec g{64, 32};
  const RelativePose rel = relative_pose(bench_pose(rng), bench_pose(rng));
  const EpipolarPlane plane = epipolar_plane(rel, {20.0, 11.0}, g);
  for (auto _ : state) {
    const EpipolarSamples s = sample_epipolar(plane, 250, g, rel);
    benchmark::DoNotOptimize(s.points.data());
  }
  state.SetItemsProcessed(state.iterations() * 250);
}
BENCHMARK(BM_SampleEpipolar);

void BM_MaskRow(benchmark::State& state) {
  Rng rng(3);
  const RelativePose rel = relative_pose(bench_pose(rng), bench_pose(rng));
  const MaskParams params;
  for (auto _ : state) {
    const std::vector<uint8_t> row = mask_row(rel, {20.0, 11.0}, params);
    benchmark::DoNotOptimize(row.data());
  }
}
BENCHMARK(BM_MaskRow);

void BM_BuildMask(benchmark::State& state) {
  Rng rng(4);
  std::vector<CameraPose> poses;
  for (int i = 0; i < 4; ++i) poses.push_back(bench_pose(rng));
  const MaskParams params;
  for (auto _ : state) {
    const EpipolarMaskTensor t = build_mask(poses, params, 0);
    benchmark::DoNotOptimize(t.bytes().data());
  }
  state.SetItemsProcessed(state.iterations() * params.feature.width *
                          params.feature.height * 4);
}
BENCHMARK(BM_BuildMask);

void BM_OracleCase(benchmark::State& state) {
  Rng rng(5);
  const RelativePose rel = relative_pose(bench_pose(rng), bench_pose(rng));
  const MaskParams params;
  const DepthSweep sweep;
  for (auto _ : state) {
    const OracleReport rep = oracle_case(rel, {20.0, 11.0}, params, sweep);
    benchmark::DoNotOptimize(rep.subset_violations);
  }
}
BENCHMARK(BM_OracleCase);

void BM_Attention(benchmark::State& state) {
  Rng rng(6);
  std::vector<CameraPose> poses;
  for (int i = 0; i < 4; ++i) poses.push_back(bench_pose(rng));
  MaskParams params;
  params.feature = GridSpec{16, 8};
  const EpipolarMaskTensor mask = build_mask(poses, params, 0);
  const int c = 8;
  const int64_t hw = mask.pixels();
  AttnTensors t;
  t.q.resize(hw, c);
  t.k.resize(hw * 4, c);
  t.v.resize(hw * 4, c);
  for (int64_t i = 0; i < t.q.size(); ++i) t.q.data()[i] = rng.gaussian();
  for (int64_t i = 0; i < t.k.size(); ++i) t.k.data()[i] = rng.gaussian();
  for (int64_t i = 0; i < t.v.size(); ++i) t.v.data()[i] = rng.gaussian();
  t.head_dim = c;
  for (auto _ : state) {
    const Eigen::MatrixXd out =
        spheric_epi_attn(t, mask, MaskSemantics::AdditiveNegInf);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Attention);

}  // namespace
}  // namespace epipano

BENCHMARK_MAIN();

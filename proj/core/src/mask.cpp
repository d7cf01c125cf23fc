// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include "epipano/mask.hpp"

#include <atomic>
#include <bit>
#include <cmath>

#include "epipano/parallel.hpp"

namespace epipano {

EpipolarMaskTensor::EpipolarMaskTensor(int query_frame, int n_frames,
                                       MaskParams params)
    : query_frame_(query_frame), n_frames_(n_frames), params_(params) {
  require_valid(params_.feature);
  if (n_frames < 1) throw std::invalid_argument("mask: N >= 1 required");
  if (query_frame < 0 || query_frame >= n_frames)
    throw std::invalid_argument("mask: query frame out of range");
  if (!(params_.tau > 0.0)) throw std::invalid_argument("mask: tau > 0 required");
  if (params_.k < 1) throw std::invalid_argument("mask: K >= 1 required");
  bit_count_ = pixels() * n_frames_ * pixels();
  bytes_.assign(static_cast<size_t>((bit_count_ + 7) / 8), 0);
}

void EpipolarMaskTensor::set(int64_t query_pixel, int key_frame,
                             int64_t key_pixel) {
  const int64_t b = bit_index(query_pixel, key_frame, key_pixel);
  std::atomic_ref<uint8_t> byte(bytes_[b >> 3]);
  byte.fetch_or(static_cast<uint8_t>(1u << (b & 7)),
                std::memory_order_relaxed);
}

int64_t EpipolarMaskTensor::popcount() const {
  int64_t n = 0;
  for (uint8_t b : bytes_) n += std::popcount(b);
  return n;
}

bool EpipolarMaskTensor::all_rows_nonempty() const {
  const int64_t hw = pixels();
  for (int64_t qp = 0; qp < hw; ++qp) {
    for (int j = 0; j < n_frames_; ++j) {
      bool any = false;
      for (int64_t kp = 0; kp < hw && !any; ++kp) any = test(qp, j, kp);
      if (!any) return false;
    }
  }
  return true;
}

namespace {

// Marks every key-pixel center within tau of the sample. Centers live on the
// integer lattice; u wraps modulo w when wrap_u, v has no vertical wrap and
// off-grid rows are skipped. Equivalent to thresholding min_distance: some
// sample within tau iff the minimum over samples is within tau.
template <typename Setter>
void rasterize_sample(const PixelCoord& s, const MaskParams& mp, Setter&& set) {
  const int w = mp.feature.width, h = mp.feature.height;
  const double tau2 = mp.tau * mp.tau;
  const int reach = static_cast<int>(std::floor(mp.tau)) + 1;
  const int cu0 = static_cast<int>(std::floor(s.u));
  const int cv0 = static_cast<int>(std::floor(s.v));
  for (int cv = cv0 - reach + 1; cv <= cv0 + reach; ++cv) {
    if (cv < 0 || cv >= h) continue;
    const double dv = cv - s.v;
    for (int cu = cu0 - reach + 1; cu <= cu0 + reach; ++cu) {
      double du = std::abs(cu - s.u);
      if (mp.wrap_u) du = std::min(du, w - du);
      if (du * du + dv * dv > tau2) continue;
      int cuw = cu;
      if (mp.wrap_u) {
        cuw %= w;
        if (cuw < 0) cuw += w;
      } else if (cuw < 0 || cuw >= w) {
        continue;  // no seam wrap: columns off the grid do not exist
      }
      set(static_cast<int64_t>(cv) * w + cuw);
    }
  }
}

}  // namespace

std::vector<uint8_t> mask_row(const RelativePose& rel, const PixelCoord& query,
                              const MaskParams& params) {
  require_valid(params.feature);
  if (!(params.tau > 0.0)) throw std::invalid_argument("mask: tau > 0 required");
  if (params.k < 1) throw std::invalid_argument("mask: K >= 1 required");
  std::vector<uint8_t> row(
      static_cast<size_t>(params.feature.width) * params.feature.height, 0);
  const EpipolarPlane plane = epipolar_plane(rel, query, params.feature);
  const EpipolarSamples samples =
      sample_epipolar(plane, params.k, params.feature, rel, params.eps_t);
  for (const PixelCoord& s : samples.points)
    rasterize_sample(s, params, [&](int64_t kp) { row[kp] = 1; });
  return row;
}

EpipolarMaskTensor build_mask(const std::vector<CameraPose>& poses,
                              const MaskParams& params, int query_frame) {
  const int n = static_cast<int>(poses.size());
  EpipolarMaskTensor out(query_frame, n, params);
  std::vector<RelativePose> rels;
  rels.reserve(n);
  for (int j = 0; j < n; ++j) rels.push_back(relative_pose(poses[query_frame], poses[j]));

  const GridSpec g = params.feature;
  const int64_t hw = out.pixels();
  parallel::for_range(hw, [&](int64_t qp0, int64_t qp1) {
    for (int64_t qp = qp0; qp < qp1; ++qp) {
      const PixelCoord query{static_cast<double>(qp % g.width),
                             static_cast<double>(qp / g.width)};
      for (int j = 0; j < n; ++j) {
        const EpipolarPlane plane = epipolar_plane(rels[j], query, g);
        const EpipolarSamples samples =
            sample_epipolar(plane, params.k, g, rels[j], params.eps_t);
        for (const PixelCoord& s : samples.points)
          rasterize_sample(s, params,
                           [&](int64_t kp) { out.set(qp, j, kp); });
      }
    }
  });
  return out;
}

static void require_compatible(const EpipolarMaskTensor& a,
                               const EpipolarMaskTensor& b) {
  if (a.n_frames() != b.n_frames() || a.query_frame() != b.query_frame() ||
      a.feature().width != b.feature().width ||
      a.feature().height != b.feature().height)
    throw std::invalid_argument("mask_jaccard: shape or frame mismatch");
}

double mask_jaccard(const EpipolarMaskTensor& a, const EpipolarMaskTensor& b) {
  require_compatible(a, b);
  int64_t inter = 0, uni = 0;
  const auto& ab = a.bytes();
  const auto& bb = b.bytes();
  for (size_t i = 0; i < ab.size(); ++i) {
    inter += std::popcount(static_cast<uint8_t>(ab[i] & bb[i]));
    uni += std::popcount(static_cast<uint8_t>(ab[i] | bb[i]));
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<double> mask_jaccard_per_frame(const EpipolarMaskTensor& a,
                                           const EpipolarMaskTensor& b) {
  require_compatible(a, b);
  const int64_t hw = a.pixels();
  const int n = a.n_frames();
  std::vector<int64_t> inter(n, 0), uni(n, 0);
  const auto& ab = a.bytes();
  const auto& bb = b.bytes();
  for (int64_t qp = 0; qp < hw; ++qp) {
    for (int j = 0; j < n; ++j) {
      const int64_t begin = a.bit_index(qp, j, 0);
      const int64_t end = begin + hw;
      if ((begin & 7) == 0 && (end & 7) == 0) {
        for (int64_t byte = begin >> 3; byte < end >> 3; ++byte) {
          inter[j] += std::popcount(static_cast<uint8_t>(ab[byte] & bb[byte]));
          uni[j] += std::popcount(static_cast<uint8_t>(ab[byte] | bb[byte]));
        }
      } else {
        for (int64_t bit = begin; bit < end; ++bit) {
          const bool x = (ab[bit >> 3] >> (bit & 7)) & 1;
          const bool y = (bb[bit >> 3] >> (bit & 7)) & 1;
          inter[j] += x && y;
          uni[j] += x || y;
        }
      }
    }
  }
  std::vector<double> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j)
    out.push_back(uni[j] == 0 ? 1.0
                              : static_cast<double>(inter[j]) /
                                    static_cast<double>(uni[j]));
  return out;
}

}  // namespace epipano

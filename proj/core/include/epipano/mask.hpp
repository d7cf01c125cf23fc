// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "epipano/epipolar.hpp"

namespace epipano {

/// Bit-packed attention mask for one query frame: shape (h*w query pixels,
/// N key frames, h*w key pixels), least-significant-bit-first within each
/// byte, index order (query pixel row-major, key frame, key pixel
/// row-major). Every (query pixel, key frame) slice carries at least one
/// set bit, and the self-attention diagonal bit is always set.
class EpipolarMaskTensor {
 public:
  EpipolarMaskTensor() = default;
  EpipolarMaskTensor(int query_frame, int n_frames, MaskParams params);

  int query_frame() const { return query_frame_; }
  int n_frames() const { return n_frames_; }
  const MaskParams& params() const { return params_; }
  const GridSpec& feature() const { return params_.feature; }

  int64_t bit_count() const { return bit_count_; }
  int64_t pixels() const {
    return static_cast<int64_t>(params_.feature.width) * params_.feature.height;
  }

  int64_t bit_index(int64_t query_pixel, int key_frame,
                    int64_t key_pixel) const {
    return (query_pixel * n_frames_ + key_frame) * pixels() + key_pixel;
  }
  bool test(int64_t query_pixel, int key_frame, int64_t key_pixel) const {
    const int64_t b = bit_index(query_pixel, key_frame, key_pixel);
    return (bytes_[b >> 3] >> (b & 7)) & 1;
  }
  /// Thread-safe commutative set; the packed stream is scheduling-independent.
  void set(int64_t query_pixel, int key_frame, int64_t key_pixel);

  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t>& bytes() { return bytes_; }

  /// Set bits in the whole tensor.
  int64_t popcount() const;
  /// True when every (query pixel, key frame) slice has at least one bit.
  bool all_rows_nonempty() const;

 private:
  int query_frame_ = 0;
  int n_frames_ = 0;
  MaskParams params_;
  int64_t bit_count_ = 0;
  std::vector<uint8_t> bytes_;
};

/// Builds the mask for query frame i against all N key frames: bit (p, j, q)
/// is set iff the key pixel center q lies within tau of the K epipolar curve
/// samples of query pixel p in frame j (minimum distance, wrapped u). The
/// j = i pair has an identity relative pose and takes the zero-baseline
/// fallback, giving a tau-disk around p itself. Deterministic for any
/// worker-thread count.
EpipolarMaskTensor build_mask(const std::vector<CameraPose>& poses,
                              const MaskParams& params, int query_frame);

/// One (query pixel, key frame) slice of the analytic mask as a dense
/// row-major byte map (1 = attended), computed by the same sampling and
/// rasterization path build_mask uses. rel must already be the query-to-key
/// relative pose.
std::vector<uint8_t> mask_row(const RelativePose& rel, const PixelCoord& query,
                              const MaskParams& params);

/// |a AND b| / |a OR b| over the full payload; 1.0 when both are empty.
/// Shapes, frame counts and query frames must match.
double mask_jaccard(const EpipolarMaskTensor& a, const EpipolarMaskTensor& b);

/// Per-key-frame Jaccard values, same contract as mask_jaccard.
std::vector<double> mask_jaccard_per_frame(const EpipolarMaskTensor& a,
                                           const EpipolarMaskTensor& b);

}  // namespace epipano

// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "epipano/mask.hpp"

namespace epipano {

/// Log-uniform depth ladder along a query ray, in scene units. The spacing
/// covers the near-epipole and near-infinity regimes that a linear ladder
/// misses.
struct DepthSweep {
  double lambda_min = 1e-2;
  double lambda_max = 1e3;
  int count = 10000;

  /// The ladder, smallest first; count = 1 degenerates to {lambda_min}.
  /// Throws std::invalid_argument unless 0 < lambda_min < lambda_max and
  /// count >= 1.
  std::vector<double> depths() const;
};

/// One oracle-stamped mask cell that the analytic mask left clear, with
/// everything needed to replay the case offline: the relative pose, the
/// query pixel, the depth whose projection stamped the cell, the projected
/// curve point, and the cell itself.
struct OracleViolation {
  int key_frame = 0;
  PixelCoord query;
  double depth = 0.0;
  PixelCoord center;
  int miss_u = 0;
  int miss_v = 0;
  Mat3 rel_rotation = Mat3::Identity();
  Vec3 rel_translation = Vec3::Zero();
};

/// Aggregate over every checked (query pixel, key frame) pair.
/// max_plane_residual is max |n_hat . dir(projected pixel)| over all swept
/// depths with a well-defined plane; max_curve_distance_px is the farthest
/// any projected point sits from the K analytic curve samples, in feature
/// pixels (bounded by the arc sampling density, not by precision).
struct OracleReport {
  int64_t cases = 0;
  double max_plane_residual = 0.0;
  double max_curve_distance_px = 0.0;
  int64_t subset_violations = 0;
  std::vector<OracleViolation> violations;
  double runtime_seconds = 0.0;
};

/// Ground-truth epipolar locus by brute force: projects X_i = lambda dir(query)
/// into view j as direction_to_pixel(normalize(R X_i + t)) for each sweep
/// depth. Built from pose algebra and grid transforms only; shares no code
/// with the analytic curve machinery. Depths whose projected point collapses
/// onto the camera-j center (norm < 1e-12) are skipped. Throws
/// degenerate_error when the baseline norm is below eps_t.
std::vector<PixelCoord> ray_projection_oracle(const RelativePose& rel,
                                              const PixelCoord& query,
                                              const GridSpec& g,
                                              const DepthSweep& sweep,
                                              double eps_t = 1e-8);

/// Residuals of the analytic curve against the brute-force locus for one
/// (pose pair, query pixel) case. Throws degenerate_error for a zero
/// baseline or a query direction parallel to the epipole.
struct CurveCheck {
  double max_plane_residual = 0.0;
  double max_distance_px = 0.0;
};
CurveCheck verify_curve(const RelativePose& rel, const PixelCoord& query,
                        const GridSpec& g, const DepthSweep& sweep, int k = 250,
                        bool wrap_u = true);

/// Subset check for a single (pose pair, query pixel) case: stamps a tau-disk
/// around every brute-force projection with an independent rasterizer and
/// requires each stamped cell to be set in the analytic mask row. A baseline
/// below params.eps_t switches the ground truth to the single
/// rotation-reprojected point. cases = 1 in the report; violations carry
/// key_frame = 1 (the key view of the pair).
OracleReport oracle_case(const RelativePose& rel, const PixelCoord& query,
                         const MaskParams& params, const DepthSweep& sweep);

/// Whole-tensor subset check: builds the analytic mask for query_frame and
/// runs oracle_case logic for every (query pixel, key frame) pair against
/// the tensor bits. Work scales as pixels x frames x sweep.count x K; pass a
/// reduced sweep on large grids. Violation aggregation is order-independent
/// (sorted by case key), so the result is identical for any worker-thread
/// count.
OracleReport verify_mask_subset(const std::vector<CameraPose>& poses,
                                const MaskParams& params, int query_frame,
                                const DepthSweep& sweep = DepthSweep{});

/// Line-delimited text form: one summary line, then one line per violation
/// with full reproduction parameters, in sorted order.
std::vector<std::string> report_lines(const OracleReport& report);

}  // namespace epipano

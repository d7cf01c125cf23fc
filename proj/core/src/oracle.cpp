// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include "epipano/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>

#include "epipano/parallel.hpp"

// Layering: the ground-truth locus and the oracle's own disk stamping use
// pose algebra and grid transforms only. The analytic plane, samples and
// mask bits appear in this file strictly as the objects under test.

namespace epipano {

std::vector<double> DepthSweep::depths() const {
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min))
    throw std::invalid_argument("DepthSweep: need 0 < lambda_min < lambda_max");
  if (count < 1) throw std::invalid_argument("DepthSweep: count >= 1");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(count));
  const double lo = std::log(lambda_min), hi = std::log(lambda_max);
  for (int i = 0; i < count; ++i) {
    const double f =
        count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out.push_back(std::exp(std::lerp(lo, hi, f)));
  }
  return out;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Row-span disk stamp: walks the integer rows within tau of the center and
// marks every cell center satisfying du^2 + dv^2 <= tau^2, du wrapped
// modulo W when wrap_u. Deliberately a different walk than the mask
// module's fixed-window rasterizer; the predicate is the shared metric
// definition, not shared code.
template <typename Hit>
void stamp_disk(const PixelCoord& c, const GridSpec& g, double tau,
                bool wrap_u, Hit&& hit) {
  const int w = g.width, h = g.height;
  const double tau2 = tau * tau;
  const int v0 = std::max(static_cast<int>(std::ceil(c.v - tau)), 0);
  const int v1 = std::min(static_cast<int>(std::floor(c.v + tau)), h - 1);
  for (int cv = v0; cv <= v1; ++cv) {
    const double dv = cv - c.v;
    const double span2 = tau2 - dv * dv;
    if (span2 < 0.0) continue;
    const double span = std::sqrt(span2);
    int u0, u1;
    if (wrap_u && 2.0 * span + 3.0 >= w) {
      u0 = 0;  // the whole row is in reach; avoids duplicate wrapped hits
      u1 = w - 1;
    } else {
      u0 = static_cast<int>(std::floor(c.u - span)) - 1;
      u1 = static_cast<int>(std::ceil(c.u + span)) + 1;
    }
    for (int cu = u0; cu <= u1; ++cu) {
      double du = std::abs(cu - c.u);
      if (wrap_u) du = std::min(du, w - du);
      if (du * du + dv * dv > tau2) continue;
      int cuw = cu;
      if (wrap_u) {
        cuw %= w;
        if (cuw < 0) cuw += w;
      } else if (cuw < 0 || cuw >= w) {
        continue;
      }
      hit(cv, cuw);
    }
  }
}

struct CaseAccum {
  double max_plane_residual = 0.0;
  double max_curve_distance_px = 0.0;
  std::vector<OracleViolation> violations;
};

// Shared core of oracle_case and verify_mask_subset: brute-force locus,
// residuals, and the subset check of oracle-stamped cells against
// analytic_set. visited must hold w*h zeroed bytes; it dedupes stamped
// cells so each missing cell is recorded once, at the first depth that
// reaches it.
template <typename AnalyticSet>
void oracle_check_pair(const RelativePose& rel, const PixelCoord& query,
                       int key_frame, const MaskParams& params,
                       const std::vector<double>& depths,
                       AnalyticSet&& analytic_set,
                       std::vector<uint8_t>& visited, CaseAccum& acc) {
  const GridSpec g = params.feature;
  const Vec3 d =
      pixel_to_direction(query, g, ConventionMode::DefaultLatitude).vec();
  const Vec3 rd = rel.rotation.m * d;
  const Vec3 n = rel.translation.cross(rd);
  const bool have_plane = rel.baseline_norm >= params.eps_t &&
                          n.norm() >= EpipolarPlane::kNormEps;
  const Vec3 nh = have_plane ? Vec3(n.normalized()) : Vec3(Vec3::Zero());

  const EpipolarPlane plane = epipolar_plane(rel, query, g);
  const EpipolarSamples samples =
      sample_epipolar(plane, params.k, g, rel, params.eps_t);

  auto check_point = [&](const PixelCoord& pj, double lambda) {
    if (have_plane) {
      const Vec3 dir =
          pixel_to_direction(pj, g, ConventionMode::DefaultLatitude).vec();
      acc.max_plane_residual =
          std::max(acc.max_plane_residual, std::abs(nh.dot(dir)));
    }
    acc.max_curve_distance_px = std::max(
        acc.max_curve_distance_px, min_distance(pj, samples, g, params.wrap_u));
    stamp_disk(pj, g, params.tau, params.wrap_u, [&](int cv, int cu) {
      const size_t kp = static_cast<size_t>(cv) * g.width + cu;
      if (visited[kp]) return;
      visited[kp] = 1;
      if (!analytic_set(kp))
        acc.violations.push_back({key_frame, query, lambda, pj, cu, cv,
                                  rel.rotation.m, rel.translation});
    });
  };

  if (rel.baseline_norm < params.eps_t) {
    // Pure rotation: the ground truth collapses to one reprojected point.
    check_point(direction_to_pixel(UnitVec3::normalized(rd), g,
                                   ConventionMode::DefaultLatitude),
                0.0);
    return;
  }
  for (double lambda : depths) {
    const Vec3 xj = lambda * rd + rel.translation;
    if (xj.norm() < 1e-12) continue;
    check_point(direction_to_pixel(UnitVec3::normalized(xj), g,
                                   ConventionMode::DefaultLatitude),
                lambda);
  }
}

void sort_violations(std::vector<OracleViolation>& v) {
  std::sort(v.begin(), v.end(),
            [](const OracleViolation& a, const OracleViolation& b) {
              if (a.key_frame != b.key_frame) return a.key_frame < b.key_frame;
              if (a.query.v != b.query.v) return a.query.v < b.query.v;
              if (a.query.u != b.query.u) return a.query.u < b.query.u;
              if (a.miss_v != b.miss_v) return a.miss_v < b.miss_v;
              if (a.miss_u != b.miss_u) return a.miss_u < b.miss_u;
              return a.depth < b.depth;
            });
}

}  // namespace

std::vector<PixelCoord> ray_projection_oracle(const RelativePose& rel,
                                              const PixelCoord& query,
                                              const GridSpec& g,
                                              const DepthSweep& sweep,
                                              double eps_t) {
  require_valid(g);
  if (rel.baseline_norm < eps_t)
    throw degenerate_error("ray_projection_oracle: zero baseline");
  const Vec3 d =
      pixel_to_direction(query, g, ConventionMode::DefaultLatitude).vec();
  const Vec3 rd = rel.rotation.m * d;
  std::vector<PixelCoord> out;
  const std::vector<double> depths = sweep.depths();
  out.reserve(depths.size());
  for (double lambda : depths) {
    const Vec3 xj = lambda * rd + rel.translation;
    if (xj.norm() < 1e-12) continue;
    out.push_back(direction_to_pixel(UnitVec3::normalized(xj), g,
                                     ConventionMode::DefaultLatitude));
  }
  return out;
}

CurveCheck verify_curve(const RelativePose& rel, const PixelCoord& query,
                        const GridSpec& g, const DepthSweep& sweep, int k,
                        bool wrap_u) {
  require_valid(g);
  if (rel.baseline_norm < 1e-8)
    throw degenerate_error("verify_curve: zero baseline");
  const Vec3 d =
      pixel_to_direction(query, g, ConventionMode::DefaultLatitude).vec();
  const Vec3 rd = rel.rotation.m * d;
  const Vec3 n = rel.translation.cross(rd);
  if (n.norm() < EpipolarPlane::kNormEps)
    throw degenerate_error("verify_curve: query direction parallel to epipole");
  const Vec3 nh = n.normalized();

  const EpipolarPlane plane = epipolar_plane(rel, query, g);
  const EpipolarSamples samples = sample_epipolar(plane, k, g, rel);

  CurveCheck out;
  for (double lambda : sweep.depths()) {
    const Vec3 xj = lambda * rd + rel.translation;
    if (xj.norm() < 1e-12) continue;
    const PixelCoord pj = direction_to_pixel(UnitVec3::normalized(xj), g,
                                             ConventionMode::DefaultLatitude);
    const Vec3 dir =
        pixel_to_direction(pj, g, ConventionMode::DefaultLatitude).vec();
    out.max_plane_residual =
        std::max(out.max_plane_residual, std::abs(nh.dot(dir)));
    out.max_distance_px =
        std::max(out.max_distance_px, min_distance(pj, samples, g, wrap_u));
  }
  return out;
}

OracleReport oracle_case(const RelativePose& rel, const PixelCoord& query,
                         const MaskParams& params, const DepthSweep& sweep) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<uint8_t> analytic = mask_row(rel, query, params);
  const std::vector<double> depths = sweep.depths();

  OracleReport rep;
  rep.cases = 1;
  CaseAccum acc;
  std::vector<uint8_t> visited(analytic.size(), 0);
  oracle_check_pair(rel, query, 1, params, depths,
                    [&](size_t kp) { return analytic[kp] != 0; }, visited, acc);
  sort_violations(acc.violations);
  rep.max_plane_residual = acc.max_plane_residual;
  rep.max_curve_distance_px = acc.max_curve_distance_px;
  rep.violations = std::move(acc.violations);
  rep.subset_violations = static_cast<int64_t>(rep.violations.size());
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

OracleReport verify_mask_subset(const std::vector<CameraPose>& poses,
                                const MaskParams& params, int query_frame,
                                const DepthSweep& sweep) {
  const auto t0 = std::chrono::steady_clock::now();
  const EpipolarMaskTensor tensor = build_mask(poses, params, query_frame);
  const std::vector<double> depths = sweep.depths();

  const int n = tensor.n_frames();
  const GridSpec g = params.feature;
  const int64_t hw = tensor.pixels();
  std::vector<RelativePose> rels;
  rels.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j)
    rels.push_back(relative_pose(poses[query_frame], poses[j]));

  OracleReport rep;
  rep.cases = hw * n;
  std::mutex merge;
  parallel::for_range(hw, [&](int64_t qp0, int64_t qp1) {
    CaseAccum acc;
    std::vector<uint8_t> visited(static_cast<size_t>(hw), 0);
    for (int64_t qp = qp0; qp < qp1; ++qp) {
      const PixelCoord query{static_cast<double>(qp % g.width),
                             static_cast<double>(qp / g.width)};
      for (int j = 0; j < n; ++j) {
        std::fill(visited.begin(), visited.end(), 0);
        oracle_check_pair(
            rels[j], query, j, params, depths,
            [&](size_t kp) {
              return tensor.test(qp, j, static_cast<int64_t>(kp));
            },
            visited, acc);
      }
    }
    const std::scoped_lock lock(merge);
    rep.max_plane_residual =
        std::max(rep.max_plane_residual, acc.max_plane_residual);
    rep.max_curve_distance_px =
        std::max(rep.max_curve_distance_px, acc.max_curve_distance_px);
    rep.violations.insert(rep.violations.end(), acc.violations.begin(),
                          acc.violations.end());
  });
  sort_violations(rep.violations);
  rep.subset_violations = static_cast<int64_t>(rep.violations.size());
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

std::vector<std::string> report_lines(const OracleReport& r) {
  std::vector<std::string> out;
  char buf[512];
  std::snprintf(
      buf, sizeof(buf),
      "oracle cases=%lld plane_residual_max=%.17g curve_distance_max_px=%.17g "
      "subset_violations=%lld runtime_s=%.3f",
      static_cast<long long>(r.cases), r.max_plane_residual,
      r.max_curve_distance_px, static_cast<long long>(r.subset_violations),
      r.runtime_seconds);
  out.emplace_back(buf);
  for (const OracleViolation& v : r.violations) {
    std::snprintf(buf, sizeof(buf),
                  "violation frame=%d query_u=%.17g query_v=%.17g "
                  "depth=%.17g center_u=%.17g center_v=%.17g miss_u=%d "
                  "miss_v=%d R=",
                  v.key_frame, v.query.u, v.query.v, v.depth, v.center.u,
                  v.center.v, v.miss_u, v.miss_v);
    std::string line = buf;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        std::snprintf(buf, sizeof(buf), "%s%.17g", (i || j) ? " " : "",
                      v.rel_rotation(i, j));
        line += buf;
      }
    line += " t=";
    for (int i = 0; i < 3; ++i) {
      std::snprintf(buf, sizeof(buf), "%s%.17g", i ? " " : "",
                    v.rel_translation(i));
      line += buf;
    }
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace epipano

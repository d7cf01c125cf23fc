// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Exit codes: 0 success, 2 argument or file parse
// errors, 3 validation failures (including out-of-range requests and the
// memory-budget preflight), 4 I/O failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "epipano/attention.hpp"
#include "epipano/io.hpp"
#include "epipano/oracle.hpp"
#include "epipano/parallel.hpp"
#include "epipano/plucker.hpp"
#include "epipano/rng.hpp"
#include "epipano/scene.hpp"

namespace {

using namespace epipano;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

struct validation_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- plucker --------------------------------------------------------------

struct PluckerCfg {
  std::string traj;
  int width = 512;
  int height = 256;
  std::string out;
};

int run_plucker(const PluckerCfg& cfg) {
  const std::vector<CameraPose> poses = read_trajectory(cfg.traj);
  if (poses.empty()) throw validation_failure("trajectory is empty");
  const GridSpec g{cfg.width, cfg.height};
  require_valid(g);
  std::vector<PluckerField> fields;
  fields.reserve(poses.size());
  for (size_t i = 0; i < poses.size(); ++i) {
    fields.push_back(plucker_field(poses[i], g, static_cast<int>(i)));
    double max_md = 0.0, max_unit = 0.0;
    for (const PluckerRay& r : fields.back().data) {
      max_md = std::max(max_md, std::abs(r.moment.dot(r.direction)));
      max_unit = std::max(max_unit, std::abs(r.direction.norm() - 1.0));
    }
    std::printf("frame %zu: max |m.d| = %.3g, max ||d|-1| = %.3g\n", i, max_md,
                max_unit);
  }
  write_plkf(cfg.out, fields);
  std::printf("wrote %s: %zu frames at %dx%d\n", cfg.out.c_str(), poses.size(),
              cfg.height, cfg.width);
  return kExitOk;
}

// --- mask -----------------------------------------------------------------

struct MaskCfg {
  std::string traj;
  int feat_h = 32;
  int feat_w = 64;
  int k = 250;
  double tau = 0.70710678;
  std::vector<int> query_frames;
  bool wrap_u = true;
  int64_t mem_budget = 2147483648;
  std::string out;
};

int run_mask(const MaskCfg& cfg) {
  const std::vector<CameraPose> poses = read_trajectory(cfg.traj);
  const int n = static_cast<int>(poses.size());
  if (n < 1) throw validation_failure("trajectory is empty");

  MaskParams params;
  params.feature = GridSpec{cfg.feat_w, cfg.feat_h};
  params.k = cfg.k;
  params.tau = cfg.tau;
  params.wrap_u = cfg.wrap_u;
  require_valid(params.feature);

  std::vector<int> queries = cfg.query_frames;
  if (queries.empty()) {
    queries.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) queries[static_cast<size_t>(i)] = i;
  }
  for (size_t i = 0; i < queries.size(); ++i) {
    if (queries[i] < 0 || queries[i] >= n)
      throw validation_failure("query frame " + std::to_string(queries[i]) +
                               " out of range [0, " + std::to_string(n) + ")");
    if (i > 0 && queries[i] <= queries[i - 1])
      throw validation_failure("query frames must be strictly ascending");
  }

  // Pre-flight: one slice is (h*w)^2 * N bits and is held in memory while it
  // is built; refuse before allocating anything.
  const int64_t hw = static_cast<int64_t>(cfg.feat_h) * cfg.feat_w;
  const int64_t slice_bytes = (hw * n * hw + 7) / 8;
  if (slice_bytes > cfg.mem_budget)
    throw validation_failure(
        "mask slice needs " + std::to_string(slice_bytes) + " bytes (" +
        std::to_string(hw) + " query pixels x " + std::to_string(n) +
        " frames x " + std::to_string(hw) + " key pixels / 8) over budget " +
        std::to_string(cfg.mem_budget));

  SepmWriter writer(cfg.out, n, params.feature, params.k, params.tau,
                    static_cast<int>(queries.size()));
  for (int qf : queries) {
    const EpipolarMaskTensor t = build_mask(poses, params, qf);
    writer.append(t);
    std::printf("query frame %d: bits=%lld density=%.6f\n", qf,
                static_cast<long long>(t.popcount()),
                static_cast<double>(t.popcount()) /
                    static_cast<double>(t.bit_count()));
  }
  writer.close();
  std::printf("wrote %s: %zu query frames, N=%d, %dx%d, K=%d\n",
              cfg.out.c_str(), queries.size(), n, cfg.feat_h, cfg.feat_w,
              cfg.k);
  return kExitOk;
}

// --- epicurve -------------------------------------------------------------

struct EpicurveCfg {
  std::string traj;
  int frame_i = 0;
  int frame_j = 1;
  double u = 0.0;
  double v = 0.0;
  int k = 250;
  std::string image_in;
  std::string out;
};

int run_epicurve(const EpicurveCfg& cfg) {
  const std::vector<CameraPose> poses = read_trajectory(cfg.traj);
  const int n = static_cast<int>(poses.size());
  if (cfg.frame_i < 0 || cfg.frame_i >= n || cfg.frame_j < 0 ||
      cfg.frame_j >= n)
    throw validation_failure("frame index out of range [0, " +
                             std::to_string(n) + ")");
  Image img = read_ppm(cfg.image_in);
  const GridSpec g{img.width, img.height};
  require_valid(g);
  if (cfg.u < 0.0 || cfg.u >= g.width || cfg.v < -0.5 ||
      cfg.v > g.height - 0.5)
    throw validation_failure("query pixel outside the panorama");

  const RelativePose rel = relative_pose(poses[cfg.frame_i], poses[cfg.frame_j]);
  const PixelCoord query{cfg.u, cfg.v};
  const EpipolarPlane plane = epipolar_plane(rel, query, g);
  const EpipolarSamples samples = sample_epipolar(plane, cfg.k, g, rel);

  auto put = [&](double u, double v, uint8_t r, uint8_t gc, uint8_t b) {
    const int vi = static_cast<int>(std::lround(v));
    if (vi < 0 || vi >= g.height) return;
    int ui = static_cast<int>(std::lround(u)) % g.width;
    if (ui < 0) ui += g.width;
    uint8_t* px = img.px(ui, vi);
    px[0] = r;
    px[1] = gc;
    px[2] = b;
  };
  for (const PixelCoord& s : samples.points) put(s.u, s.v, 255, 40, 40);
  for (int d = -3; d <= 3; ++d) {
    put(query.u + d, query.v, 40, 255, 60);
    put(query.u, query.v + d, 40, 255, 60);
  }
  write_ppm(cfg.out, img);
  std::printf("wrote %s: %d curve samples, query (%g, %g) frame %d -> %d\n",
              cfg.out.c_str(), samples.k, cfg.u, cfg.v, cfg.frame_i,
              cfg.frame_j);
  return kExitOk;
}

// --- render ---------------------------------------------------------------

struct RenderCfg {
  uint64_t seed_scene = 1;
  uint64_t seed_traj = 1;
  int frames = 16;
  int frame_count = 40;
  int width = 512;
  int height = 256;
  bool via_cubemap = false;
  int face_size = 512;
  std::string sample_mode = "random";
  int corr_count = 600;
  std::string out;
};

int run_render(const RenderCfg& cfg) {
  const GridSpec g{cfg.width, cfg.height};
  require_valid(g);
  if (cfg.frames < 1 || cfg.frames > cfg.frame_count)
    throw validation_failure("need 1 <= --frames <= --frame-count");
  const SampleMode mode = cfg.sample_mode == "stride"
                              ? SampleMode::UniformStride
                              : SampleMode::SeededRandom;

  const Scene scene = generate_scene(cfg.seed_scene);
  const Trajectory traj = generate_trajectory(scene, cfg.seed_traj,
                                              cfg.frame_count, cfg.frames, mode);
  const std::vector<CameraPose> sampled = traj.sampled_poses();

  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) throw io_error("cannot create " + cfg.out + ": " + ec.message());
  const std::filesystem::path dir(cfg.out);

  ClipManifest manifest;
  manifest.scene_seed = cfg.seed_scene;
  manifest.traj_seed = cfg.seed_traj;
  manifest.sampled_indices = traj.sampled_indices;
  Rng cond_rng(cfg.seed_scene * 0x9e3779b97f4a7c15ull ^ cfg.seed_traj);
  manifest.conditional_frame_index =
      static_cast<int>(cond_rng.uniform_int(0, cfg.frames - 1));
  manifest.trajectory_file = "trajectory.txt";

  for (int f = 0; f < cfg.frames; ++f) {
    Image img;
    if (cfg.via_cubemap) {
      const auto faces = render_cubemap(scene, sampled[static_cast<size_t>(f)],
                                        cfg.face_size);
      img = cubemap_to_equirect(faces, g);
    } else {
      img = render_equirect(scene, sampled[static_cast<size_t>(f)], g);
    }
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%03d.ppm", f);
    write_ppm((dir / name).string(), img);
    manifest.frame_files.emplace_back(name);
    std::printf("frame %d/%d rendered\n", f + 1, cfg.frames);
  }

  write_trajectory((dir / "trajectory.txt").string(), sampled);
  const std::vector<Correspondence> corr =
      extract_correspondences(scene, traj, g, cfg.corr_count);
  write_correspondences((dir / "correspondences.txt").string(), corr);
  write_manifest((dir / "manifest.txt").string(), {manifest});
  std::printf("wrote %s: %d frames, %zu correspondences, %s\n",
              cfg.out.c_str(), cfg.frames, corr.size(),
              cfg.via_cubemap ? "via-cubemap" : "direct");
  return kExitOk;
}

// --- validate -------------------------------------------------------------

struct ValidateCfg {
  std::string mode;
  int cases = 1000;
  uint64_t seed = 1;
  uint64_t scene_seed = 1;
  std::vector<uint64_t> traj_seeds{1, 2, 3, 4, 5};
  int frames = 16;
  int frame_count = 40;
  int width = 512;
  int height = 256;
  int feat_h = 32;
  int feat_w = 64;
  int k = 250;
  int k_ref = 2000;
  double tau = 0.70710678;
  double threshold = 1.0;
  int corr_count = 600;
  double lambda_min = 1e-2;
  double lambda_max = 1e3;
  int sweep_count = 10000;
  int dim = 8;
  double eps_fd = 1e-6;
};

int validate_roundtrip() {
  bool ok = true;
  for (const GridSpec g : {GridSpec{128, 64}, GridSpec{512, 256}}) {
    double max_err = 0.0;
    for (int v = 0; v < g.height; ++v)
      for (int u = 0; u < g.width; ++u) {
        const PixelCoord p{static_cast<double>(u), static_cast<double>(v)};
        const PixelCoord q = direction_to_pixel(
            pixel_to_direction(p, g, ConventionMode::DefaultLatitude), g,
            ConventionMode::DefaultLatitude);
        double du = std::abs(q.u - p.u);
        du = std::min(du, g.width - du);
        max_err = std::max(max_err, std::max(du, std::abs(q.v - p.v)));
      }
    const bool pass = max_err <= 1e-9;
    ok = ok && pass;
    std::printf("roundtrip %dx%d: max err = %.3g px [%s]\n", g.height,
                g.width, max_err, pass ? "pass" : "FAIL");
  }
  return ok ? kExitOk : kExitValidation;
}

// Draws (rotation, translation, query pixel) cases until the epipolar plane
// is well defined, then runs the brute-force subset check on each.
int validate_oracle(const ValidateCfg& cfg) {
  MaskParams params;
  params.feature = GridSpec{cfg.feat_w, cfg.feat_h};
  params.k = cfg.k;
  params.tau = cfg.tau;
  require_valid(params.feature);
  const DepthSweep sweep{cfg.lambda_min, cfg.lambda_max, cfg.sweep_count};

  Rng rng(cfg.seed);
  OracleReport total;
  const auto t0 = std::chrono::steady_clock::now();
  for (int c = 0; c < cfg.cases; ++c) {
    RelativePose rel;
    PixelCoord query;
    for (;;) {
      rel = RelativePose::make(rng.rotation(), rng.gaussian3());
      query.u = static_cast<double>(
          rng.uniform_int(0, params.feature.width - 1));
      query.v = static_cast<double>(
          rng.uniform_int(0, params.feature.height - 1));
      if (rel.baseline_norm < params.eps_t) continue;
      const Vec3 d = pixel_to_direction(query, params.feature,
                                        ConventionMode::DefaultLatitude)
                         .vec();
      if (rel.translation.cross(rel.rotation.m * d).norm() <
          EpipolarPlane::kNormEps)
        continue;
      break;
    }
    const OracleReport rep = oracle_case(rel, query, params, sweep);
    total.cases += rep.cases;
    total.max_plane_residual =
        std::max(total.max_plane_residual, rep.max_plane_residual);
    total.max_curve_distance_px =
        std::max(total.max_curve_distance_px, rep.max_curve_distance_px);
    total.subset_violations += rep.subset_violations;
    if (!rep.violations.empty()) {
      std::printf("case %d:\n", c);
      for (const std::string& line : report_lines(rep))
        std::printf("  %s\n", line.c_str());
    }
    total.violations.insert(total.violations.end(), rep.violations.begin(),
                            rep.violations.end());
  }
  total.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("%s\n", report_lines(total)[0].c_str());
  const bool pass =
      total.subset_violations == 0 && total.max_plane_residual <= 1e-9;
  std::printf("oracle: %s\n", pass ? "pass" : "FAIL");
  return pass ? kExitOk : kExitValidation;
}

int validate_correspondence(const ValidateCfg& cfg) {
  const GridSpec img_grid{cfg.width, cfg.height};
  const GridSpec feat{cfg.feat_w, cfg.feat_h};
  const Scene scene = generate_scene(cfg.scene_seed);
  const Trajectory traj =
      generate_trajectory(scene, cfg.traj_seeds.empty() ? 1 : cfg.traj_seeds[0],
                          cfg.frame_count, cfg.frames, SampleMode::SeededRandom);
  const std::vector<CameraPose> poses = traj.sampled_poses();
  const std::vector<Correspondence> corr =
      extract_correspondences(scene, traj, img_grid, cfg.corr_count);

  const int f = static_cast<int>(poses.size());
  std::vector<RelativePose> rels(static_cast<size_t>(f) * f);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j)
      rels[static_cast<size_t>(i) * f + j] = relative_pose(poses[i], poses[j]);

  auto to_feat = [&](const PixelCoord& p) {
    return PixelCoord{(p.u + 0.5) * feat.width / img_grid.width - 0.5,
                      (p.v + 0.5) * feat.height / img_grid.height - 0.5};
  };

  int64_t pairs = 0, within = 0;
  double worst = 0.0;
  for (const Correspondence& c : corr) {
    std::vector<int> vis;
    for (const CorrespondenceObs& o : c.obs)
      if (o.visible) vis.push_back(o.frame);
    for (int a : vis)
      for (int b : vis) {
        if (a == b) continue;
        const RelativePose& rel = rels[static_cast<size_t>(a) * f + b];
        const PixelCoord qa = to_feat(c.obs[static_cast<size_t>(a)].pixel);
        const PixelCoord pb = to_feat(c.obs[static_cast<size_t>(b)].pixel);
        const EpipolarPlane plane = epipolar_plane(rel, qa, feat);
        const EpipolarSamples samples =
            sample_epipolar(plane, cfg.k, feat, rel);
        const double d = min_distance(pb, samples, feat, true);
        ++pairs;
        if (d <= cfg.threshold) ++within;
        worst = std::max(worst, d);
      }
  }
  const double fraction =
      pairs == 0 ? 0.0 : static_cast<double>(within) / static_cast<double>(pairs);
  const bool pass = fraction >= 0.99;
  std::printf(
      "correspondence: points=%zu pairs=%lld within(%.2f px)=%lld "
      "fraction=%.5f worst=%.3f px [%s]\n",
      corr.size(), static_cast<long long>(pairs), cfg.threshold,
      static_cast<long long>(within), fraction, worst, pass ? "pass" : "FAIL");
  return pass ? kExitOk : kExitValidation;
}

int validate_k_stability(const ValidateCfg& cfg) {
  MaskParams lo, hi;
  lo.feature = hi.feature = GridSpec{cfg.feat_w, cfg.feat_h};
  lo.k = cfg.k;
  hi.k = cfg.k_ref;
  lo.tau = hi.tau = cfg.tau;
  const Scene scene = generate_scene(cfg.scene_seed);
  double sum = 0.0;
  for (uint64_t seed : cfg.traj_seeds) {
    const Trajectory traj = generate_trajectory(
        scene, seed, cfg.frame_count, cfg.frames, SampleMode::SeededRandom);
    const std::vector<CameraPose> poses = traj.sampled_poses();
    const EpipolarMaskTensor a = build_mask(poses, lo, 0);
    const EpipolarMaskTensor b = build_mask(poses, hi, 0);
    const double j = mask_jaccard(a, b);
    sum += j;
    std::printf("trajectory seed %llu: jaccard(K=%d, K=%d) = %.5f\n",
                static_cast<unsigned long long>(seed), cfg.k, cfg.k_ref, j);
    const std::vector<double> per = mask_jaccard_per_frame(a, b);
    std::printf("  per key frame:");
    for (double x : per) std::printf(" %.4f", x);
    std::printf("\n");
  }
  const double mean = sum / static_cast<double>(cfg.traj_seeds.size());
  const bool pass = mean >= 0.95;
  std::printf("k-stability: mean jaccard = %.5f [%s]\n", mean,
              pass ? "pass" : "FAIL");
  return pass ? kExitOk : kExitValidation;
}

int validate_grad(const ValidateCfg& cfg) {
  MaskParams params;
  params.feature = GridSpec{cfg.feat_w, cfg.feat_h};
  params.k = cfg.k;
  params.tau = cfg.tau;
  const Scene scene = generate_scene(cfg.scene_seed);
  const Trajectory traj = generate_trajectory(
      scene, cfg.traj_seeds.empty() ? 1 : cfg.traj_seeds[0], 12, cfg.frames,
      SampleMode::SeededRandom);
  const EpipolarMaskTensor mask = build_mask(traj.sampled_poses(), params, 0);

  const int64_t hw = mask.pixels();
  const int64_t kv = hw * mask.n_frames();
  Rng rng(cfg.seed);
  AttnTensors t;
  t.head_dim = cfg.dim;
  t.q.resize(hw, cfg.dim);
  t.k.resize(kv, cfg.dim);
  t.v.resize(kv, cfg.dim);
  for (int64_t i = 0; i < t.q.size(); ++i) t.q.data()[i] = rng.gaussian();
  for (int64_t i = 0; i < t.k.size(); ++i) t.k.data()[i] = rng.gaussian();
  for (int64_t i = 0; i < t.v.size(); ++i) t.v.data()[i] = rng.gaussian();

  bool ok = true;
  for (MaskSemantics mode :
       {MaskSemantics::AdditiveNegInf, MaskSemantics::MultiplicativeLiteral}) {
    const char* name =
        mode == MaskSemantics::AdditiveNegInf ? "additive" : "multiplicative";
    const Eigen::MatrixXd w = spheric_epi_attn_weights(t, mask, mode);
    const double rowsum_err = (w.rowwise().sum().array() - 1.0).abs().maxCoeff();
    bool zeros_exact = true;
    if (mode == MaskSemantics::AdditiveNegInf) {
      for (int64_t r = 0; r < w.rows() && zeros_exact; ++r)
        for (int64_t c = 0; c < w.cols(); ++c)
          if (!mask.test(r, static_cast<int>(c / hw), c % hw) &&
              w(r, c) != 0.0) {
            zeros_exact = false;
            break;
          }
    }
    const double grad_err = attn_grad_check(t, mask, mode, cfg.eps_fd);
    const bool pass = rowsum_err <= 1e-6 && zeros_exact && grad_err <= 1e-5;
    ok = ok && pass;
    std::printf(
        "%s: rowsum err=%.3g masked zeros %s grad err=%.3g [%s]\n", name,
        rowsum_err, zeros_exact ? "exact" : "VIOLATED", grad_err,
        pass ? "pass" : "FAIL");
  }

  // Masked-value sensitivity separates the two semantics: a masked value row
  // must not affect additive output and must affect multiplicative output.
  int64_t masked_r = -1, masked_c = -1;
  for (int64_t r = 0; r < hw && masked_r < 0; ++r)
    for (int64_t c = 0; c < kv; ++c)
      if (!mask.test(r, static_cast<int>(c / hw), c % hw)) {
        masked_r = r;
        masked_c = c;
        break;
      }
  if (masked_r >= 0) {
    const Eigen::MatrixXd add0 =
        spheric_epi_attn(t, mask, MaskSemantics::AdditiveNegInf);
    const Eigen::MatrixXd mul0 =
        spheric_epi_attn(t, mask, MaskSemantics::MultiplicativeLiteral);
    AttnTensors t2 = t;
    t2.v.row(masked_c).array() += 1.0;
    const Eigen::MatrixXd add1 =
        spheric_epi_attn(t2, mask, MaskSemantics::AdditiveNegInf);
    const Eigen::MatrixXd mul1 =
        spheric_epi_attn(t2, mask, MaskSemantics::MultiplicativeLiteral);
    const bool add_insensitive =
        (add0.row(masked_r).array() == add1.row(masked_r).array()).all();
    const bool mul_sensitive =
        (mul0.row(masked_r).array() != mul1.row(masked_r).array()).any();
    const bool pass = add_insensitive && mul_sensitive;
    ok = ok && pass;
    std::printf("distinguishing: additive %s, multiplicative %s [%s]\n",
                add_insensitive ? "insensitive" : "SENSITIVE",
                mul_sensitive ? "sensitive" : "INSENSITIVE",
                pass ? "pass" : "FAIL");
  } else {
    std::printf("distinguishing: skipped, mask has no clear bit\n");
  }
  return ok ? kExitOk : kExitValidation;
}

int run_validate(const ValidateCfg& cfg) {
  if (cfg.mode == "roundtrip") return validate_roundtrip();
  if (cfg.mode == "oracle") return validate_oracle(cfg);
  if (cfg.mode == "correspondence") return validate_correspondence(cfg);
  if (cfg.mode == "k-stability") return validate_k_stability(cfg);
  if (cfg.mode == "grad") return validate_grad(cfg);
  throw validation_failure("unknown --mode " + cfg.mode);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Panoramic multi-view epipolar geometry toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads (0 = hardware concurrency)");

  PluckerCfg plucker_cfg;
  CLI::App* cmd_plucker =
      app.add_subcommand("plucker", "Per-pixel ray field to a PLKF file");
  cmd_plucker->add_option("--traj", plucker_cfg.traj, "Trajectory file")
      ->required();
  cmd_plucker->add_option("--width", plucker_cfg.width, "Panorama width");
  cmd_plucker->add_option("--height", plucker_cfg.height, "Panorama height");
  cmd_plucker->add_option("--out", plucker_cfg.out, "Output PLKF path")
      ->required();

  MaskCfg mask_cfg;
  CLI::App* cmd_mask =
      app.add_subcommand("mask", "Epipolar attention masks to a SEPM file");
  cmd_mask->add_option("--traj", mask_cfg.traj, "Trajectory file")->required();
  cmd_mask->add_option("--feat-h", mask_cfg.feat_h, "Feature grid height");
  cmd_mask->add_option("--feat-w", mask_cfg.feat_w, "Feature grid width");
  cmd_mask->add_option("--k", mask_cfg.k, "Curve samples per pixel");
  cmd_mask->add_option("--tau", mask_cfg.tau, "Distance threshold, px");
  cmd_mask
      ->add_option("--query-frames", mask_cfg.query_frames,
                   "Ascending query frame list (default: all)")
      ->delimiter(',');
  cmd_mask->add_flag("--wrap-u,!--no-wrap-u", mask_cfg.wrap_u,
                     "Periodic horizontal metric");
  cmd_mask->add_option("--mem-budget", mask_cfg.mem_budget,
                       "Per-slice memory budget, bytes");
  cmd_mask->add_option("--out", mask_cfg.out, "Output SEPM path")->required();

  EpicurveCfg epicurve_cfg;
  CLI::App* cmd_epicurve = app.add_subcommand(
      "epicurve", "Overlay sampled epipolar curve points on a panorama");
  cmd_epicurve->add_option("--traj", epicurve_cfg.traj, "Trajectory file")
      ->required();
  cmd_epicurve->add_option("--frame-i", epicurve_cfg.frame_i, "Query frame");
  cmd_epicurve->add_option("--frame-j", epicurve_cfg.frame_j, "Key frame");
  cmd_epicurve->add_option("--u", epicurve_cfg.u, "Query pixel u")->required();
  cmd_epicurve->add_option("--v", epicurve_cfg.v, "Query pixel v")->required();
  cmd_epicurve->add_option("--k", epicurve_cfg.k, "Curve samples");
  cmd_epicurve
      ->add_option("--image", epicurve_cfg.image_in, "Input panorama (PPM)")
      ->required();
  cmd_epicurve->add_option("--out", epicurve_cfg.out, "Output PPM path")
      ->required();

  RenderCfg render_cfg;
  CLI::App* cmd_render = app.add_subcommand(
      "render", "Procedural panoramic clip with ground-truth files");
  cmd_render->add_option("--seed-scene", render_cfg.seed_scene, "Scene seed");
  cmd_render->add_option("--seed-traj", render_cfg.seed_traj,
                         "Trajectory seed");
  cmd_render->add_option("--frames", render_cfg.frames, "Sampled frame count");
  cmd_render->add_option("--frame-count", render_cfg.frame_count,
                         "Dense trajectory frame count");
  cmd_render->add_option("--width", render_cfg.width, "Panorama width");
  cmd_render->add_option("--height", render_cfg.height, "Panorama height");
  cmd_render->add_flag("--via-cubemap,!--direct", render_cfg.via_cubemap,
                       "Render through a cubemap instead of direct rays");
  cmd_render->add_option("--face-size", render_cfg.face_size,
                         "Cubemap face size");
  cmd_render
      ->add_option("--sample-mode", render_cfg.sample_mode,
                   "Frame sampling: random|stride")
      ->check(CLI::IsMember({"random", "stride"}));
  cmd_render->add_option("--corr-count", render_cfg.corr_count,
                         "Ground-truth correspondences to extract");
  cmd_render->add_option("--out", render_cfg.out, "Output directory")
      ->required();

  ValidateCfg validate_cfg;
  CLI::App* cmd_validate =
      app.add_subcommand("validate", "Self-check suites with nonzero exit on failure");
  cmd_validate
      ->add_option("--mode", validate_cfg.mode,
                   "roundtrip|oracle|correspondence|k-stability|grad")
      ->required()
      ->check(CLI::IsMember(
          {"roundtrip", "oracle", "correspondence", "k-stability", "grad"}));
  cmd_validate->add_option("--cases", validate_cfg.cases, "Oracle case count");
  cmd_validate->add_option("--seed", validate_cfg.seed, "Draw seed");
  cmd_validate->add_option("--scene-seed", validate_cfg.scene_seed,
                           "Scene seed");
  cmd_validate
      ->add_option("--traj-seeds", validate_cfg.traj_seeds,
                   "Trajectory seeds")
      ->delimiter(',');
  cmd_validate->add_option("--frames", validate_cfg.frames,
                           "Sampled frame count");
  cmd_validate->add_option("--frame-count", validate_cfg.frame_count,
                           "Dense trajectory frame count");
  cmd_validate->add_option("--width", validate_cfg.width, "Panorama width");
  cmd_validate->add_option("--height", validate_cfg.height, "Panorama height");
  cmd_validate->add_option("--feat-h", validate_cfg.feat_h,
                           "Feature grid height");
  cmd_validate->add_option("--feat-w", validate_cfg.feat_w,
                           "Feature grid width");
  cmd_validate->add_option("--k", validate_cfg.k, "Curve samples per pixel");
  cmd_validate->add_option("--k-ref", validate_cfg.k_ref,
                           "Reference curve samples");
  cmd_validate->add_option("--tau", validate_cfg.tau,
                           "Distance threshold, px");
  cmd_validate->add_option("--threshold", validate_cfg.threshold,
                           "Correspondence distance bound, feature px");
  cmd_validate->add_option("--corr-count", validate_cfg.corr_count,
                           "Correspondences to extract");
  cmd_validate->add_option("--lambda-min", validate_cfg.lambda_min,
                           "Depth sweep start");
  cmd_validate->add_option("--lambda-max", validate_cfg.lambda_max,
                           "Depth sweep end");
  cmd_validate->add_option("--sweep-count", validate_cfg.sweep_count,
                           "Depth sweep sample count");
  cmd_validate->add_option("--dim", validate_cfg.dim, "Attention head dim");
  cmd_validate->add_option("--eps", validate_cfg.eps_fd,
                           "Finite-difference step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }
  parallel::set_threads(threads);

  try {
    if (*cmd_plucker) return run_plucker(plucker_cfg);
    if (*cmd_mask) return run_mask(mask_cfg);
    if (*cmd_epicurve) return run_epicurve(epicurve_cfg);
    if (*cmd_render) return run_render(render_cfg);
    if (*cmd_validate) return run_validate(validate_cfg);
  } catch (const parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  } catch (const io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}

// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "epipano/mask.hpp"
#include "epipano/plucker.hpp"
#include "epipano/scene.hpp"

namespace epipano {

/// File-system failures: open, short read, short write.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed content; the message carries the 1-based line number for text
/// formats and the byte offset or field name for binary ones.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- Trajectory text format ---------------------------------------------
//
// One record per frame:
//   <frame index> R <9 numbers row-major> t <3 numbers> <c2w|w2c>
// Blank lines and lines starting with '#' are skipped. Frame indices must
// run 0..N-1 in order. Numbers are written with 17 significant digits.

/// Parses and validates a trajectory: every rotation must be orthonormal
/// with determinant +1 within 1e-8, reported with its frame index.
std::vector<CameraPose> read_trajectory(const std::string& path);

void write_trajectory(const std::string& path,
                      const std::vector<CameraPose>& poses);

// --- PLKF: Plucker field tensor ------------------------------------------
//
// Little-endian binary. Header: magic "PLKF", u32 version = 1, u32 N, H, W.
// Payload: N*H*W*6 f32 in index order (frame, row v, column u,
// [m_x, m_y, m_z, d_x, d_y, d_z]). The payload is the f32 image of the
// double-precision field; a read-back reproduces the f32 values exactly.

void write_plkf(const std::string& path,
                const std::vector<PluckerField>& fields);

std::vector<PluckerField> read_plkf(const std::string& path);

// --- SEPM: epipolar mask tensor stack ------------------------------------
//
// Little-endian binary. Header: magic "SEPM", u32 version = 1, u32 N, h, w,
// K, f32 tau, u32 query_frame_count. Payload: per query frame in ascending
// order, h*w*N*h*w bits packed least-significant-bit-first, padded to a
// byte boundary per query frame. Slice identity (which query frames were
// written) is not stored; the reader labels slices 0..count-1 in file
// order.

/// Streaming writer: declare the shape up front, append slices in ascending
/// query-frame order, close() to finish. close() throws when fewer slices
/// than declared were appended; the destructor never throws and leaves a
/// truncated file behind if close() was skipped or failed.
class SepmWriter {
 public:
  SepmWriter(const std::string& path, int n_frames, const GridSpec& feature,
             int k, double tau, int query_frame_count);
  ~SepmWriter();
  SepmWriter(const SepmWriter&) = delete;
  SepmWriter& operator=(const SepmWriter&) = delete;

  void append(const EpipolarMaskTensor& tensor);
  void close();

 private:
  std::FILE* file_ = nullptr;
  int n_frames_ = 0;
  GridSpec feature_;
  int k_ = 0;
  double tau_ = 0.0;
  int declared_ = 0;
  int written_ = 0;
  int last_query_frame_ = -1;
  std::string path_;
};

void write_sepm(const std::string& path,
                const std::vector<EpipolarMaskTensor>& tensors);

std::vector<EpipolarMaskTensor> read_sepm(const std::string& path);

// --- PPM (P6) -------------------------------------------------------------

void write_ppm(const std::string& path, const Image& image);

/// Accepts 8-bit P6 with maxval 255 and '#' comments in the header.
Image read_ppm(const std::string& path);

// --- Dataset manifest -----------------------------------------------------
//
// One line per clip:
//   clip scene_seed=<n> traj_seed=<n> indices=<i,j,...> conditional=<n>
//        trajectory=<path> frames=<f0,f1,...>
// Paths must not contain spaces or commas.

struct ClipManifest {
  uint64_t scene_seed = 0;
  uint64_t traj_seed = 0;
  std::vector<int> sampled_indices;
  int conditional_frame_index = 0;
  std::string trajectory_file;
  std::vector<std::string> frame_files;
};

void write_manifest(const std::string& path,
                    const std::vector<ClipManifest>& clips);

std::vector<ClipManifest> read_manifest(const std::string& path);

// --- Correspondence file --------------------------------------------------
//
// One record per point:
//   <x> <y> <z>  then per observation: <frame> <u> <v> <0|1>
// All observations of a point share its line; 17 significant digits.

void write_correspondences(const std::string& path,
                           const std::vector<Correspondence>& points);

std::vector<Correspondence> read_correspondences(const std::string& path);

}  // namespace epipano

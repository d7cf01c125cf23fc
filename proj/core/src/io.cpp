// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include "epipano/io.hpp"

#include <bit>
#include <cctype>
#include <cinttypes>
#include <cstring>
#include <fstream>
#include <sstream>

namespace epipano {

namespace {

// All binary fields are written least-significant byte first regardless of
// the host, so the formats are bit-exact across platforms.

void append_u32(std::vector<uint8_t>& buf, uint32_t v) {
  buf.push_back(static_cast<uint8_t>(v & 0xff));
  buf.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
  buf.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
  buf.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

void append_f32(std::vector<uint8_t>& buf, float v) {
  append_u32(buf, std::bit_cast<uint32_t>(v));
}

uint32_t get_u32(const std::vector<uint8_t>& buf, size_t off,
                 const char* what) {
  if (off + 4 > buf.size())
    throw parse_error(std::string(what) + ": truncated");
  return static_cast<uint32_t>(buf[off]) |
         (static_cast<uint32_t>(buf[off + 1]) << 8) |
         (static_cast<uint32_t>(buf[off + 2]) << 16) |
         (static_cast<uint32_t>(buf[off + 3]) << 24);
}

float get_f32(const std::vector<uint8_t>& buf, size_t off, const char* what) {
  return std::bit_cast<float>(get_u32(buf, off, what));
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw io_error("cannot open " + path);
  std::fseek(f, 0, SEEK_END);
  const long size = std::ftell(f);
  if (size < 0) {
    std::fclose(f);
    throw io_error("cannot stat " + path);
  }
  std::fseek(f, 0, SEEK_SET);
  std::vector<uint8_t> buf(static_cast<size_t>(size));
  const size_t got = buf.empty() ? 0 : std::fread(buf.data(), 1, buf.size(), f);
  std::fclose(f);
  if (got != buf.size()) throw io_error("short read on " + path);
  return buf;
}

void write_file(const std::string& path, const void* data, size_t size) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw io_error("cannot open " + path + " for writing");
  const size_t put = size == 0 ? 0 : std::fwrite(data, 1, size, f);
  const bool closed = std::fclose(f) == 0;
  if (put != size || !closed) throw io_error("short write on " + path);
}

[[noreturn]] void fail_line(const std::string& path, int line,
                            const std::string& what) {
  throw parse_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

// --- Trajectory -----------------------------------------------------------

std::vector<CameraPose> read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::vector<CameraPose> poses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int idx = 0;
    std::string tok;
    if (!(ss >> idx)) fail_line(path, line_no, "expected frame index");
    if (idx != static_cast<int>(poses.size()))
      fail_line(path, line_no,
                "frame index " + std::to_string(idx) + " out of order");
    if (!(ss >> tok) || tok != "R") fail_line(path, line_no, "expected 'R'");
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (!(ss >> r(i, j)))
          fail_line(path, line_no, "expected 9 rotation entries");
    if (!(ss >> tok) || tok != "t") fail_line(path, line_no, "expected 't'");
    Vec3 t;
    for (int i = 0; i < 3; ++i)
      if (!(ss >> t(i)))
        fail_line(path, line_no, "expected 3 translation entries");
    if (!(ss >> tok)) fail_line(path, line_no, "missing convention tag");
    Convention conv;
    if (tok == "c2w")
      conv = Convention::CamToWorld;
    else if (tok == "w2c")
      conv = Convention::WorldToCam;
    else
      fail_line(path, line_no, "convention must be c2w or w2c, got " + tok);
    if (ss >> tok) fail_line(path, line_no, "trailing tokens: " + tok);
    const CameraPose pose{{r}, t, conv};
    if (!pose.rotation.valid())
      fail_line(path, line_no,
                "frame " + std::to_string(idx) +
                    ": rotation fails orthonormality (tolerance 1e-8)");
    poses.push_back(pose);
  }
  return poses;
}

void write_trajectory(const std::string& path,
                      const std::vector<CameraPose>& poses) {
  std::string out;
  char buf[64];
  for (size_t i = 0; i < poses.size(); ++i) {
    const CameraPose& p = poses[i];
    out += std::to_string(i);
    out += " R";
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        std::snprintf(buf, sizeof(buf), " %.17g", p.rotation.m(r, c));
        out += buf;
      }
    out += " t";
    for (int r = 0; r < 3; ++r) {
      std::snprintf(buf, sizeof(buf), " %.17g", p.translation(r));
      out += buf;
    }
    out += p.convention == Convention::CamToWorld ? " c2w\n" : " w2c\n";
  }
  write_file(path, out.data(), out.size());
}

// --- PLKF -----------------------------------------------------------------

void write_plkf(const std::string& path,
                const std::vector<PluckerField>& fields) {
  if (fields.empty()) throw std::invalid_argument("PLKF: no fields");
  const GridSpec g = fields[0].grid;
  require_valid(g);
  const size_t per = static_cast<size_t>(g.width) * g.height;
  for (const PluckerField& f : fields) {
    if (f.grid.width != g.width || f.grid.height != g.height)
      throw std::invalid_argument("PLKF: mixed grid sizes");
    if (f.data.size() != per)
      throw std::invalid_argument("PLKF: field size mismatch");
  }
  std::vector<uint8_t> buf;
  buf.reserve(20 + fields.size() * per * 6 * 4);
  buf.insert(buf.end(), {'P', 'L', 'K', 'F'});
  append_u32(buf, 1);
  append_u32(buf, static_cast<uint32_t>(fields.size()));
  append_u32(buf, static_cast<uint32_t>(g.height));
  append_u32(buf, static_cast<uint32_t>(g.width));
  for (const PluckerField& f : fields)
    for (const PluckerRay& ray : f.data) {
      for (int i = 0; i < 3; ++i)
        append_f32(buf, static_cast<float>(ray.moment(i)));
      for (int i = 0; i < 3; ++i)
        append_f32(buf, static_cast<float>(ray.direction(i)));
    }
  write_file(path, buf.data(), buf.size());
}

std::vector<PluckerField> read_plkf(const std::string& path) {
  const std::vector<uint8_t> buf = read_file(path);
  if (buf.size() < 20 || std::memcmp(buf.data(), "PLKF", 4) != 0)
    throw parse_error("PLKF: bad magic in " + path);
  const uint32_t version = get_u32(buf, 4, "PLKF");
  if (version != 1)
    throw parse_error("PLKF: unsupported version " + std::to_string(version));
  const uint32_t n = get_u32(buf, 8, "PLKF");
  const uint32_t h = get_u32(buf, 12, "PLKF");
  const uint32_t w = get_u32(buf, 16, "PLKF");
  const GridSpec g{static_cast<int>(w), static_cast<int>(h)};
  if (n == 0 || !g.valid()) throw parse_error("PLKF: bad dimensions");
  const size_t per = static_cast<size_t>(w) * h;
  if (buf.size() != 20 + static_cast<size_t>(n) * per * 6 * 4)
    throw parse_error("PLKF: size does not match header");
  std::vector<PluckerField> fields(n);
  size_t off = 20;
  for (uint32_t f = 0; f < n; ++f) {
    fields[f].grid = g;
    fields[f].frame_index = static_cast<int>(f);
    fields[f].data.resize(per);
    for (PluckerRay& ray : fields[f].data) {
      for (int i = 0; i < 3; ++i, off += 4)
        ray.moment(i) = get_f32(buf, off, "PLKF");
      for (int i = 0; i < 3; ++i, off += 4)
        ray.direction(i) = get_f32(buf, off, "PLKF");
    }
  }
  return fields;
}

// --- SEPM -----------------------------------------------------------------

SepmWriter::SepmWriter(const std::string& path, int n_frames,
                       const GridSpec& feature, int k, double tau,
                       int query_frame_count)
    : n_frames_(n_frames),
      feature_(feature),
      k_(k),
      tau_(tau),
      declared_(query_frame_count),
      path_(path) {
  require_valid(feature);
  if (n_frames < 1) throw std::invalid_argument("SEPM: N >= 1 required");
  if (k < 1) throw std::invalid_argument("SEPM: K >= 1 required");
  if (!(tau > 0.0)) throw std::invalid_argument("SEPM: tau > 0 required");
  if (query_frame_count < 1 || query_frame_count > n_frames)
    throw std::invalid_argument("SEPM: 1 <= query frames <= N required");
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw io_error("cannot open " + path + " for writing");
  std::vector<uint8_t> header;
  header.insert(header.end(), {'S', 'E', 'P', 'M'});
  append_u32(header, 1);
  append_u32(header, static_cast<uint32_t>(n_frames));
  append_u32(header, static_cast<uint32_t>(feature.height));
  append_u32(header, static_cast<uint32_t>(feature.width));
  append_u32(header, static_cast<uint32_t>(k));
  append_f32(header, static_cast<float>(tau));
  append_u32(header, static_cast<uint32_t>(query_frame_count));
  if (std::fwrite(header.data(), 1, header.size(), file_) != header.size()) {
    std::fclose(file_);
    file_ = nullptr;
    throw io_error("short write on " + path);
  }
}

SepmWriter::~SepmWriter() {
  if (file_) std::fclose(file_);
}

void SepmWriter::append(const EpipolarMaskTensor& tensor) {
  if (!file_) throw io_error("SEPM: writer already closed");
  if (written_ >= declared_)
    throw std::invalid_argument("SEPM: more slices than declared");
  if (tensor.n_frames() != n_frames_ ||
      tensor.feature().width != feature_.width ||
      tensor.feature().height != feature_.height)
    throw std::invalid_argument("SEPM: slice shape mismatch");
  if (tensor.params().k != k_ || tensor.params().tau != tau_)
    throw std::invalid_argument("SEPM: slice parameter mismatch");
  if (tensor.query_frame() <= last_query_frame_)
    throw std::invalid_argument("SEPM: query frames must ascend");
  last_query_frame_ = tensor.query_frame();
  const auto& bytes = tensor.bytes();
  if (std::fwrite(bytes.data(), 1, bytes.size(), file_) != bytes.size()) {
    std::fclose(file_);
    file_ = nullptr;
    throw io_error("short write on " + path_);
  }
  ++written_;
}

void SepmWriter::close() {
  if (!file_) return;
  const bool complete = written_ == declared_;
  const bool flushed = std::fclose(file_) == 0;
  file_ = nullptr;
  if (!complete)
    throw io_error("SEPM: wrote " + std::to_string(written_) + " of " +
                   std::to_string(declared_) + " declared slices");
  if (!flushed) throw io_error("short write on " + path_);
}

void write_sepm(const std::string& path,
                const std::vector<EpipolarMaskTensor>& tensors) {
  if (tensors.empty()) throw std::invalid_argument("SEPM: no slices");
  const EpipolarMaskTensor& first = tensors.front();
  SepmWriter writer(path, first.n_frames(), first.feature(), first.params().k,
                    first.params().tau, static_cast<int>(tensors.size()));
  for (const EpipolarMaskTensor& t : tensors) writer.append(t);
  writer.close();
}

std::vector<EpipolarMaskTensor> read_sepm(const std::string& path) {
  const std::vector<uint8_t> buf = read_file(path);
  if (buf.size() < 32 || std::memcmp(buf.data(), "SEPM", 4) != 0)
    throw parse_error("SEPM: bad magic in " + path);
  const uint32_t version = get_u32(buf, 4, "SEPM");
  if (version != 1)
    throw parse_error("SEPM: unsupported version " + std::to_string(version));
  const uint32_t n = get_u32(buf, 8, "SEPM");
  const uint32_t h = get_u32(buf, 12, "SEPM");
  const uint32_t w = get_u32(buf, 16, "SEPM");
  const uint32_t k = get_u32(buf, 20, "SEPM");
  const float tau = get_f32(buf, 24, "SEPM");
  const uint32_t count = get_u32(buf, 28, "SEPM");
  MaskParams params;
  params.feature = GridSpec{static_cast<int>(w), static_cast<int>(h)};
  params.k = static_cast<int>(k);
  params.tau = static_cast<double>(tau);
  if (n == 0 || !params.feature.valid() || k == 0 || !(params.tau > 0.0))
    throw parse_error("SEPM: bad dimensions");
  if (count == 0 || count > n)
    throw parse_error("SEPM: bad query frame count");
  const int64_t hw = static_cast<int64_t>(w) * h;
  const int64_t bits = hw * static_cast<int64_t>(n) * hw;
  const size_t slice_bytes = static_cast<size_t>((bits + 7) / 8);
  if (buf.size() != 32 + count * slice_bytes)
    throw parse_error("SEPM: size does not match header");
  std::vector<EpipolarMaskTensor> out;
  out.reserve(count);
  size_t off = 32;
  for (uint32_t i = 0; i < count; ++i, off += slice_bytes) {
    EpipolarMaskTensor t(static_cast<int>(i), static_cast<int>(n), params);
    std::memcpy(t.bytes().data(), buf.data() + off, slice_bytes);
    out.push_back(std::move(t));
  }
  return out;
}

// --- PPM ------------------------------------------------------------------

void write_ppm(const std::string& path, const Image& image) {
  if (image.width < 1 || image.height < 1 ||
      image.rgb.size() !=
          static_cast<size_t>(image.width) * image.height * 3)
    throw std::invalid_argument("PPM: inconsistent image");
  std::string header = "P6\n" + std::to_string(image.width) + " " +
                       std::to_string(image.height) + "\n255\n";
  std::vector<uint8_t> buf;
  buf.reserve(header.size() + image.rgb.size());
  buf.insert(buf.end(), header.begin(), header.end());
  buf.insert(buf.end(), image.rgb.begin(), image.rgb.end());
  write_file(path, buf.data(), buf.size());
}

Image read_ppm(const std::string& path) {
  const std::vector<uint8_t> buf = read_file(path);
  size_t pos = 0;
  // Header tokens are separated by whitespace; '#' starts a comment that
  // runs to end of line.
  auto next_token = [&]() -> std::string {
    while (pos < buf.size()) {
      const char c = static_cast<char>(buf[pos]);
      if (c == '#') {
        while (pos < buf.size() && buf[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    const size_t start = pos;
    while (pos < buf.size() &&
           !std::isspace(static_cast<unsigned char>(buf[pos])) &&
           buf[pos] != '#')
      ++pos;
    if (start == pos) throw parse_error("PPM: truncated header in " + path);
    return std::string(buf.begin() + start, buf.begin() + pos);
  };
  auto next_int = [&](const char* what) {
    const std::string tok = next_token();
    try {
      size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw parse_error(std::string("PPM: bad ") + what + " '" + tok + "'");
    }
  };
  if (next_token() != "P6") throw parse_error("PPM: not P6: " + path);
  Image img;
  img.width = next_int("width");
  img.height = next_int("height");
  if (next_int("maxval") != 255)
    throw parse_error("PPM: only maxval 255 supported");
  ++pos;  // exactly one whitespace byte separates header and payload
  const size_t need = static_cast<size_t>(img.width) * img.height * 3;
  if (buf.size() != pos + need)
    throw parse_error("PPM: size does not match header");
  img.rgb.assign(buf.begin() + pos, buf.end());
  return img;
}

// --- Manifest -------------------------------------------------------------

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_strings(const std::vector<std::string>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    const size_t end = s.find(sep, start);
    if (end == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

void write_manifest(const std::string& path,
                    const std::vector<ClipManifest>& clips) {
  std::string out;
  for (const ClipManifest& c : clips) {
    for (const std::string& f : c.frame_files)
      if (f.find(' ') != std::string::npos ||
          f.find(',') != std::string::npos)
        throw std::invalid_argument("manifest: path contains space or comma");
    if (c.trajectory_file.find(' ') != std::string::npos ||
        c.trajectory_file.find(',') != std::string::npos)
      throw std::invalid_argument("manifest: path contains space or comma");
    out += "clip scene_seed=" + std::to_string(c.scene_seed);
    out += " traj_seed=" + std::to_string(c.traj_seed);
    out += " indices=" + join_ints(c.sampled_indices);
    out += " conditional=" + std::to_string(c.conditional_frame_index);
    out += " trajectory=" + c.trajectory_file;
    out += " frames=" + join_strings(c.frame_files);
    out += '\n';
  }
  write_file(path, out.data(), out.size());
}

std::vector<ClipManifest> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::vector<ClipManifest> clips;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok != "clip") fail_line(path, line_no, "expected 'clip'");
    ClipManifest c;
    bool saw_scene = false, saw_traj_seed = false, saw_indices = false,
         saw_cond = false, saw_trajectory = false, saw_frames = false;
    while (ss >> tok) {
      const size_t eq = tok.find('=');
      if (eq == std::string::npos)
        fail_line(path, line_no, "expected key=value, got " + tok);
      const std::string key = tok.substr(0, eq);
      const std::string value = tok.substr(eq + 1);
      try {
        if (key == "scene_seed") {
          c.scene_seed = std::stoull(value);
          saw_scene = true;
        } else if (key == "traj_seed") {
          c.traj_seed = std::stoull(value);
          saw_traj_seed = true;
        } else if (key == "indices") {
          if (!value.empty())
            for (const std::string& s : split(value, ','))
              c.sampled_indices.push_back(std::stoi(s));
          saw_indices = true;
        } else if (key == "conditional") {
          c.conditional_frame_index = std::stoi(value);
          saw_cond = true;
        } else if (key == "trajectory") {
          c.trajectory_file = value;
          saw_trajectory = true;
        } else if (key == "frames") {
          if (!value.empty()) c.frame_files = split(value, ',');
          saw_frames = true;
        } else {
          fail_line(path, line_no, "unknown key " + key);
        }
      } catch (const parse_error&) {
        throw;
      } catch (const std::exception&) {
        fail_line(path, line_no, "bad value for " + key + ": " + value);
      }
    }
    if (!saw_scene || !saw_traj_seed || !saw_indices || !saw_cond ||
        !saw_trajectory || !saw_frames)
      fail_line(path, line_no, "missing required key");
    clips.push_back(std::move(c));
  }
  return clips;
}

// --- Correspondences ------------------------------------------------------

void write_correspondences(const std::string& path,
                           const std::vector<Correspondence>& points) {
  std::string out;
  char buf[96];
  for (const Correspondence& c : points) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g", c.point.x(),
                  c.point.y(), c.point.z());
    out += buf;
    for (const CorrespondenceObs& o : c.obs) {
      std::snprintf(buf, sizeof(buf), " %d %.17g %.17g %d", o.frame, o.pixel.u,
                    o.pixel.v, o.visible ? 1 : 0);
      out += buf;
    }
    out += '\n';
  }
  write_file(path, out.data(), out.size());
}

std::vector<Correspondence> read_correspondences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::vector<Correspondence> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Correspondence c;
    if (!(ss >> c.point.x() >> c.point.y() >> c.point.z()))
      fail_line(path, line_no, "expected point x y z");
    CorrespondenceObs o;
    int vis = 0;
    while (ss >> o.frame) {
      if (!(ss >> o.pixel.u >> o.pixel.v >> vis) || (vis != 0 && vis != 1))
        fail_line(path, line_no, "expected frame u v 0|1");
      o.visible = vis != 0;
      c.obs.push_back(o);
    }
    if (!ss.eof()) fail_line(path, line_no, "trailing tokens");
    points.push_back(std::move(c));
  }
  return points;
}

}  // namespace epipano

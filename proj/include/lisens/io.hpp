// -*-c++-*---------------------------------------------------------------------------------------
// Copyright 2026 The lisens authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LISENS_IO_HPP
#define LISENS_IO_HPP

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lisens/codes.hpp"
#include "lisens/error.hpp"
#include "lisens/recovery.hpp"
#include "lisens/types.hpp"

static_assert(std::endian::native == std::endian::little, "binary containers assume a little-endian host");

namespace lisens::io
{
namespace fs = std::filesystem;

// ------------------------------------------------------------------ portable graymap

/// Reads a binary (P5) graymap with 8- or 16-bit samples, scaled to [0, 1].
inline Image read_pgm(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::io, "cannot open " + path.string());
  auto token = [&in, &path]() {
    std::string t;
    while (true) {
      const int ch = in.peek();
      if (ch == std::char_traits<char>::eof()) break;
      if (ch == '#') {
        std::string skip;
        std::getline(in, skip);
      } else if (std::isspace(ch)) {
        in.get();
      } else {
        break;
      }
    }
    in >> t;
    require(!t.empty(), ErrorKind::io, "truncated graymap header in " + path.string());
    return t;
  };
  require(token() == "P5", ErrorKind::io, path.string() + " is not a binary graymap");
  const long cols = std::stol(token());
  const long rows = std::stol(token());
  const long maxval = std::stol(token());
  require(
    cols > 0 && rows > 0 && maxval > 0 && maxval <= 65535, ErrorKind::io,
    "bad graymap header in " + path.string());
  in.get();  // single whitespace before the raster
  const int bytes = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raster(static_cast<std::size_t>(rows * cols * bytes));
  in.read(reinterpret_cast<char *>(raster.data()), static_cast<std::streamsize>(raster.size()));
  require(in.gcount() == static_cast<std::streamsize>(raster.size()), ErrorKind::io, "truncated raster in " + path.string());

  Image x(rows, cols);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r * cols + c) * bytes;
      const unsigned v = bytes == 2 ? (unsigned(raster[i]) << 8) | raster[i + 1] : raster[i];
      x(r, c) = static_cast<double>(v) / static_cast<double>(maxval);
    }
  }
  return x;
}

/// Writes values in [0, 1] (clamped) as a P5 graymap with 8- or 16-bit samples.
inline void write_pgm(const fs::path & path, const Image & x, int bits = 16)
{
  require(bits == 8 || bits == 16, ErrorKind::invalid_argument, "graymap depth must be 8 or 16 bits");
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::io, "cannot write " + path.string());
  const unsigned maxval = bits == 16 ? 65535u : 255u;
  out << "P5\n" << x.cols() << ' ' << x.rows() << '\n' << maxval << '\n';
  std::vector<unsigned char> raster;
  raster.reserve(static_cast<std::size_t>(x.size()) * (bits / 8));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const double v = std::clamp(x(r, c), 0.0, 1.0);
      const auto q = static_cast<unsigned>(std::lround(v * maxval));
      if (bits == 16) raster.push_back(static_cast<unsigned char>(q >> 8));
      raster.push_back(static_cast<unsigned char>(q & 0xff));
    }
  }
  out.write(reinterpret_cast<const char *>(raster.data()), static_cast<std::streamsize>(raster.size()));
  require(out.good(), ErrorKind::io, "failed writing " + path.string());
}

// ------------------------------------------------------------------ raw float container
//
// offset  size            field
// 0       4               magic "LSRF"
// 4       4  u32          version (1)
// 8       4  u32          rows
// 12      4  u32          cols
// 16      4  u32          frames
// 20      4*r*c*f f32     samples, frame-major, row-major within a frame, little-endian

inline constexpr char raw_magic[4] = {'L', 'S', 'R', 'F'};
inline constexpr std::uint32_t raw_version = 1;

namespace detail
{
template <class T>
void put(std::ostream & os, T v)
{
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <class T>
T get(std::istream & is, const fs::path & path)
{
  T v{};
  is.read(reinterpret_cast<char *>(&v), sizeof(T));
  require(is.gcount() == sizeof(T), ErrorKind::io, "truncated file " + path.string());
  return v;
}

inline void check_magic(std::istream & is, const char (&magic)[4], const fs::path & path)
{
  char m[4] = {};
  is.read(m, 4);
  require(is.gcount() == 4 && std::memcmp(m, magic, 4) == 0, ErrorKind::io, "bad magic in " + path.string());
}
}  // namespace detail

inline void write_raw(const fs::path & path, const std::vector<Image> & frames)
{
  require(!frames.empty(), ErrorKind::invalid_argument, "nothing to write");
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::io, "cannot write " + path.string());
  out.write(raw_magic, 4);
  detail::put<std::uint32_t>(out, raw_version);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(frames.front().rows()));
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(frames.front().cols()));
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(frames.size()));
  for (const auto & f : frames) {
    require(
      f.rows() == frames.front().rows() && f.cols() == frames.front().cols(),
      ErrorKind::dimension_mismatch, "frames differ in size");
    const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = f.cast<float>();
    out.write(reinterpret_cast<const char *>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(float)));
  }
  require(out.good(), ErrorKind::io, "failed writing " + path.string());
}

inline std::vector<Image> read_raw(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::io, "cannot open " + path.string());
  detail::check_magic(in, raw_magic, path);
  const auto version = detail::get<std::uint32_t>(in, path);
  require(version == raw_version, ErrorKind::io, "unsupported container version in " + path.string());
  const auto rows = detail::get<std::uint32_t>(in, path);
  const auto cols = detail::get<std::uint32_t>(in, path);
  const auto frames = detail::get<std::uint32_t>(in, path);
  require(rows > 0 && cols > 0 && frames > 0, ErrorKind::io, "empty container " + path.string());
  std::vector<Image> out;
  Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
  for (std::uint32_t k = 0; k < frames; ++k) {
    in.read(reinterpret_cast<char *>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(float)));
    require(
      in.gcount() == static_cast<std::streamsize>(rm.size() * sizeof(float)), ErrorKind::io,
      "truncated samples in " + path.string());
    out.emplace_back(rm.cast<double>());
  }
  return out;
}

// ------------------------------------------------------------------ pattern schedules
//
// offset  size            field
// 0       4               magic "LSPS"
// 4       4  u32          version (1)
// 8       4  u32          order N
// 12      4  u32          count T
// 16      8  u64          seed
// 24      4  u32          mean-track period (0 = disabled)
// 28      4*N u32         column permutation
// ..      4*N u32         row visiting order
// ..      T*ceil(N/8)     0/1 patterns, one row per slot, bit i at byte i/8, mask 0x80 >> (i%8)

inline constexpr char schedule_magic[4] = {'L', 'S', 'P', 'S'};
inline constexpr std::uint32_t schedule_version = 1;

inline void write_schedule(const fs::path & path, const PatternSchedule & s)
{
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::io, "cannot write " + path.string());
  out.write(schedule_magic, 4);
  detail::put<std::uint32_t>(out, schedule_version);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(s.order()));
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  detail::put<std::uint64_t>(out, s.seed());
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(s.mean_track_period()));
  for (auto v : s.permutation()) detail::put<std::uint32_t>(out, v);
  for (auto v : s.row_order()) detail::put<std::uint32_t>(out, v);
  const std::size_t row_bytes = (s.order() + 7) / 8;
  std::vector<unsigned char> row(row_bytes);
  for (std::size_t t = 0; t < s.size(); ++t) {
    std::fill(row.begin(), row.end(), 0);
    for (std::size_t i = 0; i < s.order(); ++i) {
      if (s.pattern(t, i)) row[i / 8] |= static_cast<unsigned char>(0x80u >> (i % 8));
    }
    out.write(reinterpret_cast<const char *>(row.data()), static_cast<std::streamsize>(row_bytes));
  }
  require(out.good(), ErrorKind::io, "failed writing " + path.string());
}

/// Reads a schedule and recovers each slot's Hadamard row from its bits. Fails when a row is
/// not a row of the stated column-permuted Hadamard matrix.
inline PatternSchedule read_schedule(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::io, "cannot open " + path.string());
  detail::check_magic(in, schedule_magic, path);
  require(
    detail::get<std::uint32_t>(in, path) == schedule_version, ErrorKind::io,
    "unsupported schedule version in " + path.string());
  const auto order = detail::get<std::uint32_t>(in, path);
  const auto count = detail::get<std::uint32_t>(in, path);
  const auto seed = detail::get<std::uint64_t>(in, path);
  const auto period = detail::get<std::uint32_t>(in, path);
  require(is_power_of_two(order) && count > 0, ErrorKind::io, "bad schedule header in " + path.string());
  std::vector<std::uint32_t> perm(order), rows(order);
  for (auto & v : perm) v = detail::get<std::uint32_t>(in, path);
  for (auto & v : rows) v = detail::get<std::uint32_t>(in, path);
  for (auto v : perm) require(v < order, ErrorKind::io, "permutation entry out of range in " + path.string());

  const std::size_t row_bytes = (order + 7) / 8;
  std::vector<unsigned char> row(row_bytes);
  std::vector<int> natural(order);
  std::vector<std::int32_t> slots(count);
  for (std::uint32_t t = 0; t < count; ++t) {
    in.read(reinterpret_cast<char *>(row.data()), static_cast<std::streamsize>(row_bytes));
    require(in.gcount() == static_cast<std::streamsize>(row_bytes), ErrorKind::io, "truncated patterns in " + path.string());
    for (std::uint32_t i = 0; i < order; ++i) {
      const bool bit = row[i / 8] & (0x80u >> (i % 8));
      natural[perm[i]] = bit ? 1 : -1;
    }
    // H[r][2^b] = -1 exactly when bit b of r is set.
    std::uint32_t r = 0;
    for (std::uint32_t b = 1; b < order; b <<= 1) {
      if (natural[b] < 0) r |= b;
    }
    for (std::uint32_t c = 0; c < order; ++c) {
      require(
        natural[c] == sylvester_entry(r, c), ErrorKind::io,
        "slot " + std::to_string(t) + " is not a Hadamard row in " + path.string());
    }
    const bool tracking = r == 0 && period != 0 && t % period == 0;
    slots[t] = tracking ? -1 : static_cast<std::int32_t>(r);
  }
  try {
    return PatternSchedule(order, seed, period, std::move(perm), std::move(rows), std::move(slots));
  } catch (const Error & e) {
    fail(ErrorKind::io, std::string("invalid schedule in ") + path.string() + ": " + e.what());
  }
}

/// Human-readable key = value summary written next to the binary schedule.
inline void write_schedule_manifest(const fs::path & path, const PatternSchedule & s, const fs::path & binary)
{
  std::ofstream out(path);
  require(out.good(), ErrorKind::io, "cannot write " + path.string());
  out << "format = lisens-schedule\n"
      << "version = " << schedule_version << '\n'
      << "binary = " << binary.filename().string() << '\n'
      << "id = " << s.id() << '\n'
      << "order = " << s.order() << '\n'
      << "count = " << s.size() << '\n'
      << "seed = " << s.seed() << '\n'
      << "mean_track_period = " << s.mean_track_period() << '\n'
      << "mean_track_count = " << s.mean_track_indices().size() << '\n'
      << "row_bytes = " << (s.order() + 7) / 8 << '\n'
      << "pattern_offset = " << 28 + 8 * s.order() << '\n';
}

// ------------------------------------------------------------------ measurements

inline void write_measurements(
  const fs::path & raw_path, const fs::path & sidecar_path, const MeasurementSet & m,
  const std::string & camera_model)
{
  write_raw(raw_path, {m.Y});
  nlohmann::json j;
  j["format"] = "lisens-measurements";
  j["version"] = 1;
  j["data"] = raw_path.filename().string();
  j["rows"] = m.Y.rows();
  j["cols"] = m.Y.cols();
  j["camera_model"] = camera_model;
  j["noise_sigma"] = m.noise_sigma;
  j["seed"] = m.seed;
  j["schedule_ref"] = m.schedule_ref;
  j["timestamps"] = m.timestamps;
  std::ofstream out(sidecar_path);
  require(out.good(), ErrorKind::io, "cannot write " + sidecar_path.string());
  out << std::setw(2) << j << '\n';
}

struct LoadedMeasurements
{
  MeasurementSet set;
  std::string camera_model;
};

inline LoadedMeasurements read_measurements(const fs::path & sidecar_path)
{
  std::ifstream in(sidecar_path);
  require(in.good(), ErrorKind::io, "cannot open " + sidecar_path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception & e) {
    fail(ErrorKind::io, "malformed sidecar " + sidecar_path.string() + ": " + e.what());
  }
  LoadedMeasurements out;
  try {
    require(j.at("format") == "lisens-measurements", ErrorKind::io, "not a measurement sidecar");
    const auto frames = read_raw(sidecar_path.parent_path() / j.at("data").get<std::string>());
    out.set.Y = frames.front();
    out.set.timestamps = j.at("timestamps").get<std::vector<double>>();
    out.set.noise_sigma = j.at("noise_sigma").get<double>();
    out.set.seed = j.at("seed").get<std::uint64_t>();
    out.set.schedule_ref = j.at("schedule_ref").get<std::string>();
    out.camera_model = j.at("camera_model").get<std::string>();
  } catch (const nlohmann::json::exception & e) {
    fail(ErrorKind::io, "incomplete sidecar " + sidecar_path.string() + ": " + e.what());
  }
  require(
    out.set.timestamps.size() == out.set.count(), ErrorKind::io,
    "timestamp count differs from measurement count in " + sidecar_path.string());
  return out;
}

// ------------------------------------------------------------------ solver diagnostics

inline void write_diagnostics(const fs::path & path, const RecoveredVideo & v)
{
  std::ofstream out(path);
  require(out.good(), ErrorKind::io, "cannot write " + path.string());
  out << "iteration,residual,tv,best_tv\n" << std::setprecision(12);
  for (const auto & h : v.history) {
    out << h.iteration << ',' << h.residual << ',' << h.tv << ',';
    if (std::isinf(h.best_tv)) {
      out << "inf\n";
    } else {
      out << h.best_tv << '\n';
    }
  }
}

}  // namespace lisens::io

#endif  // LISENS_IO_HPP

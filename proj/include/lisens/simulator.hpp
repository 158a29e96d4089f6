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

#ifndef LISENS_SIMULATOR_HPP
#define LISENS_SIMULATOR_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lisens/codes.hpp"
#include "lisens/error.hpp"
#include "lisens/optics.hpp"
#include "lisens/types.hpp"

namespace lisens
{
/// Acquisition time of each slot. Bursts of `frames` exposures are separated by the cool-down;
/// without burst timing slots are uniformly spaced at the camera's pattern rate.
inline std::vector<double> slot_timestamps(const CameraConfig & camera, std::size_t count)
{
  std::vector<double> ts(count);
  if (camera.burst) {
    const auto & b = *camera.burst;
    const double burst_span = static_cast<double>(b.frames) * b.frame_period + b.cooldown;
    for (std::size_t t = 0; t < count; ++t) {
      ts[t] = static_cast<double>(t / b.frames) * burst_span +
              static_cast<double>(t % b.frames) * b.frame_period;
    }
  } else {
    const double period = 1.0 / pattern_rate(camera);
    for (std::size_t t = 0; t < count; ++t) ts[t] = static_cast<double>(t) * period;
  }
  return ts;
}

/// Ground-truth frame shown on the DMD at time `ts` (zero-order hold).
inline std::size_t active_frame(const SceneVideo & scene, double ts)
{
  // Small slack so that ts = k / frame_rate lands on frame k despite rounding.
  const double pos = std::floor(ts * scene.frame_rate + 1e-9);
  if (pos <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(pos), scene.size() - 1);
}

namespace detail
{
inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Noise stream for one slot; depends only on (seed, slot) so slots can be simulated in any order.
inline std::mt19937_64 slot_rng(std::uint64_t seed, std::size_t slot)
{
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(slot)));
}

inline void add_noise(Eigen::Ref<Eigen::VectorXd> column, double sigma, std::uint64_t seed, std::size_t slot)
{
  if (sigma == 0.0) return;
  auto rng = slot_rng(seed, slot);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (Eigen::Index i = 0; i < column.size(); ++i) column[i] += gauss(rng);
}

inline void check_sim_args(const SceneVideo & scene, double sigma, const CameraConfig & camera)
{
  scene.validate();
  camera.validate();
  require(sigma >= 0.0 && std::isfinite(sigma), ErrorKind::invalid_argument, "noise sigma must be non-negative");
}
}  // namespace detail

/// Line-sensor acquisition y_t = X_t phi_t + e_t for the first `count` slots of `schedule`
/// (all of them when `count` is 0).
inline MeasurementSet simulate_lisens(
  const SceneVideo & scene, const PatternSchedule & schedule, double noise_sigma, std::uint64_t seed,
  const CameraConfig & camera, std::size_t count = 0)
{
  detail::check_sim_args(scene, noise_sigma, camera);
  require(
    static_cast<std::size_t>(scene.cols()) == schedule.order(), ErrorKind::dimension_mismatch,
    "pattern length " + std::to_string(schedule.order()) + " differs from scene width " +
      std::to_string(scene.cols()));
  if (count == 0) count = schedule.size();
  require(count <= schedule.size(), ErrorKind::invalid_argument, "more slots requested than scheduled");

  MeasurementSet m;
  m.timestamps = slot_timestamps(camera, count);
  m.noise_sigma = noise_sigma;
  m.seed = seed;
  m.schedule_ref = schedule.id();
  m.Y.resize(scene.rows(), static_cast<Eigen::Index>(count));
  for (std::size_t t = 0; t < count; ++t) {
    const Image & x = scene.frames[active_frame(scene, m.timestamps[t])];
    m.Y.col(t).noalias() = x * schedule.binary_column(t);
    detail::add_noise(m.Y.col(t), noise_sigma, seed, t);
  }
  return m;
}

/// Single-pixel acquisition y_t = <X_t, P_t> + e_t with arbitrary full-frame binary patterns.
inline MeasurementSet simulate_spc(
  const SceneVideo & scene, std::span<const Image> patterns, double noise_sigma, std::uint64_t seed,
  const CameraConfig & camera)
{
  detail::check_sim_args(scene, noise_sigma, camera);
  require(!patterns.empty(), ErrorKind::invalid_argument, "no patterns supplied");
  MeasurementSet m;
  m.timestamps = slot_timestamps(camera, patterns.size());
  m.noise_sigma = noise_sigma;
  m.seed = seed;
  m.Y.resize(1, static_cast<Eigen::Index>(patterns.size()));
  for (std::size_t t = 0; t < patterns.size(); ++t) {
    require(
      patterns[t].rows() == scene.rows() && patterns[t].cols() == scene.cols(),
      ErrorKind::dimension_mismatch, "SPC pattern size differs from scene size");
    const Image & x = scene.frames[active_frame(scene, m.timestamps[t])];
    m.Y(0, t) = x.cwiseProduct(patterns[t]).sum();
    detail::add_noise(m.Y.col(t), noise_sigma, seed, t);
  }
  return m;
}

/// Reshape schedule slot t (order rows*cols) into a full-frame pattern, row-major.
inline Image spc_pattern(const PatternSchedule & schedule, std::size_t t, Eigen::Index rows, Eigen::Index cols)
{
  require(
    schedule.order() == static_cast<std::size_t>(rows * cols), ErrorKind::dimension_mismatch,
    "SPC schedule order must equal the scene pixel count");
  Image p(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      p(r, c) = schedule.pattern(t, static_cast<std::size_t>(r * cols + c));
    }
  }
  return p;
}

/// SPC acquisition driven by a schedule whose codes are flattened row-major frames.
inline MeasurementSet simulate_spc(
  const SceneVideo & scene, const PatternSchedule & schedule, double noise_sigma, std::uint64_t seed,
  const CameraConfig & camera, std::size_t count = 0)
{
  detail::check_sim_args(scene, noise_sigma, camera);
  require(
    schedule.order() == static_cast<std::size_t>(scene.rows() * scene.cols()),
    ErrorKind::dimension_mismatch, "SPC schedule order must equal the scene pixel count");
  if (count == 0) count = schedule.size();
  require(count <= schedule.size(), ErrorKind::invalid_argument, "more slots requested than scheduled");

  MeasurementSet m;
  m.timestamps = slot_timestamps(camera, count);
  m.noise_sigma = noise_sigma;
  m.seed = seed;
  m.schedule_ref = schedule.id();
  m.Y.resize(1, static_cast<Eigen::Index>(count));
  for (std::size_t t = 0; t < count; ++t) {
    const Image & x = scene.frames[active_frame(scene, m.timestamps[t])];
    double acc = 0.0;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        acc += schedule.pattern(t, static_cast<std::size_t>(r * x.cols() + c)) * x(r, c);
      }
    }
    m.Y(0, t) = acc;
    detail::add_noise(m.Y.col(t), noise_sigma, seed, t);
  }
  return m;
}

/// Contiguous run of measurements associated with one recovered frame.
struct MeasurementBlock
{
  std::size_t first = 0;          // slot index of the first column
  Eigen::MatrixXd Y;              // sensor x k
  Eigen::MatrixXd phi;            // order x k, signed codes
  std::vector<bool> mean_track;   // per column

  std::size_t size() const { return static_cast<std::size_t>(Y.cols()); }

  /// Same block with the mean-tracking columns removed.
  MeasurementBlock without_tracking() const
  {
    std::vector<Eigen::Index> keep;
    for (std::size_t k = 0; k < mean_track.size(); ++k) {
      if (!mean_track[k]) keep.push_back(static_cast<Eigen::Index>(k));
    }
    MeasurementBlock b;
    b.first = first;
    b.Y.resize(Y.rows(), static_cast<Eigen::Index>(keep.size()));
    b.phi.resize(phi.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
      b.Y.col(j) = Y.col(keep[j]);
      b.phi.col(j) = phi.col(keep[j]);
    }
    b.mean_track.assign(keep.size(), false);
    return b;
  }
};

/// Split T measurements into `frames` contiguous blocks whose sizes differ by at most one,
/// larger blocks first.
inline std::vector<MeasurementBlock> group_frames(
  const MeasurementSet & measurements, const PatternSchedule & schedule, std::size_t frames)
{
  const std::size_t total = measurements.count();
  require(
    frames >= 1 && frames <= total, ErrorKind::invalid_argument,
    "frame count must lie in [1, " + std::to_string(total) + "]");
  require(total <= schedule.size(), ErrorKind::dimension_mismatch, "more measurements than schedule slots");

  std::vector<MeasurementBlock> blocks;
  blocks.reserve(frames);
  const std::size_t base = total / frames;
  const std::size_t extra = total % frames;
  std::size_t first = 0;
  for (std::size_t k = 0; k < frames; ++k) {
    const std::size_t n = base + (k < extra ? 1 : 0);
    MeasurementBlock b;
    b.first = first;
    b.Y = measurements.Y.middleCols(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(n));
    b.phi = schedule.signed_block(first, n);
    b.mean_track.resize(n);
    for (std::size_t j = 0; j < n; ++j) b.mean_track[j] = schedule.is_mean_track(first + j);
    blocks.push_back(std::move(b));
    first += n;
  }
  return blocks;
}

}  // namespace lisens

#endif  // LISENS_SIMULATOR_HPP

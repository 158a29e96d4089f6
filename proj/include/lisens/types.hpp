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

#ifndef LISENS_TYPES_HPP
#define LISENS_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lisens/error.hpp"

namespace lisens
{
/// Row-major semantics: (row, col) = (line-sensor axis, multiplexed axis).
using Image = Eigen::MatrixXd;

/// Ground-truth scene as seen on the DMD plane. Intensities are normalized radiance in [0, 1].
struct SceneVideo
{
  std::vector<Image> frames;
  double frame_rate = 1.0;  // frames/s of the ground-truth sequence

  bool empty() const { return frames.empty(); }
  std::size_t size() const { return frames.size(); }
  Eigen::Index rows() const { return frames.empty() ? 0 : frames.front().rows(); }
  Eigen::Index cols() const { return frames.empty() ? 0 : frames.front().cols(); }
  double duration() const { return static_cast<double>(frames.size()) / frame_rate; }

  void validate() const
  {
    require(!frames.empty(), ErrorKind::invalid_argument, "scene has no frames");
    require(frame_rate > 0.0, ErrorKind::invalid_argument, "scene frame rate must be positive");
    for (const auto & f : frames) {
      require(
        f.rows() == rows() && f.cols() == cols() && f.size() > 0, ErrorKind::dimension_mismatch,
        "scene frames differ in size");
      for (Eigen::Index i = 0; i < f.size(); ++i) {
        const double v = f.data()[i];
        require(
          std::isfinite(v) && v >= 0.0 && v <= 1.0, ErrorKind::invalid_argument,
          "scene intensity outside [0, 1]");
      }
    }
  }
};

/// Sensor readings stacked column-wise, one column per displayed pattern.
struct MeasurementSet
{
  Eigen::MatrixXd Y;               // sensor pixels x patterns
  std::vector<double> timestamps;  // seconds, one per column
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::string schedule_ref;

  std::size_t count() const { return static_cast<std::size_t>(Y.cols()); }
};

}  // namespace lisens

#endif  // LISENS_TYPES_HPP

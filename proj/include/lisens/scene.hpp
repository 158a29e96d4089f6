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

#ifndef LISENS_SCENE_HPP
#define LISENS_SCENE_HPP

#include <cmath>
#include <string>

#include "lisens/error.hpp"
#include "lisens/types.hpp"

namespace lisens
{
namespace detail
{
inline void fill_rect(Image & x, double r0, double r1, double c0, double c1, double value)
{
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const double fr = (static_cast<double>(r) + 0.5) / static_cast<double>(x.rows());
      const double fc = (static_cast<double>(c) + 0.5) / static_cast<double>(x.cols());
      if (fr >= r0 && fr < r1 && fc >= c0 && fc < c1) x(r, c) = value;
    }
  }
}

inline void fill_disc(Image & x, double cr, double cc, double radius, double value)
{
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const double fr = (static_cast<double>(r) + 0.5) / static_cast<double>(x.rows()) - cr;
      const double fc = (static_cast<double>(c) + 0.5) / static_cast<double>(x.cols()) - cc;
      if (fr * fr + fc * fc <= radius * radius) x(r, c) = value;
    }
  }
}
}  // namespace detail

// Piecewise-constant test scenes. Geometry is given in fractions of the frame so every size
// shows the same picture.

/// Background, a rectangle and a disc overlapping it.
inline Image phantom(Eigen::Index rows, Eigen::Index cols)
{
  Image x = Image::Constant(rows, cols, 0.2);
  detail::fill_rect(x, 0.2, 0.8, 0.25, 0.7, 0.6);
  detail::fill_disc(x, 0.5, 0.45, 0.15, 1.0);
  return x;
}

inline Image blocks_scene(Eigen::Index rows, Eigen::Index cols)
{
  Image x = Image::Constant(rows, cols, 0.1);
  detail::fill_rect(x, 0.1, 0.45, 0.1, 0.5, 0.9);
  detail::fill_rect(x, 0.55, 0.9, 0.3, 0.85, 0.5);
  detail::fill_rect(x, 0.2, 0.4, 0.6, 0.9, 0.7);
  return x;
}

inline Image discs_scene(Eigen::Index rows, Eigen::Index cols)
{
  Image x = Image::Constant(rows, cols, 0.3);
  detail::fill_disc(x, 0.35, 0.35, 0.2, 0.8);
  detail::fill_disc(x, 0.7, 0.65, 0.15, 0.05);
  return x;
}

/// Bright square panning across the multiplexed (column) axis by `step` pixels per frame.
inline SceneVideo translating_square(
  Eigen::Index size, std::size_t frames, Eigen::Index square, Eigen::Index step, double frame_rate,
  double background = 0.4)
{
  require(square > 0 && square < size, ErrorKind::invalid_argument, "square must fit inside the frame");
  SceneVideo v;
  v.frame_rate = frame_rate;
  const Eigen::Index travel = size - square;
  const Eigen::Index top = (size - square) / 3;
  for (std::size_t k = 0; k < frames; ++k) {
    Image x = Image::Constant(size, size, background);
    const Eigen::Index left = (size / 8 + static_cast<Eigen::Index>(k) * step) % (travel + 1);
    x.block(top, left, square, square).setConstant(1.0);
    v.frames.push_back(std::move(x));
  }
  return v;
}

/// Named synthetic scene: phantom, blocks or discs.
inline Image synthetic_scene(const std::string & name, Eigen::Index rows, Eigen::Index cols)
{
  if (name == "phantom") return phantom(rows, cols);
  if (name == "blocks") return blocks_scene(rows, cols);
  if (name == "discs") return discs_scene(rows, cols);
  fail(ErrorKind::config, "unknown synthetic scene '" + name + "'");
}

/// Static scene wrapped as a one-frame video.
inline SceneVideo still(Image x, double frame_rate = 1.0)
{
  SceneVideo v;
  v.frame_rate = frame_rate;
  v.frames.push_back(std::move(x));
  return v;
}

}  // namespace lisens

#endif  // LISENS_SCENE_HPP

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

#ifndef LISENS_OPTICS_HPP
#define LISENS_OPTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lisens/error.hpp"

namespace lisens
{
/// Readout buffer behaviour: `frames` exposures of `frame_period` seconds, then a cool-down.
struct BurstTiming
{
  std::size_t frames = 0;
  double frame_period = 0.0;  // s
  double cooldown = 0.0;      // s
};

struct CameraConfig
{
  std::size_t pixels = 1;  // F, sensor pixel count
  double dmd_rate = 0.0;   // R_DMD, Hz
  double adc_rate = 0.0;   // R_ADC, samples/s
  std::size_t dmd_cols = 0;
  std::size_t dmd_rows = 0;
  std::optional<BurstTiming> burst;

  void validate() const
  {
    require(pixels > 0, ErrorKind::invalid_argument, "camera pixel count must be positive");
    require(dmd_rate > 0.0, ErrorKind::invalid_argument, "DMD rate must be positive");
    require(adc_rate > 0.0, ErrorKind::invalid_argument, "ADC rate must be positive");
    require(dmd_cols > 0 && dmd_rows > 0, ErrorKind::invalid_argument, "DMD resolution must be positive");
    if (burst) {
      require(burst->frames > 0, ErrorKind::invalid_argument, "burst frame count must be positive");
      require(burst->frame_period > 0.0, ErrorKind::invalid_argument, "frame period must be positive");
      require(burst->cooldown >= 0.0, ErrorKind::invalid_argument, "cool-down must be non-negative");
    }
  }
};

/// Measurements per second of a spatial-multiplexing camera with `pixels` sensor pixels:
/// F * min(R_DMD, R_ADC / F).
inline double measurement_rate(double pixels, double dmd_rate, double adc_rate)
{
  return pixels * std::min(dmd_rate, adc_rate / pixels);
}

inline double measurement_rate(const CameraConfig & config)
{
  return measurement_rate(static_cast<double>(config.pixels), config.dmd_rate, config.adc_rate);
}

/// Smallest pixel count that reaches the readout-limited plateau, ceil(R_ADC / R_DMD).
inline std::size_t f_min(const CameraConfig & config)
{
  const double ratio = config.adc_rate / config.dmd_rate;
  // A ratio that is an integer up to rounding must not be bumped to the next pixel.
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(std::max(1.0, nearest));
  }
  return static_cast<std::size_t>(std::max(1.0, std::ceil(ratio)));
}

struct BurstRate
{
  double frames_per_second = 0.0;
  double measurements_per_second = 0.0;
};

/// Sustained rate of a sensor that reads bursts of frames and then pauses.
inline BurstRate burst_rate(const CameraConfig & config)
{
  require(config.burst.has_value(), ErrorKind::invalid_argument, "camera has no burst timing");
  const auto & b = *config.burst;
  const double n = static_cast<double>(b.frames);
  BurstRate r;
  r.frames_per_second = n / (n * b.frame_period + b.cooldown);
  r.measurements_per_second = static_cast<double>(config.pixels) * r.frames_per_second;
  return r;
}

/// Patterns per second actually sensed: burst-limited when timing is known, else min(R_DMD, R_ADC/F).
inline double pattern_rate(const CameraConfig & config)
{
  if (config.burst) return burst_rate(config).frames_per_second;
  return std::min(config.dmd_rate, config.adc_rate / static_cast<double>(config.pixels));
}

/// Rate used to convert capture durations into measurement counts.
inline double effective_measurement_rate(const CameraConfig & config)
{
  return static_cast<double>(config.pixels) * pattern_rate(config);
}

/// (F, measurement rate) samples on a logarithmic grid from 1 to `max_pixels`.
inline std::vector<std::pair<std::size_t, double>> rate_curve(
  const CameraConfig & config, std::size_t max_pixels, std::size_t points_per_decade = 10)
{
  std::vector<std::pair<std::size_t, double>> curve;
  const double decades = std::log10(static_cast<double>(std::max<std::size_t>(max_pixels, 1)));
  const auto steps = static_cast<std::size_t>(std::ceil(decades * points_per_decade));
  std::size_t last = 0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double f = std::pow(10.0, decades * static_cast<double>(k) / std::max<std::size_t>(steps, 1));
    const auto pixels = std::min(max_pixels, static_cast<std::size_t>(std::llround(f)));
    if (pixels == last) continue;
    last = pixels;
    curve.emplace_back(
      pixels, measurement_rate(static_cast<double>(pixels), config.dmd_rate, config.adc_rate));
  }
  return curve;
}

struct CylindricalDesign
{
  double focal_exact = 0.0;   // mm
  double focal_approx = 0.0;  // mm, 2 f_r h_L / d_r
  double to_sensor = 0.0;     // u_c, mm
  double to_relay = 0.0;      // v_c, mm
};

/// Cylindrical lens that images the relay aperture (diameter d_r) onto a sensor of height h_L,
/// placed within the 2 f_r gap between relay and sensor.
inline CylindricalDesign design_cylindrical(double relay_focal, double relay_diameter, double sensor_height)
{
  require(
    relay_focal > 0.0 && relay_diameter > 0.0 && sensor_height > 0.0, ErrorKind::invalid_argument,
    "optical lengths must be positive");
  const double sum = relay_diameter + sensor_height;
  CylindricalDesign d;
  d.to_sensor = 2.0 * relay_focal * sensor_height / sum;
  d.to_relay = 2.0 * relay_focal * relay_diameter / sum;
  d.focal_exact = 2.0 * relay_focal * (sensor_height / sum) * (relay_diameter / sum);
  d.focal_approx = 2.0 * relay_focal * sensor_height / relay_diameter;
  return d;
}

inline double relay_magnification(double dmd_width, double sensor_width)
{
  require(dmd_width > 0.0 && sensor_width > 0.0, ErrorKind::invalid_argument, "widths must be positive");
  return sensor_width / dmd_width;
}

/// First-order layout of the DMD-to-line-sensor relay. Lengths in mm.
struct OpticalDesign
{
  double dmd_width = 0.0;
  double dmd_height = 0.0;
  double sensor_width = 0.0;
  double sensor_height = 0.0;
  double relay_focal = 0.0;
  double relay_diameter = 0.0;
  double cyl_focal = 0.0;
  double cyl_to_sensor = 0.0;
  double cyl_to_relay = 0.0;
  double magnification = 0.0;

  /// Largest relative violation among the three placement constraints.
  double constraint_error() const
  {
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    return std::max(
      {rel(cyl_to_sensor + cyl_to_relay, 2.0 * relay_focal),
       rel(1.0 / cyl_to_sensor + 1.0 / cyl_to_relay, 1.0 / cyl_focal),
       rel(cyl_to_sensor / cyl_to_relay, sensor_height / relay_diameter)});
  }
};

inline OpticalDesign make_optical_design(
  double dmd_width, double dmd_height, double sensor_width, double sensor_height,
  double relay_focal, double relay_diameter)
{
  require(
    dmd_width > 0.0 && dmd_height > 0.0 && sensor_width > 0.0 && sensor_height > 0.0,
    ErrorKind::invalid_argument, "optical lengths must be positive");
  const auto cyl = design_cylindrical(relay_focal, relay_diameter, sensor_height);
  OpticalDesign d;
  d.dmd_width = dmd_width;
  d.dmd_height = dmd_height;
  d.sensor_width = sensor_width;
  d.sensor_height = sensor_height;
  d.relay_focal = relay_focal;
  d.relay_diameter = relay_diameter;
  d.cyl_focal = cyl.focal_exact;
  d.cyl_to_sensor = cyl.to_sensor;
  d.cyl_to_relay = cyl.to_relay;
  d.magnification = relay_magnification(dmd_width, sensor_width);
  return d;
}

}  // namespace lisens

#endif  // LISENS_OPTICS_HPP

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

#include <gtest/gtest.h>

#include <random>

#include "lisens/optics.hpp"

namespace
{
using lisens::CameraConfig;

CameraConfig camera(std::size_t pixels, double dmd, double adc)
{
  CameraConfig c;
  c.pixels = pixels;
  c.dmd_rate = dmd;
  c.adc_rate = adc;
  c.dmd_cols = 1024;
  c.dmd_rows = 768;
  return c;
}

TEST(Rates, PlateauCaseStudy)
{
  EXPECT_EQ(lisens::measurement_rate(1e3, 1e4, 1e7), 1e7);
  EXPECT_EQ(lisens::f_min(camera(1000, 1e4, 1e7)), 1000u);
}

TEST(Rates, SinglePixelIsDmdLimited)
{
  EXPECT_EQ(lisens::measurement_rate(1.0, 2e4, 1e7), 2e4);
  EXPECT_EQ(lisens::measurement_rate(camera(1, 2e4, 1e7)), 2e4);
}

TEST(Rates, PrototypeLineSensor)
{
  // 1024 pixels, 20 kHz DMD, 2048 kS/s ADC: readout limited, 2 kHz per pixel.
  EXPECT_DOUBLE_EQ(lisens::measurement_rate(1024, 2e4, 2.048e6), 2.048e6);
  EXPECT_EQ(lisens::f_min(camera(1024, 2e4, 2.048e6)), 103u);
}

TEST(Rates, FMinRoundsUpFractionalRatios)
{
  EXPECT_EQ(lisens::f_min(camera(1, 3.0, 10.0)), 4u);
  EXPECT_EQ(lisens::f_min(camera(1, 1e4, 1e3)), 1u);
}

TEST(Rates, CurveRisesThenPlateaus)
{
  const auto c = camera(1, 1e4, 1e7);
  const auto curve = lisens::rate_curve(c, 100000, 20);
  ASSERT_FALSE(curve.empty());
  EXPECT_EQ(curve.front().first, 1u);
  EXPECT_EQ(curve.back().first, 100000u);
  for (std::size_t k = 1; k < curve.size(); ++k) {
    EXPECT_GT(curve[k].first, curve[k - 1].first);
    EXPECT_GE(curve[k].second, curve[k - 1].second * (1 - 1e-12));
    const double f = static_cast<double>(curve[k].first);
    EXPECT_DOUBLE_EQ(curve[k].second, f < 1000 ? f * 1e4 : 1e7);
  }
}

TEST(Burst, PrototypeTiming)
{
  auto c = camera(1024, 2e4, 2.048e6);
  c.burst = lisens::BurstTiming{100, 500e-6, 60e-3};
  const auto r = lisens::burst_rate(c);
  const double fps = 100.0 / (100.0 * 500e-6 + 60e-3);  // 100 frames every 110 ms
  EXPECT_DOUBLE_EQ(r.frames_per_second, fps);
  EXPECT_NEAR(r.frames_per_second, 909.0909, 1e-4);
  EXPECT_NEAR(r.measurements_per_second, 1024.0 * fps, 1e-6);
  EXPECT_DOUBLE_EQ(lisens::pattern_rate(c), fps);
  EXPECT_DOUBLE_EQ(lisens::effective_measurement_rate(c), 1024.0 * fps);
}

TEST(Burst, MissingTimingIsAnError)
{
  EXPECT_THROW(lisens::burst_rate(camera(10, 1, 1)), lisens::Error);
}

TEST(Burst, ValidationRejectsNonsense)
{
  auto c = camera(10, 1, 1);
  c.burst = lisens::BurstTiming{0, 1e-3, 0.0};
  EXPECT_THROW(c.validate(), lisens::Error);
  c = camera(0, 1, 1);
  EXPECT_THROW(c.validate(), lisens::Error);
}

TEST(Optics, CylindricalPrototypeValues)
{
  const auto d = lisens::design_cylindrical(50.0, 25.0, 1.0);
  EXPECT_EQ(d.focal_approx, 4.0);
  const double exact = 100.0 * (1.0 / 26.0) * (25.0 / 26.0);
  EXPECT_NEAR(d.focal_exact, exact, 1e-12);
  EXPECT_NEAR(d.focal_exact, 3.698, 5e-4);
  EXPECT_NEAR(d.to_sensor, 100.0 / 26.0, 1e-12);
  EXPECT_NEAR(d.to_relay, 2500.0 / 26.0, 1e-12);
}

TEST(Optics, PlacementConstraintsHold)
{
  const auto d = lisens::make_optical_design(10.5, 7.9, 10.5, 1.0, 50.0, 25.0);
  EXPECT_LE(d.constraint_error(), 1e-9);
  EXPECT_DOUBLE_EQ(d.magnification, 1.0);
  EXPECT_DOUBLE_EQ(d.cyl_to_sensor + d.cyl_to_relay, 100.0);
}

TEST(Optics, ApproximationErrorBoundedByAspect)
{
  // f_approx / f_exact = (1 + h/d)^2, so the relative error shrinks as h/d -> 0.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 0.5);
  for (int i = 0; i < 200; ++i) {
    const double d = 25.0;
    const double h = u(rng) * d;
    const auto cyl = lisens::design_cylindrical(50.0, d, h);
    const double ratio = cyl.focal_approx / cyl.focal_exact;
    EXPECT_NEAR(ratio, (1 + h / d) * (1 + h / d), 1e-12);
    EXPECT_GT(cyl.focal_approx, cyl.focal_exact);
  }
  for (int i = 0; i < 100; ++i) {
    const auto od = lisens::make_optical_design(10.0, 8.0, 5.0 + u(rng), u(rng) * 5.0, 20 + 100 * u(rng), 25.0);
    EXPECT_LE(od.constraint_error(), 1e-9);
  }
}

TEST(Optics, Magnification)
{
  EXPECT_DOUBLE_EQ(lisens::relay_magnification(10.0, 20.0), 2.0);
  EXPECT_THROW(lisens::relay_magnification(0.0, 1.0), lisens::Error);
  EXPECT_THROW(lisens::design_cylindrical(50.0, 0.0, 1.0), lisens::Error);
}

}  // namespace

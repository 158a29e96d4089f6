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

#include "lisens/codes.hpp"
#include "lisens/scene.hpp"
#include "lisens/simulator.hpp"

namespace
{
using lisens::build_schedule;
using lisens::Image;

lisens::CameraConfig plain_camera(std::size_t pixels, double rate = 1000.0)
{
  lisens::CameraConfig c;
  c.pixels = pixels;
  c.dmd_rate = rate;
  c.adc_rate = 1e12;
  c.dmd_cols = c.dmd_rows = 64;
  return c;
}

Image random_image(Eigen::Index r, Eigen::Index c, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image x(r, c);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  return x;
}

// Dense oracle: explicit triple loop over rows, columns and slots.
Eigen::MatrixXd dense_lisens(const Image & x, const lisens::PatternSchedule & s)
{
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(x.rows(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t t = 0; t < s.size(); ++t) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < s.order(); ++j) y(i, t) += x(i, j) * s.pattern(t, j);
    }
  }
  return y;
}

TEST(Lisens, AllOnesPatternSumsRows)
{
  const Image x = random_image(6, 8, 1);
  const auto s = build_schedule(8, 1, 0, 2);  // slot 0 is tracking
  const auto m = lisens::simulate_lisens(lisens::still(x), s, 0.0, 0, plain_camera(6));
  for (Eigen::Index i = 0; i < 6; ++i) EXPECT_NEAR(m.Y(i, 0), x.row(i).sum(), 1e-14);
}

TEST(Lisens, MatchesDenseOracle)
{
  const Image x = random_image(16, 32, 3);
  const auto s = build_schedule(32, 70, 4, 10);
  const auto m = lisens::simulate_lisens(lisens::still(x), s, 0.0, 0, plain_camera(16));
  EXPECT_LE((m.Y - dense_lisens(x, s)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(m.schedule_ref, s.id());
}

TEST(Lisens, LinearInScene)
{
  const Image a = 0.5 * random_image(8, 16, 4);
  const Image b = 0.5 * random_image(8, 16, 5);
  const auto s = build_schedule(16, 20, 6, 0);
  const auto cam = plain_camera(8);
  const auto ya = lisens::simulate_lisens(lisens::still(a), s, 0.0, 0, cam).Y;
  const auto yb = lisens::simulate_lisens(lisens::still(b), s, 0.0, 0, cam).Y;
  const auto yab = lisens::simulate_lisens(lisens::still(a + b), s, 0.0, 0, cam).Y;
  EXPECT_LE((yab - ya - yb).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Lisens, NoiseDeviation)
{
  const double sigma = 0.05;
  const auto s = build_schedule(8, 1000, 1, 0);
  const auto m = lisens::simulate_lisens(
    lisens::still(Image::Zero(100, 8)), s, sigma, 42, plain_camera(100));
  ASSERT_EQ(m.Y.size(), 100000);
  const double mean = m.Y.mean();
  const double sd = std::sqrt((m.Y.array() - mean).square().sum() / static_cast<double>(m.Y.size() - 1));
  EXPECT_NEAR(sd / sigma, 1.0, 0.02);
  EXPECT_NEAR(mean, 0.0, 5.0 * sigma / std::sqrt(1e5));
}

TEST(Lisens, DeterministicPerSeed)
{
  const Image x = random_image(8, 16, 7);
  const auto s = build_schedule(16, 40, 2, 0);
  const auto cam = plain_camera(8);
  const auto a = lisens::simulate_lisens(lisens::still(x), s, 0.1, 9, cam);
  const auto b = lisens::simulate_lisens(lisens::still(x), s, 0.1, 9, cam);
  const auto c = lisens::simulate_lisens(lisens::still(x), s, 0.1, 10, cam);
  EXPECT_EQ(a.Y, b.Y);
  EXPECT_NE(a.Y, c.Y);
  // A prefix of the slots sees the same noise as the full run.
  const auto p = lisens::simulate_lisens(lisens::still(x), s, 0.1, 9, cam, 10);
  EXPECT_EQ(p.Y, a.Y.leftCols(10));
}

TEST(Lisens, RejectsBadInput)
{
  const auto s = build_schedule(16, 4, 0, 0);
  EXPECT_THROW(
    lisens::simulate_lisens(lisens::still(Image::Zero(4, 8)), s, 0.0, 0, plain_camera(4)), lisens::Error);
  EXPECT_THROW(
    lisens::simulate_lisens(lisens::still(Image::Zero(4, 16)), s, -1.0, 0, plain_camera(4)), lisens::Error);
  EXPECT_THROW(
    lisens::simulate_lisens(lisens::SceneVideo{}, s, 0.0, 0, plain_camera(4)), lisens::Error);
  EXPECT_THROW(
    lisens::simulate_lisens(lisens::still(Image::Constant(4, 16, 2.0)), s, 0.0, 0, plain_camera(4)),
    lisens::Error);
}

TEST(Lisens, VideoUsesActiveFrame)
{
  lisens::SceneVideo v;
  v.frame_rate = 10.0;
  v.frames = {Image::Constant(2, 4, 0.1), Image::Constant(2, 4, 0.9)};
  const auto s = build_schedule(4, 4, 0, 2);
  const auto m = lisens::simulate_lisens(v, s, 0.0, 0, plain_camera(2, 20.0));  // slots every 50 ms
  ASSERT_TRUE(s.is_mean_track(0) && s.is_mean_track(2));
  EXPECT_NEAR(m.Y(0, 0), 0.4, 1e-14);
  EXPECT_NEAR(m.Y(0, 2), 3.6, 1e-14);
}

TEST(Timestamps, BurstStructure)
{
  auto cam = plain_camera(4);
  cam.burst = lisens::BurstTiming{3, 0.01, 0.5};
  const auto ts = lisens::slot_timestamps(cam, 7);
  const std::vector<double> expected{0.0, 0.01, 0.02, 0.53, 0.54, 0.55, 1.06};
  ASSERT_EQ(ts.size(), expected.size());
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_NEAR(ts[i], expected[i], 1e-12);
}

TEST(Timestamps, UniformWithoutBurst)
{
  const auto ts = lisens::slot_timestamps(plain_camera(1, 250.0), 5);
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_NEAR(ts[i], 0.004 * static_cast<double>(i), 1e-15);
}

TEST(Spc, PatternListMatchesInnerProduct)
{
  const Image x = random_image(4, 4, 8);
  std::vector<Image> patterns;
  patterns.push_back(Image::Ones(4, 4));
  Image one_hot = Image::Zero(4, 4);
  one_hot(2, 3) = 1.0;
  patterns.push_back(one_hot);
  const auto m = lisens::simulate_spc(lisens::still(x), patterns, 0.0, 0, plain_camera(1));
  EXPECT_NEAR(m.Y(0, 0), x.sum(), 1e-14);
  EXPECT_EQ(m.Y(0, 1), x(2, 3));
}

TEST(Spc, ScheduleFlattensRowMajor)
{
  const Image x = random_image(4, 8, 9);
  const auto s = build_schedule(32, 32, 3, 0);
  const auto m = lisens::simulate_spc(lisens::still(x), s, 0.0, 0, plain_camera(1));
  for (std::size_t t = 0; t < 32; ++t) {
    double acc = 0.0;
    for (Eigen::Index r = 0; r < 4; ++r) {
      for (Eigen::Index c = 0; c < 8; ++c) acc += x(r, c) * s.pattern(t, static_cast<std::size_t>(r * 8 + c));
    }
    EXPECT_NEAR(m.Y(0, static_cast<Eigen::Index>(t)), acc, 1e-12);
    const Image p = lisens::spc_pattern(s, t, 4, 8);
    EXPECT_NEAR(x.cwiseProduct(p).sum(), acc, 1e-12);
  }
  EXPECT_THROW(lisens::spc_pattern(s, 0, 4, 4), lisens::Error);
}

lisens::MeasurementSet dummy_set(std::size_t count)
{
  lisens::MeasurementSet m;
  m.Y = Eigen::MatrixXd::Zero(2, static_cast<Eigen::Index>(count));
  for (std::size_t t = 0; t < count; ++t) m.Y.col(static_cast<Eigen::Index>(t)).setConstant(double(t));
  m.timestamps.assign(count, 0.0);
  return m;
}

TEST(Grouping, TenIntoThree)
{
  const auto s = build_schedule(8, 10, 0, 0);
  const auto blocks = lisens::group_frames(dummy_set(10), s, 3);
  ASSERT_EQ(blocks.size(), 3u);
  EXPECT_EQ(blocks[0].size(), 4u);
  EXPECT_EQ(blocks[1].size(), 3u);
  EXPECT_EQ(blocks[2].size(), 3u);
  EXPECT_EQ(blocks[1].first, 4u);
  EXPECT_EQ(blocks[2].Y(0, 0), 7.0);
  EXPECT_EQ(blocks[2].phi, s.signed_block(7, 3));
}

TEST(Grouping, SizesAlwaysBalanced)
{
  for (std::size_t total = 1; total <= 40; ++total) {
    const auto s = build_schedule(4, total, 1, 0);
    for (std::size_t q = 1; q <= total; ++q) {
      const auto blocks = lisens::group_frames(dummy_set(total), s, q);
      std::size_t sum = 0, lo = total, hi = 0, next = 0;
      for (const auto & b : blocks) {
        EXPECT_EQ(b.first, next);
        next += b.size();
        sum += b.size();
        lo = std::min(lo, b.size());
        hi = std::max(hi, b.size());
      }
      EXPECT_EQ(sum, total);
      EXPECT_LE(hi - lo, 1u);
    }
  }
}

TEST(Grouping, Extremes)
{
  const auto s = build_schedule(8, 6, 0, 3);
  const auto one = lisens::group_frames(dummy_set(6), s, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].size(), 6u);
  const auto each = lisens::group_frames(dummy_set(6), s, 6);
  for (const auto & b : each) EXPECT_EQ(b.size(), 1u);
  EXPECT_TRUE(each[3].mean_track[0]);
  EXPECT_EQ(one[0].without_tracking().size(), 4u);
  EXPECT_THROW(lisens::group_frames(dummy_set(6), s, 0), lisens::Error);
  EXPECT_THROW(lisens::group_frames(dummy_set(6), s, 7), lisens::Error);
}

}  // namespace

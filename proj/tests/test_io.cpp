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

#include <filesystem>
#include <fstream>
#include <random>

#include "lisens/codes.hpp"
#include "lisens/io.hpp"
#include "lisens/scene.hpp"

namespace
{
namespace fs = std::filesystem;
using lisens::Image;

fs::path scratch(const std::string & name)
{
  const fs::path dir = fs::temp_directory_path() / "lisens_test_io";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Pgm, SixteenBitRoundTrip)
{
  Image x(3, 5);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = static_cast<double>(i) / 14.0;
  const auto p = scratch("a16.pgm");
  lisens::io::write_pgm(p, x, 16);
  const Image y = lisens::io::read_pgm(p);
  ASSERT_EQ(y.rows(), 3);
  ASSERT_EQ(y.cols(), 5);
  EXPECT_LE((x - y).cwiseAbs().maxCoeff(), 0.5 / 65535.0 + 1e-15);
}

TEST(Pgm, EightBitWithComment)
{
  const auto p = scratch("a8.pgm");
  {
    std::ofstream out(p, std::ios::binary);
    out << "P5\n# comment\n2 2\n255\n";
    const unsigned char px[4] = {0, 51, 204, 255};
    out.write(reinterpret_cast<const char *>(px), 4);
  }
  const Image x = lisens::io::read_pgm(p);
  EXPECT_EQ(x(0, 0), 0.0);
  EXPECT_EQ(x(0, 1), 0.2);
  EXPECT_EQ(x(1, 0), 0.8);
  EXPECT_EQ(x(1, 1), 1.0);
}

TEST(Pgm, Errors)
{
  EXPECT_THROW(lisens::io::read_pgm(scratch("missing.pgm")), lisens::Error);
  const auto p = scratch("bad.pgm");
  {
    std::ofstream out(p, std::ios::binary);
    out << "P5\n4 4\n255\nabc";
  }
  EXPECT_THROW(lisens::io::read_pgm(p), lisens::Error);
}

TEST(Raw, RoundTripIsFloatExact)
{
  std::vector<Image> frames{lisens::phantom(6, 9), lisens::blocks_scene(6, 9)};
  frames[1](0, 0) = 0.1;
  const auto p = scratch("v.lsrf");
  lisens::io::write_raw(p, frames);
  const auto back = lisens::io::read_raw(p);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(back[k], frames[k].cast<float>().cast<double>());
  }
  EXPECT_EQ(fs::file_size(p), 20u + 4u * 6u * 9u * 2u);
}

TEST(Raw, RejectsForeignFile)
{
  const auto p = scratch("foreign.lsrf");
  {
    std::ofstream out(p, std::ios::binary);
    out << "NOPE0000000000000000";
  }
  EXPECT_THROW(lisens::io::read_raw(p), lisens::Error);
}

TEST(Schedule, SerializationRoundTrip)
{
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t order = std::size_t{1} << (rng() % 9);
    const std::size_t count = 1 + rng() % 200;
    const std::size_t period = rng() % 2 ? 0 : 2 + rng() % 30;
    const auto s = lisens::build_schedule(order, count, rng(), period);
    const auto p = scratch("s.lsps");
    lisens::io::write_schedule(p, s);
    const auto back = lisens::io::read_schedule(p);
    EXPECT_TRUE(back == s) << "order " << order << " count " << count;
    EXPECT_EQ(back.id(), s.id());
  }
}

TEST(Schedule, ManifestListsLayout)
{
  const auto s = lisens::build_schedule(64, 250, 3, 100);
  const auto bin = scratch("m.lsps");
  const auto txt = scratch("m.txt");
  lisens::io::write_schedule(bin, s);
  lisens::io::write_schedule_manifest(txt, s, bin);
  std::ifstream in(txt);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("order = 64"), std::string::npos);
  EXPECT_NE(ss.str().find("mean_track_count = 3"), std::string::npos);
}

TEST(Measurements, SidecarRoundTrip)
{
  lisens::MeasurementSet m;
  m.Y = Eigen::MatrixXd::Constant(3, 4, 0.25);
  m.Y(1, 2) = -7.5;
  m.timestamps = {0.0, 0.5, 1.0, 1.5};
  m.noise_sigma = 0.125;
  m.seed = 123456789012345ULL;
  m.schedule_ref = "hadamard-8-4-1-0";
  const auto raw = scratch("meas.lsrf");
  const auto side = scratch("meas.json");
  lisens::io::write_measurements(raw, side, m, "spc");
  const auto back = lisens::io::read_measurements(side);
  EXPECT_EQ(back.camera_model, "spc");
  EXPECT_EQ(back.set.Y, m.Y);
  EXPECT_EQ(back.set.timestamps, m.timestamps);
  EXPECT_EQ(back.set.noise_sigma, m.noise_sigma);
  EXPECT_EQ(back.set.seed, m.seed);
  EXPECT_EQ(back.set.schedule_ref, m.schedule_ref);
}

}  // namespace

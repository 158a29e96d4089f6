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
#include "lisens/operators.hpp"

namespace
{
using lisens::Image;
using lisens::inner;

Image gauss(Eigen::Index r, Eigen::Index c, std::mt19937_64 & rng)
{
  std::normal_distribution<double> g;
  Image x(r, c);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  return x;
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

TEST(Gradients, ConstantAndRamp)
{
  const Image c = Image::Constant(5, 7, 3.0);
  EXPECT_TRUE(lisens::gradient_x(c).isZero(0.0));
  EXPECT_TRUE(lisens::gradient_y(c).isZero(0.0));
  Image ramp(4, 6);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) ramp(i, j) = static_cast<double>(j);
  }
  const Image gx = lisens::gradient_x(ramp);
  EXPECT_TRUE(gx.leftCols(5).isOnes(0.0));
  EXPECT_TRUE(gx.col(5).isZero(0.0));
  EXPECT_TRUE(lisens::gradient_y(ramp).isZero(0.0));
}

TEST(Gradients, MatchLoopOracle)
{
  std::mt19937_64 rng(1);
  const Image x = gauss(6, 9, rng);
  const Image gx = lisens::gradient_x(x);
  const Image gy = lisens::gradient_y(x);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 9; ++j) {
      EXPECT_EQ(gx(i, j), j + 1 < 9 ? x(i, j + 1) - x(i, j) : 0.0);
      EXPECT_EQ(gy(i, j), i + 1 < 6 ? x(i + 1, j) - x(i, j) : 0.0);
    }
  }
}

TEST(Adjoints, SpatialGradients)
{
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Image u = gauss(32, 32, rng);
    const Image v = gauss(32, 32, rng);
    EXPECT_LE(relative_gap(inner(lisens::gradient_x(u), v), inner(u, lisens::gradient_x_adjoint(v))), 1e-10);
    EXPECT_LE(relative_gap(inner(lisens::gradient_y(u), v), inner(u, lisens::gradient_y_adjoint(v))), 1e-10);
  }
}

TEST(Adjoints, TemporalDifference)
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Image> u, v;
    for (int k = 0; k < 5; ++k) {
      u.push_back(gauss(6, 7, rng));
      v.push_back(gauss(6, 7, rng));
    }
    const auto du = lisens::temporal_diff(u);
    const auto dv = lisens::temporal_diff_adjoint(v);
    double lhs = 0.0, rhs = 0.0;
    for (int k = 0; k < 5; ++k) {
      lhs += inner(du[k], v[k]);
      rhs += inner(u[k], dv[k]);
    }
    EXPECT_LE(relative_gap(lhs, rhs), 1e-10);
  }
}

TEST(Adjoints, PatternOperators)
{
  std::mt19937_64 rng(4);
  const auto s = lisens::build_schedule(64, 40, 5, 0);
  const lisens::LineSensingOperator line(16, s.signed_block(0, 40));
  const auto s2 = lisens::build_schedule(64, 30, 6, 0);
  const lisens::SinglePixelOperator spc(8, 8, s2.signed_block(0, 30));
  for (int trial = 0; trial < 100; ++trial) {
    const Image u = gauss(16, 64, rng);
    const Eigen::MatrixXd v = gauss(16, 40, rng);
    EXPECT_LE(relative_gap(inner(line.apply(u), v), inner(u, line.adjoint(v))), 1e-10);
    const Image a = gauss(8, 8, rng);
    const Eigen::MatrixXd b = gauss(1, 30, rng);
    EXPECT_LE(relative_gap(inner(spc.apply(a), b), inner(a, spc.adjoint(b))), 1e-10);
  }
}

TEST(Operators, SinglePixelFlattensRowMajor)
{
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(6, 1);
  phi(1, 0) = 1.0;  // row 0, column 1 of a 2x3 image
  const lisens::SinglePixelOperator op(2, 3, phi);
  Image x(2, 3);
  x << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(op.apply(x)(0, 0), 2.0);
}

TEST(Tv, Cases)
{
  EXPECT_EQ(lisens::tv_iso(Image::Constant(8, 8, 0.3)), 0.0);
  // Unit step between two columns of an N-row image: one unit gradient per row.
  for (Eigen::Index n : {3, 10, 33}) {
    Image step = Image::Zero(n, 12);
    step.rightCols(5).setOnes();
    double oracle = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j + 1 < 12; ++j) oracle += std::abs(step(i, j + 1) - step(i, j));
    }
    EXPECT_EQ(lisens::tv_iso(step), static_cast<double>(n));
    EXPECT_EQ(oracle, static_cast<double>(n));
  }
  std::mt19937_64 rng(5);
  const Image x = gauss(10, 10, rng);
  EXPECT_NEAR(lisens::tv_iso(-2.5 * x), 2.5 * lisens::tv_iso(x), 1e-10);
}

TEST(Tv, SpatioTemporal)
{
  std::vector<Image> still(3, Image::Zero(4, 4));
  still[0](1, 1) = still[1](1, 1) = still[2](1, 1) = 1.0;
  // Static video: only spatial terms, repeated per frame.
  EXPECT_NEAR(lisens::tv_iso3(still), 3 * lisens::tv_iso(still[0]), 1e-12);
  std::vector<Image> flash{Image::Zero(4, 4), Image::Ones(4, 4)};
  EXPECT_NEAR(lisens::tv_iso3(flash), 16.0, 1e-12);
  EXPECT_NEAR(lisens::tv_iso3(flash, {1.0, 4.0}), 32.0, 1e-12);
}

}  // namespace

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

#ifndef LISENS_OPERATORS_HPP
#define LISENS_OPERATORS_HPP

#include <cmath>
#include <concepts>
#include <vector>

#include "lisens/error.hpp"
#include "lisens/types.hpp"

namespace lisens
{
// Forward differences with a replicate boundary; the last column (x) or row (y) is zero.

inline Image gradient_x(const Image & x)
{
  Image g = Image::Zero(x.rows(), x.cols());
  if (x.cols() > 1) g.leftCols(x.cols() - 1) = x.rightCols(x.cols() - 1) - x.leftCols(x.cols() - 1);
  return g;
}

inline Image gradient_y(const Image & x)
{
  Image g = Image::Zero(x.rows(), x.cols());
  if (x.rows() > 1) g.topRows(x.rows() - 1) = x.bottomRows(x.rows() - 1) - x.topRows(x.rows() - 1);
  return g;
}

inline Image gradient_x_adjoint(const Image & p)
{
  Image d = Image::Zero(p.rows(), p.cols());
  const Eigen::Index n = p.cols();
  if (n > 1) {
    d.leftCols(n - 1) -= p.leftCols(n - 1);
    d.rightCols(n - 1) += p.leftCols(n - 1);
  }
  return d;
}

inline Image gradient_y_adjoint(const Image & p)
{
  Image d = Image::Zero(p.rows(), p.cols());
  const Eigen::Index n = p.rows();
  if (n > 1) {
    d.topRows(n - 1) -= p.topRows(n - 1);
    d.bottomRows(n - 1) += p.topRows(n - 1);
  }
  return d;
}

/// Forward temporal difference between consecutive frames; zero on the last frame.
inline std::vector<Image> temporal_diff(const std::vector<Image> & v)
{
  std::vector<Image> g(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    g[k] = (k + 1 < v.size()) ? Image(v[k + 1] - v[k]) : Image(Image::Zero(v[k].rows(), v[k].cols()));
  }
  return g;
}

inline std::vector<Image> temporal_diff_adjoint(const std::vector<Image> & p)
{
  std::vector<Image> d(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    d[k] = Image::Zero(p[k].rows(), p[k].cols());
    if (k + 1 < p.size()) d[k] -= p[k];
    if (k >= 1) d[k] += p[k - 1];
  }
  return d;
}

/// Isotropic total variation: sum over pixels of sqrt(G_x^2 + G_y^2).
inline double tv_iso(const Image & x)
{
  return (gradient_x(x).array().square() + gradient_y(x).array().square()).sqrt().sum();
}

/// Relative weights of the spatial and temporal terms in the spatio-temporal TV.
struct TvWeights
{
  double spatial = 1.0;
  double temporal = 1.0;
};

/// sum sqrt(w_s (G_x^2 + G_y^2) + w_t G_t^2) over every voxel of the volume.
inline double tv_iso3(const std::vector<Image> & v, TvWeights w = {})
{
  const auto gt = temporal_diff(v);
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    total += (w.spatial * (gradient_x(v[k]).array().square() + gradient_y(v[k]).array().square()) +
              w.temporal * gt[k].array().square())
               .sqrt()
               .sum();
  }
  return total;
}

/// Linear map from one image to a block of measurements.
template <class Op>
concept MeasurementOperator = requires(const Op & op, const Image & x, const Eigen::MatrixXd & y) {
  { op.apply(x) } -> std::convertible_to<Eigen::MatrixXd>;
  { op.adjoint(y) } -> std::convertible_to<Image>;
  { op.codes() } -> std::convertible_to<const Eigen::MatrixXd &>;
  { op.image_rows() } -> std::convertible_to<Eigen::Index>;
  { op.image_cols() } -> std::convertible_to<Eigen::Index>;
};

/// Line sensor: Y = X Phi, Phi is (cols x k).
class LineSensingOperator
{
public:
  LineSensingOperator(Eigen::Index rows, Eigen::MatrixXd phi) : rows_(rows), phi_(std::move(phi)) {}

  Eigen::MatrixXd apply(const Image & x) const
  {
    require(
      x.rows() == rows_ && x.cols() == phi_.rows(), ErrorKind::dimension_mismatch,
      "image size differs from the line-sensing operator");
    return x * phi_;
  }
  Image adjoint(const Eigen::MatrixXd & y) const { return y * phi_.transpose(); }
  const Eigen::MatrixXd & codes() const { return phi_; }
  Eigen::Index image_rows() const { return rows_; }
  Eigen::Index image_cols() const { return phi_.rows(); }

private:
  Eigen::Index rows_;
  Eigen::MatrixXd phi_;
};

/// Single pixel: y = vec(X)^T Phi with vec in row-major order, Phi is (rows*cols x k).
class SinglePixelOperator
{
public:
  SinglePixelOperator(Eigen::Index rows, Eigen::Index cols, Eigen::MatrixXd phi)
  : rows_(rows), cols_(cols), phi_(std::move(phi))
  {
    require(
      phi_.rows() == rows_ * cols_, ErrorKind::dimension_mismatch,
      "SPC code length differs from the image pixel count");
  }

  Eigen::MatrixXd apply(const Image & x) const
  {
    require(
      x.rows() == rows_ && x.cols() == cols_, ErrorKind::dimension_mismatch,
      "image size differs from the single-pixel operator");
    const Eigen::MatrixXd xt = x.transpose();  // column-major storage of X^T is row-major X
    return Eigen::Map<const Eigen::RowVectorXd>(xt.data(), xt.size()) * phi_;
  }
  Image adjoint(const Eigen::MatrixXd & y) const
  {
    const Eigen::RowVectorXd flat = y.row(0) * phi_.transpose();
    return Eigen::Map<const Eigen::MatrixXd>(flat.data(), cols_, rows_).transpose();
  }
  const Eigen::MatrixXd & codes() const { return phi_; }
  Eigen::Index image_rows() const { return rows_; }
  Eigen::Index image_cols() const { return cols_; }

private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  Eigen::MatrixXd phi_;
};

/// Frobenius inner product.
inline double inner(const Eigen::MatrixXd & a, const Eigen::MatrixXd & b)
{
  return a.cwiseProduct(b).sum();
}

}  // namespace lisens

#endif  // LISENS_OPERATORS_HPP

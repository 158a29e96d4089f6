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

#ifndef LISENS_RECOVERY_HPP
#define LISENS_RECOVERY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lisens/error.hpp"
#include "lisens/operators.hpp"
#include "lisens/simulator.hpp"
#include "lisens/types.hpp"

namespace lisens
{
struct RecoveryParams
{
  double epsilon = 0.0;  // radius of the data-fidelity ball, measurement units
  std::size_t max_iterations = 3000;
  double tolerance = 1e-6;  // relative change between iterates
  TvWeights weights;
  bool use_mean_track_columns = false;

  void validate() const
  {
    require(epsilon >= 0.0 && std::isfinite(epsilon), ErrorKind::invalid_argument, "epsilon must be >= 0");
    require(tolerance > 0.0, ErrorKind::invalid_argument, "tolerance must be > 0");
    require(max_iterations >= 1, ErrorKind::invalid_argument, "max_iterations must be >= 1");
    require(
      weights.spatial > 0.0 && weights.temporal > 0.0, ErrorKind::invalid_argument,
      "TV weights must be positive");
  }
};

/// Noise-level discrepancy radius sigma * sqrt(number of measured values).
inline double discrepancy_epsilon(double sigma, std::size_t measured_values)
{
  return sigma * std::sqrt(static_cast<double>(measured_values));
}

struct IterationRecord
{
  std::size_t iteration = 0;
  double residual = 0.0;
  double tv = 0.0;
  double best_tv = 0.0;  // best feasible TV so far; +inf until the first feasible iterate
};

struct FrameDiagnostics
{
  std::size_t iterations = 0;
  double residual = 0.0;
  double tv = 0.0;
};

enum class SolverMode {
  projected,  // codes form a tight frame: exact projection onto the constraint set
  split       // general codes: the ball constraint is dualized alongside TV
};

struct RecoveredVideo
{
  std::vector<Image> frames;
  std::vector<FrameDiagnostics> diagnostics;
  std::vector<IterationRecord> history;
  SolverMode mode = SolverMode::projected;
  bool converged = false;
  double residual = 0.0;  // aggregated over frames
  double tv = 0.0;        // spatio-temporal TV of the returned solution
};

/// X = Y Phi^+ for a code matrix Phi (order x T) with T >= order and full row rank.
inline Image recover_pinv(const Eigen::MatrixXd & Y, const Eigen::MatrixXd & phi)
{
  require(
    Y.cols() == phi.cols(), ErrorKind::dimension_mismatch,
    "measurement count differs from code count");
  require(
    phi.cols() >= phi.rows(), ErrorKind::rank_deficient,
    "pseudoinverse recovery needs at least as many patterns (" + std::to_string(phi.cols()) +
      ") as pattern length (" + std::to_string(phi.rows()) + ")");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi.transpose());
  require(
    qr.rank() == phi.rows(), ErrorKind::rank_deficient,
    "code matrix has rank " + std::to_string(qr.rank()) + ", needs full row rank " +
      std::to_string(phi.rows()));
  return qr.solve(Y.transpose()).transpose();
}

namespace detail
{
using Volume = std::vector<Image>;

inline double norm2(const Volume & v)
{
  double s = 0.0;
  for (const auto & f : v) s += f.squaredNorm();
  return s;
}

inline Volume zeros_like(const Volume & v)
{
  Volume z(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) z[k] = Image::Zero(v[k].rows(), v[k].cols());
  return z;
}

/// Weighted spatio-temporal gradient field (sqrt(w_s) G_x, sqrt(w_s) G_y, sqrt(w_t) G_t).
struct Field
{
  Volume gx, gy, gt;
};

inline Field apply_d(const Volume & v, TvWeights w)
{
  Field f;
  const double ss = std::sqrt(w.spatial);
  const double st = std::sqrt(w.temporal);
  f.gx.resize(v.size());
  f.gy.resize(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    f.gx[k] = ss * gradient_x(v[k]);
    f.gy[k] = ss * gradient_y(v[k]);
  }
  f.gt = temporal_diff(v);
  for (auto & g : f.gt) g *= st;
  return f;
}

inline Volume apply_dt(const Field & f, TvWeights w)
{
  const double ss = std::sqrt(w.spatial);
  const double st = std::sqrt(w.temporal);
  Volume out = temporal_diff_adjoint(f.gt);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = st * out[k] + ss * (gradient_x_adjoint(f.gx[k]) + gradient_y_adjoint(f.gy[k]));
  }
  return out;
}

inline double field_tv(const Field & f)
{
  double total = 0.0;
  for (std::size_t k = 0; k < f.gx.size(); ++k) {
    total += (f.gx[k].array().square() + f.gy[k].array().square() + f.gt[k].array().square()).sqrt().sum();
  }
  return total;
}

// Largest eigenvalue of M^T M by power iteration from a fixed pseudo-random start.
template <class Normal>
double power_iteration(const Volume & shape, Normal && normal, std::size_t iterations = 20)
{
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> g;
  Volume v = zeros_like(shape);
  for (auto & f : v) f = f.unaryExpr([&](double) { return g(rng); });
  double lambda = 0.0;
  for (std::size_t i = 0; i < iterations; ++i) {
    const double n = std::sqrt(norm2(v));
    for (auto & f : v) f /= n;
    Volume w = normal(v);
    lambda = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) lambda += inner(v[k], w[k]);
    v = std::move(w);
  }
  return lambda;
}

/// Common c with Phi_k^T Phi_k = c I for every block, if it exists.
template <MeasurementOperator Op>
std::optional<double> tight_frame_constant(std::span<const Op> ops)
{
  std::optional<double> c;
  for (const auto & op : ops) {
    const Eigen::MatrixXd gram = op.codes().transpose() * op.codes();
    if (gram.rows() == 0) return std::nullopt;
    const double ck = gram.diagonal().mean();
    if (!(ck > 0.0)) return std::nullopt;
    const double off = (gram - ck * Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (off > 1e-9 * ck) return std::nullopt;
    if (c && std::abs(*c - ck) > 1e-12 * ck) return std::nullopt;
    c = ck;
  }
  return c;
}

// Ratio between dual and primal steps; tau = 1 / (L r), sigma = r / L.
inline constexpr double step_ratio = 4.0;
inline constexpr double norm_margin = 1.1;

/// min TV3(X) s.t. sum_k ||Y_k - A_k X_k||_F^2 <= eps^2 by first-order primal-dual iterations.
template <MeasurementOperator Op>
RecoveredVideo solve_tv(
  std::span<const Op> ops, std::span<const Eigen::MatrixXd> ys, Volume x, const RecoveryParams & params)
{
  params.validate();
  const std::size_t q = ops.size();
  require(q >= 1, ErrorKind::invalid_argument, "recovery needs at least one block");
  require(ys.size() == q && x.size() == q, ErrorKind::dimension_mismatch, "block count mismatch");
  for (std::size_t k = 0; k < q; ++k) {
    require(
      ys[k].cols() == ops[k].codes().cols(), ErrorKind::dimension_mismatch,
      "measurement count differs from code count in block " + std::to_string(k));
    require(
      x[k].rows() == ops[k].image_rows() && x[k].cols() == ops[k].image_cols() && x[k].rows() >= 2 &&
        x[k].cols() >= 2,
      ErrorKind::dimension_mismatch, "image must be at least 2x2 and match its operator");
  }

  const TvWeights w = params.weights;
  double y_norm2 = 0.0;
  for (const auto & y : ys) y_norm2 += y.squaredNorm();
  const double y_norm = std::sqrt(y_norm2);
  const double eps = params.epsilon;

  auto apply_a = [&](const Volume & v) {
    Volume r(q);
    for (std::size_t k = 0; k < q; ++k) r[k] = ops[k].apply(v[k]);
    return r;
  };
  auto apply_at = [&](const Volume & r) {
    Volume v(q);
    for (std::size_t k = 0; k < q; ++k) v[k] = ops[k].adjoint(r[k]);
    return v;
  };

  const auto tight = tight_frame_constant<Op>(ops);
  RecoveredVideo out;
  out.mode = tight ? SolverMode::projected : SolverMode::split;

  // Spectral norms.
  const double d_bound = 8.0 * w.spatial + (q > 1 ? 4.0 * w.temporal : 0.0);
  const double d_est = power_iteration(x, [&](const Volume & v) { return apply_dt(apply_d(v, w), w); });
  double l2 = std::min(d_bound, norm_margin * d_est);
  double a_scale = 1.0;
  if (!tight) {
    const double a_est = power_iteration(x, [&](const Volume & v) { return apply_at(apply_a(v)); });
    require(a_est > 0.0, ErrorKind::rank_deficient, "measurement operator is zero");
    a_scale = std::sqrt(a_est);
    l2 += norm_margin;
  }
  const double lip = std::sqrt(l2);
  const double tau = 1.0 / (lip * step_ratio);
  const double sigma = step_ratio / lip;

  // Residual bookkeeping: r = A x - Y.
  auto residual_of = [&](const Volume & ax) {
    Volume r(q);
    for (std::size_t k = 0; k < q; ++k) r[k] = ax[k] - ys[k];
    return r;
  };

  // Exact projection onto {x : ||A x - Y|| <= eps} when A A^T = c I.
  auto project = [&](Volume & v, Volume & av) {
    Volume r = residual_of(av);
    const double nr = std::sqrt(norm2(r));
    if (nr <= eps) return nr;
    const double shrink = (1.0 - eps / nr) / *tight;
    for (std::size_t k = 0; k < q; ++k) {
      v[k] -= shrink * ops[k].adjoint(r[k]);
      av[k] = ys[k] + r[k] * (eps / nr);
    }
    return eps;
  };

  const double slack = tight ? 1e-9 * y_norm : params.tolerance * y_norm;
  const double feasible_limit = eps * (1.0 + params.tolerance) + slack;

  Volume ax = apply_a(x);
  double residual = tight ? project(x, ax) : std::sqrt(norm2(residual_of(ax)));
  Field dx = apply_d(x, w);
  Field p{zeros_like(x), zeros_like(x), zeros_like(x)};
  Volume dual_data;  // split mode only, scaled measurement space
  if (!tight) {
    dual_data.resize(q);
    for (std::size_t k = 0; k < q; ++k) dual_data[k] = Eigen::MatrixXd::Zero(ys[k].rows(), ys[k].cols());
  }
  Field dxbar = dx;
  Volume axbar = ax;

  double tv = field_tv(dx);
  double best_tv = std::numeric_limits<double>::infinity();
  Volume best;
  double best_residual = 0.0;
  if (residual <= feasible_limit) {
    best_tv = tv;
    best = x;
    best_residual = residual;
  }
  out.history.push_back({0, residual, tv, best_tv});

  std::size_t it = 0;
  for (it = 1; it <= params.max_iterations; ++it) {
    // Dual ascent on the TV term, then projection onto the unit pointwise ball.
    for (std::size_t k = 0; k < q; ++k) {
      p.gx[k] += sigma * dxbar.gx[k];
      p.gy[k] += sigma * dxbar.gy[k];
      p.gt[k] += sigma * dxbar.gt[k];
    }
    for (std::size_t k = 0; k < q; ++k) {
      const Eigen::ArrayXXd mag =
        (p.gx[k].array().square() + p.gy[k].array().square() + p.gt[k].array().square()).sqrt().max(1.0);
      p.gx[k].array() /= mag;
      p.gy[k].array() /= mag;
      p.gt[k].array() /= mag;
    }
    Volume step = apply_dt(p, w);

    if (!tight) {
      // Moreau: prox of the conjugate of the ball indicator (centre Y/s, radius eps/s).
      Volume v(q);
      for (std::size_t k = 0; k < q; ++k) v[k] = dual_data[k] + sigma * axbar[k] / a_scale;
      double dist2 = 0.0;
      for (std::size_t k = 0; k < q; ++k) dist2 += (v[k] / sigma - ys[k] / a_scale).squaredNorm();
      const double dist = std::sqrt(dist2);
      const double radius = eps / a_scale;
      const double keep = dist > radius ? radius / dist : 1.0;
      for (std::size_t k = 0; k < q; ++k) {
        const Eigen::MatrixXd centred = v[k] / sigma - ys[k] / a_scale;
        dual_data[k] = v[k] - sigma * (ys[k] / a_scale + keep * centred);
      }
      const Volume back = apply_at(dual_data);
      for (std::size_t k = 0; k < q; ++k) step[k] += back[k] / a_scale;
    }

    Volume x_new(q);
    for (std::size_t k = 0; k < q; ++k) x_new[k] = x[k] - tau * step[k];
    Volume ax_new = apply_a(x_new);
    const double res_new = tight ? project(x_new, ax_new) : std::sqrt(norm2(residual_of(ax_new)));
    Field dx_new = apply_d(x_new, w);

    double change2 = 0.0;
    for (std::size_t k = 0; k < q; ++k) {
      change2 += (x_new[k] - x[k]).squaredNorm();
      dxbar.gx[k] = 2.0 * dx_new.gx[k] - dx.gx[k];
      dxbar.gy[k] = 2.0 * dx_new.gy[k] - dx.gy[k];
      dxbar.gt[k] = 2.0 * dx_new.gt[k] - dx.gt[k];
      axbar[k] = 2.0 * ax_new[k] - ax[k];
    }
    const double rel_change = std::sqrt(change2 / std::max(norm2(x_new), 1e-300));

    x = std::move(x_new);
    ax = std::move(ax_new);
    dx = std::move(dx_new);
    residual = res_new;
    tv = field_tv(dx);
    if (residual <= feasible_limit && tv <= best_tv) {
      best_tv = tv;
      best = x;
      best_residual = residual;
    }
    out.history.push_back({it, residual, tv, best_tv});
    if (rel_change < params.tolerance) {
      out.converged = true;
      break;
    }
  }
  const std::size_t used = std::min(it, params.max_iterations);

  if (!best.empty()) {
    out.frames = std::move(best);
    out.residual = best_residual;
    out.tv = best_tv;
  } else {
    out.frames = std::move(x);
    out.residual = residual;
    out.tv = tv;
    out.converged = false;
  }
  out.diagnostics.resize(q);
  for (std::size_t k = 0; k < q; ++k) {
    out.diagnostics[k].iterations = used;
    out.diagnostics[k].residual = (ops[k].apply(out.frames[k]) - ys[k]).norm();
    out.diagnostics[k].tv = tv_iso(out.frames[k]);
  }
  return out;
}
}  // namespace detail

/// min TV(X) s.t. ||Y - A(X)||_F <= epsilon, starting from the zero image.
template <MeasurementOperator Op>
RecoveredVideo recover_tv2d(const Op & op, const Eigen::MatrixXd & Y, const RecoveryParams & params)
{
  detail::Volume x0{Image::Zero(op.image_rows(), op.image_cols())};
  return detail::solve_tv<Op>(std::span<const Op>(&op, 1), std::span<const Eigen::MatrixXd>(&Y, 1), std::move(x0), params);
}

/// Line-sensing form: min TV(X) s.t. ||Y - X Phi||_F <= epsilon.
inline RecoveredVideo recover_tv2d(const Eigen::MatrixXd & Y, const Eigen::MatrixXd & phi, const RecoveryParams & params)
{
  require(Y.cols() == phi.cols(), ErrorKind::dimension_mismatch, "measurement count differs from code count");
  return recover_tv2d(LineSensingOperator(Y.rows(), phi), Y, params);
}

/// Joint recovery of one frame per operator under the spatio-temporal TV. Blocks whose codes
/// are square and invertible start from their pseudoinverse, the rest from zero.
template <MeasurementOperator Op>
RecoveredVideo recover_tv3d(std::span<const Op> ops, std::span<const Eigen::MatrixXd> ys, const RecoveryParams & params)
{
  require(!ops.empty(), ErrorKind::invalid_argument, "recovery needs at least one block");
  require(ys.size() == ops.size(), ErrorKind::dimension_mismatch, "block count mismatch");
  detail::Volume x0(ops.size());
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto & op = ops[k];
    x0[k] = Image::Zero(op.image_rows(), op.image_cols());
    if constexpr (std::same_as<Op, LineSensingOperator>) {
      if (op.codes().rows() == op.codes().cols() && ys[k].cols() == op.codes().cols()) {
        try {
          x0[k] = recover_pinv(ys[k], op.codes());
        } catch (const Error &) {
          // singular square block: keep the zero start
        }
      }
    }
  }
  return detail::solve_tv<Op>(ops, ys, std::move(x0), params);
}

/// Line-sensing video recovery from grouped blocks. Mean-tracking columns are dropped unless
/// `params.use_mean_track_columns` is set.
inline RecoveredVideo recover_tv3d(const std::vector<MeasurementBlock> & blocks, const RecoveryParams & params)
{
  std::vector<LineSensingOperator> ops;
  std::vector<Eigen::MatrixXd> ys;
  for (const auto & b : blocks) {
    const MeasurementBlock used = params.use_mean_track_columns ? b : b.without_tracking();
    require(used.size() > 0, ErrorKind::invalid_argument, "block has no usable measurements");
    ops.emplace_back(used.Y.rows(), used.phi);
    ys.push_back(used.Y);
  }
  return recover_tv3d<LineSensingOperator>(ops, ys, params);
}

/// 3x3x3 median with replicate boundaries.
inline std::vector<Image> median3(const std::vector<Image> & video)
{
  require(!video.empty(), ErrorKind::invalid_argument, "median filter needs at least one frame");
  const auto q = static_cast<long>(video.size());
  const Eigen::Index rows = video.front().rows();
  const Eigen::Index cols = video.front().cols();
  for (const auto & f : video) {
    require(f.rows() == rows && f.cols() == cols, ErrorKind::dimension_mismatch, "frames differ in size");
  }
  auto clampi = [](long v, long hi) { return std::clamp(v, 0L, hi - 1); };
  std::vector<Image> out(video.size(), Image(rows, cols));
  std::array<double, 27> window{};
  for (long k = 0; k < q; ++k) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        std::size_t n = 0;
        for (long dk = -1; dk <= 1; ++dk) {
          const auto & f = video[static_cast<std::size_t>(clampi(k + dk, q))];
          for (long dr = -1; dr <= 1; ++dr) {
            for (long dc = -1; dc <= 1; ++dc) {
              window[n++] = f(clampi(r + dr, rows), clampi(c + dc, cols));
            }
          }
        }
        std::nth_element(window.begin(), window.begin() + 13, window.end());
        out[static_cast<std::size_t>(k)](r, c) = window[13];
      }
    }
  }
  return out;
}

}  // namespace lisens

#endif  // LISENS_RECOVERY_HPP

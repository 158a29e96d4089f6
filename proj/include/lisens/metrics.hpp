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

#ifndef LISENS_METRICS_HPP
#define LISENS_METRICS_HPP

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "lisens/error.hpp"
#include "lisens/types.hpp"

namespace lisens
{
/// Image dimensionality over measurement count, n1 * n2 / m.
inline double under_sampling(double n1, double n2, double m)
{
  require(n1 > 0 && n2 > 0 && m > 0, ErrorKind::invalid_argument, "under-sampling needs positive sizes");
  return n1 * n2 / m;
}

/// Reconstruction SNR in dB, -20 log10(||ref - est|| / ||ref||). +inf when est == ref.
inline double rsnr(const Eigen::MatrixXd & reference, const Eigen::MatrixXd & estimate)
{
  require(
    reference.rows() == estimate.rows() && reference.cols() == estimate.cols(),
    ErrorKind::dimension_mismatch, "rsnr operands differ in shape");
  const double ref = reference.norm();
  require(ref > 0.0, ErrorKind::invalid_argument, "rsnr reference is all zero");
  const double err = (reference - estimate).norm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return -20.0 * std::log10(err / ref);
}

/// Mean of per-frame RSNR values over a sequence.
inline double mean_rsnr(const std::vector<Image> & reference, const std::vector<Image> & estimate)
{
  require(
    reference.size() == estimate.size() && !reference.empty(), ErrorKind::dimension_mismatch,
    "frame counts differ");
  double s = 0.0;
  for (std::size_t k = 0; k < reference.size(); ++k) s += rsnr(reference[k], estimate[k]);
  return s / static_cast<double>(reference.size());
}

inline std::string format_db(double db)
{
  if (std::isinf(db) && db > 0) return "exact";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", db);
  return buf;
}

struct RunRecord
{
  std::string scene_id;
  std::string camera_model;
  double capture_duration = 0.0;  // tau, s per recovered frame
  std::size_t frame = 0;
  std::size_t measurements = 0;
  double under_sampling = 0.0;
  double rsnr_db = 0.0;
  std::string reference;  // "scene" or "nyquist"
  std::size_t iterations = 0;
  double residual = 0.0;
  double tv = 0.0;
  bool converged = true;
};

/// Per-run evaluation table. Column order is fixed so reports diff cleanly.
struct ExperimentReport
{
  std::vector<RunRecord> records;

  static constexpr const char * header =
    "scene,camera,tau_s,frame,measurements,under_sampling,rsnr_db,reference,iterations,residual,tv,converged";

  void write_csv(std::ostream & os) const
  {
    os << header << '\n';
    char buf[512];
    for (const auto & r : records) {
      std::snprintf(
        buf, sizeof(buf), "%s,%s,%.9g,%zu,%zu,%.6f,%s,%s,%zu,%.9g,%.9g,%d\n", r.scene_id.c_str(),
        r.camera_model.c_str(), r.capture_duration, r.frame, r.measurements, r.under_sampling,
        format_db(r.rsnr_db).c_str(), r.reference.c_str(), r.iterations, r.residual, r.tv,
        r.converged ? 1 : 0);
      os << buf;
    }
  }

  bool all_converged() const
  {
    for (const auto & r : records) {
      if (!r.converged) return false;
    }
    return true;
  }
};

}  // namespace lisens

#endif  // LISENS_METRICS_HPP

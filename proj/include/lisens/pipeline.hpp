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

#ifndef LISENS_PIPELINE_HPP
#define LISENS_PIPELINE_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lisens/codes.hpp"
#include "lisens/config.hpp"
#include "lisens/error.hpp"
#include "lisens/io.hpp"
#include "lisens/metrics.hpp"
#include "lisens/optics.hpp"
#include "lisens/recovery.hpp"
#include "lisens/scene.hpp"
#include "lisens/simulator.hpp"

namespace lisens
{
namespace fs = std::filesystem;

enum class CameraModel { lisens, spc };

inline const char * to_string(CameraModel m) { return m == CameraModel::lisens ? "lisens" : "spc"; }

enum class RecoveryMethod { automatic, pinv, tv };

/// Everything one experiment needs, resolved and validated.
struct ExperimentConfig
{
  std::string scene_source;  // "synthetic:<name>", "synthetic:square", *.pgm list or *.lsrf
  Eigen::Index scene_rows = 64;
  Eigen::Index scene_cols = 64;
  std::size_t scene_frames = 1;  // synthetic video length
  double scene_frame_rate = 1.0;

  CameraModel model = CameraModel::lisens;
  CameraConfig camera;

  std::uint64_t seed = 0;
  std::uint64_t schedule_seed = 0;
  std::size_t mean_track_period = 100;

  double tau = 0.0;         // capture duration per recovered frame, s
  std::size_t frames = 0;   // Q; 0 = one per scene frame
  double noise_sigma = 0.0;

  RecoveryParams recovery;
  bool epsilon_from_noise = true;
  RecoveryMethod method = RecoveryMethod::automatic;
  bool median = false;
  std::string reference = "scene";  // or "nyquist"

  fs::path out_dir = "lisens_out";
};

inline ExperimentConfig experiment_from(const KeyValueConfig & kv)
{
  ExperimentConfig c;
  c.seed = kv.count("seed", 0);
  c.scene_source = kv.get("scene.source", "synthetic:phantom");
  c.scene_rows = static_cast<Eigen::Index>(kv.count("scene.rows", 64));
  c.scene_cols = static_cast<Eigen::Index>(kv.count("scene.cols", 64));
  c.scene_frames = kv.count("scene.frames", 1);
  c.scene_frame_rate = kv.number("scene.frame_rate", 1.0);

  const std::string model = kv.get("camera.model", "lisens");
  require(model == "lisens" || model == "spc", ErrorKind::config, "camera.model must be lisens or spc");
  c.model = model == "lisens" ? CameraModel::lisens : CameraModel::spc;
  c.camera = camera_from(kv);

  c.schedule_seed = kv.count("schedule.seed", c.seed);
  c.mean_track_period = kv.count("schedule.mean_track_period", 100);
  c.tau = kv.number("capture.tau", 0.0);
  c.frames = kv.count("capture.frames", 0);
  c.noise_sigma = kv.number("noise.sigma", 0.0);

  c.epsilon_from_noise = !kv.has("recovery.epsilon");
  c.recovery.epsilon = kv.number("recovery.epsilon", 0.0);
  c.recovery.max_iterations = kv.count("recovery.max_iterations", c.recovery.max_iterations);
  c.recovery.tolerance = kv.number("recovery.tolerance", c.recovery.tolerance);
  c.recovery.weights.spatial = kv.number("recovery.spatial_weight", 1.0);
  c.recovery.weights.temporal = kv.number("recovery.temporal_weight", 1.0);
  c.recovery.use_mean_track_columns = kv.flag("recovery.use_mean_track", false);
  const std::string method = kv.get("recovery.method", "auto");
  if (method == "auto") {
    c.method = RecoveryMethod::automatic;
  } else if (method == "pinv") {
    c.method = RecoveryMethod::pinv;
  } else if (method == "tv") {
    c.method = RecoveryMethod::tv;
  } else {
    fail(ErrorKind::config, "recovery.method must be auto, pinv or tv");
  }
  c.median = kv.flag("recovery.median", false);
  c.reference = kv.get("report.reference", "scene");
  c.out_dir = kv.get("output.dir", "lisens_out");

  require(c.tau > 0.0, ErrorKind::config, "capture.tau must be positive");
  require(c.noise_sigma >= 0.0, ErrorKind::config, "noise.sigma must be non-negative");
  require(c.scene_frame_rate > 0.0, ErrorKind::config, "scene.frame_rate must be positive");
  require(c.reference == "scene" || c.reference == "nyquist", ErrorKind::config, "report.reference must be scene or nyquist");
  require(
    c.mean_track_period == 0 || c.mean_track_period >= 2, ErrorKind::config,
    "schedule.mean_track_period must be 0 or >= 2");
  try {
    c.recovery.validate();
  } catch (const Error & e) {
    fail(ErrorKind::config, e.what());
  }
  return c;
}

/// Scene named by the configuration.
inline SceneVideo load_scene(const ExperimentConfig & c)
{
  SceneVideo v;
  v.frame_rate = c.scene_frame_rate;
  const std::string & src = c.scene_source;
  if (src.rfind("synthetic:", 0) == 0) {
    const std::string name = src.substr(10);
    require(c.scene_rows >= 2 && c.scene_cols >= 2, ErrorKind::config, "synthetic scene must be at least 2x2");
    if (name == "square") {
      require(c.scene_rows == c.scene_cols, ErrorKind::config, "square video needs a square frame");
      v = translating_square(c.scene_rows, c.scene_frames, c.scene_rows / 4, 1, c.scene_frame_rate);
    } else {
      v.frames.push_back(synthetic_scene(name, c.scene_rows, c.scene_cols));
    }
  } else if (src.size() > 5 && src.substr(src.size() - 5) == ".lsrf") {
    v.frames = io::read_raw(src);
  } else {
    std::stringstream ss(src);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) v.frames.push_back(io::read_pgm(item));
    }
  }
  require(!v.empty(), ErrorKind::config, "scene is empty");
  v.validate();
  return v;
}

/// Acquisition plan derived from the capture duration and the camera's rate.
struct CapturePlan
{
  std::size_t frames = 1;              // Q
  std::size_t patterns_per_frame = 1;  // Hadamard codes per recovered frame
  std::size_t slots = 1;               // including mean-tracking slots
  std::size_t order = 1;
  double under_sampling = 1.0;
};

inline std::size_t measurements_per_pattern(CameraModel m, Eigen::Index rows)
{
  return m == CameraModel::lisens ? static_cast<std::size_t>(rows) : 1;
}

/// tau -> M uses the burst rate when burst timing is present, else the ideal rate.
inline CapturePlan plan_capture(const ExperimentConfig & c, const SceneVideo & scene)
{
  CapturePlan p;
  const Eigen::Index rows = scene.rows();
  const Eigen::Index cols = scene.cols();
  p.order = c.model == CameraModel::lisens ? static_cast<std::size_t>(cols)
                                           : static_cast<std::size_t>(rows * cols);
  require(
    is_power_of_two(p.order), ErrorKind::dimension_mismatch,
    "code length " + std::to_string(p.order) + " must be a power of two for Hadamard schedules");
  const double measurements = c.tau * effective_measurement_rate(c.camera);
  const double per_pattern = static_cast<double>(measurements_per_pattern(c.model, rows));
  p.patterns_per_frame = static_cast<std::size_t>(std::max(1.0, std::round(measurements / per_pattern)));
  p.frames = c.frames != 0 ? c.frames : scene.size();

  std::size_t codes = 0;
  p.slots = 0;
  while (codes < p.frames * p.patterns_per_frame) {
    if (!(c.mean_track_period != 0 && p.slots % c.mean_track_period == 0)) ++codes;
    ++p.slots;
  }
  p.under_sampling = under_sampling(
    static_cast<double>(rows), static_cast<double>(cols),
    static_cast<double>(p.patterns_per_frame) * per_pattern);
  return p;
}

struct ArtifactPaths
{
  fs::path dir;
  fs::path schedule() const { return dir / "schedule.lsps"; }
  fs::path schedule_manifest() const { return dir / "schedule.txt"; }
  fs::path measurements() const { return dir / "measurements.lsrf"; }
  fs::path sidecar() const { return dir / "measurements.json"; }
  fs::path truth() const { return dir / "truth.lsrf"; }
  fs::path recovered() const { return dir / "recovered.lsrf"; }
  fs::path recovery_summary() const { return dir / "recovery.json"; }
  fs::path diagnostics() const { return dir / "diagnostics.csv"; }
  fs::path report() const { return dir / "report.csv"; }
  fs::path frame_pgm(std::size_t k) const
  {
    std::ostringstream name;
    name << "frame_" << std::setw(3) << std::setfill('0') << k << ".pgm";
    return dir / name.str();
  }
};

/// Ground-truth frame for each recovered block: the scene frame active at the block's midpoint.
inline std::vector<Image> block_truth(
  const SceneVideo & scene, const std::vector<double> & timestamps, std::size_t frames)
{
  std::vector<Image> truth;
  const std::size_t total = timestamps.size();
  const std::size_t base = total / frames;
  const std::size_t extra = total % frames;
  std::size_t first = 0;
  for (std::size_t k = 0; k < frames; ++k) {
    const std::size_t n = base + (k < extra ? 1 : 0);
    const double mid = 0.5 * (timestamps[first] + timestamps[first + n - 1]);
    truth.push_back(scene.frames[active_frame(scene, mid)]);
    first += n;
  }
  return truth;
}

/// Stage 1: schedule, acquisition and the ground truth each recovered frame should match.
inline void stage_simulate(const ExperimentConfig & c)
{
  const SceneVideo scene = load_scene(c);
  const CapturePlan plan = plan_capture(c, scene);
  require(
    plan.frames >= 1 && plan.frames * plan.patterns_per_frame >= plan.frames, ErrorKind::config,
    "capture plan is empty");
  const PatternSchedule schedule = build_schedule(plan.order, plan.slots, c.schedule_seed, c.mean_track_period);
  const MeasurementSet m = c.model == CameraModel::lisens
                             ? simulate_lisens(scene, schedule, c.noise_sigma, c.seed, c.camera)
                             : simulate_spc(scene, schedule, c.noise_sigma, c.seed, c.camera);

  const ArtifactPaths paths{c.out_dir};
  fs::create_directories(paths.dir);
  io::write_schedule(paths.schedule(), schedule);
  io::write_schedule_manifest(paths.schedule_manifest(), schedule, paths.schedule());
  io::write_measurements(paths.measurements(), paths.sidecar(), m, to_string(c.model));
  io::write_raw(paths.truth(), block_truth(scene, m.timestamps, plan.frames));
}

/// Noise level of demeaned measurements: 2 y - m doubles the per-slot noise and adds the
/// (interpolated) mean's own noise, at most sigma.
inline double demeaned_sigma(double sigma) { return sigma * std::sqrt(5.0); }

namespace detail
{
inline Image unflatten(const Eigen::MatrixXd & row, Eigen::Index rows, Eigen::Index cols)
{
  return Eigen::Map<const Eigen::MatrixXd>(Eigen::RowVectorXd(row.row(0)).data(), cols, rows).transpose();
}
}  // namespace detail

/// Stage 2: demean, group and recover every frame from the on-disk artifacts.
inline RecoveredVideo stage_recover(const ExperimentConfig & c)
{
  const ArtifactPaths paths{c.out_dir};
  const PatternSchedule schedule = io::read_schedule(paths.schedule());
  const auto loaded = io::read_measurements(paths.sidecar());
  require(
    loaded.set.schedule_ref == schedule.id(), ErrorKind::io,
    "measurements were taken with schedule " + loaded.set.schedule_ref + ", found " + schedule.id());
  const auto truth = io::read_raw(paths.truth());
  const Eigen::Index rows = truth.front().rows();
  const Eigen::Index cols = truth.front().cols();
  const std::size_t frames = truth.size();
  const CameraModel model = loaded.camera_model == "spc" ? CameraModel::spc : CameraModel::lisens;

  const MeasurementSet pm = demean(loaded.set, schedule);
  const auto blocks = group_frames(pm, schedule, frames);

  RecoveryParams params = c.recovery;
  std::size_t used_values = 0;
  std::vector<MeasurementBlock> used;
  for (const auto & b : blocks) {
    used.push_back(params.use_mean_track_columns ? b : b.without_tracking());
    require(used.back().size() > 0, ErrorKind::invalid_argument, "a frame received no coded measurements");
    used_values += static_cast<std::size_t>(used.back().Y.size());
  }
  if (c.epsilon_from_noise) {
    params.epsilon = discrepancy_epsilon(demeaned_sigma(loaded.set.noise_sigma), used_values);
  }

  const std::size_t order = schedule.order();
  bool full = true;
  for (const auto & b : used) full = full && b.size() >= order;
  const bool use_pinv =
    c.method == RecoveryMethod::pinv || (c.method == RecoveryMethod::automatic && full && frames == 1);

  RecoveredVideo result;
  if (use_pinv) {
    result.converged = true;
    for (const auto & b : used) {
      Image x = recover_pinv(b.Y, b.phi);
      if (model == CameraModel::spc) x = detail::unflatten(x, rows, cols);
      FrameDiagnostics d;
      d.residual = model == CameraModel::lisens ? (x * b.phi - b.Y).norm()
                                                : (SinglePixelOperator(rows, cols, b.phi).apply(x) - b.Y).norm();
      d.tv = tv_iso(x);
      result.frames.push_back(std::move(x));
      result.diagnostics.push_back(d);
    }
  } else if (model == CameraModel::lisens) {
    std::vector<LineSensingOperator> ops;
    std::vector<Eigen::MatrixXd> ys;
    for (const auto & b : used) {
      ops.emplace_back(rows, b.phi);
      ys.push_back(b.Y);
    }
    result = frames == 1 ? recover_tv2d(ops.front(), ys.front(), params)
                         : recover_tv3d<LineSensingOperator>(ops, ys, params);
  } else {
    std::vector<SinglePixelOperator> ops;
    std::vector<Eigen::MatrixXd> ys;
    for (const auto & b : used) {
      ops.emplace_back(rows, cols, b.phi);
      ys.push_back(b.Y);
    }
    result = frames == 1 ? recover_tv2d(ops.front(), ys.front(), params)
                         : recover_tv3d<SinglePixelOperator>(ops, ys, params);
  }
  if (c.median && result.frames.size() > 1) result.frames = median3(result.frames);

  io::write_raw(paths.recovered(), result.frames);
  for (std::size_t k = 0; k < result.frames.size(); ++k) io::write_pgm(paths.frame_pgm(k), result.frames[k], 16);
  io::write_diagnostics(paths.diagnostics(), result);

  nlohmann::json j;
  j["method"] = use_pinv ? "pinv" : (frames == 1 ? "tv2d" : "tv3d");
  j["converged"] = result.converged;
  j["epsilon"] = params.epsilon;
  j["median"] = c.median && result.frames.size() > 1;
  for (std::size_t k = 0; k < result.diagnostics.size(); ++k) {
    const auto & d = result.diagnostics[k];
    j["frames"].push_back({{"iterations", d.iterations}, {"residual", d.residual}, {"tv", d.tv}, {"measurements", used[k].Y.size()}});
  }
  std::ofstream out(paths.recovery_summary());
  require(out.good(), ErrorKind::io, "cannot write " + paths.recovery_summary().string());
  out << std::setw(2) << j << '\n';
  return result;
}

/// Noisy full-rate acquisition of `truth` recovered by pseudoinverse; the reference used when
/// results are compared against a Nyquist-rate capture instead of the pristine scene.
inline Image nyquist_reference(const ExperimentConfig & c, const Image & truth)
{
  const SceneVideo scene = still(truth);
  if (c.model == CameraModel::lisens) {
    const auto order = static_cast<std::size_t>(truth.cols());
    const PatternSchedule s = build_schedule(order, order, c.schedule_seed, 0);
    const auto m = demean(simulate_lisens(scene, s, c.noise_sigma, c.seed ^ 0x4e59ULL, c.camera), s);
    return recover_pinv(m.Y, s.signed_block(0, s.size()));
  }
  const auto order = static_cast<std::size_t>(truth.size());
  const PatternSchedule s = build_schedule(order, order, c.schedule_seed, 0);
  const auto m = demean(simulate_spc(scene, s, c.noise_sigma, c.seed ^ 0x4e59ULL, c.camera), s);
  return detail::unflatten(recover_pinv(m.Y, s.signed_block(0, s.size())), truth.rows(), truth.cols());
}

/// Stage 3: score recovered frames and write the report.
inline ExperimentReport stage_report(const ExperimentConfig & c)
{
  const ArtifactPaths paths{c.out_dir};
  const auto truth = io::read_raw(paths.truth());
  const auto recovered = io::read_raw(paths.recovered());
  require(truth.size() == recovered.size(), ErrorKind::dimension_mismatch, "recovered frame count differs from truth");
  std::ifstream in(paths.recovery_summary());
  require(in.good(), ErrorKind::io, "cannot open " + paths.recovery_summary().string());
  nlohmann::json summary;
  try {
    in >> summary;
  } catch (const nlohmann::json::exception & e) {
    fail(ErrorKind::io, std::string("malformed recovery summary: ") + e.what());
  }

  ExperimentReport report;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const auto & fd = summary.at("frames").at(k);
    RunRecord r;
    r.scene_id = c.scene_source;
    r.camera_model = to_string(c.model);
    r.capture_duration = c.tau;
    r.frame = k;
    r.measurements = fd.at("measurements").get<std::size_t>();
    r.under_sampling = under_sampling(
      static_cast<double>(truth[k].rows()), static_cast<double>(truth[k].cols()), static_cast<double>(r.measurements));
    const Image reference = c.reference == "scene" ? truth[k] : nyquist_reference(c, truth[k]);
    r.rsnr_db = rsnr(reference, recovered[k]);
    r.reference = c.reference;
    r.iterations = fd.at("iterations").get<std::size_t>();
    r.residual = fd.at("residual").get<double>();
    r.tv = fd.at("tv").get<double>();
    r.converged = summary.at("converged").get<bool>();
    report.records.push_back(r);
  }
  std::ofstream out(paths.report());
  require(out.good(), ErrorKind::io, "cannot write " + paths.report().string());
  report.write_csv(out);
  return report;
}

/// Full pipeline: schedule -> simulate -> demean -> group -> recover -> metrics. Inputs are
/// validated before anything is written.
inline ExperimentReport run_experiment(const ExperimentConfig & c)
{
  const SceneVideo scene = load_scene(c);
  (void)plan_capture(c, scene);
  stage_simulate(c);
  stage_recover(c);
  return stage_report(c);
}

}  // namespace lisens

#endif  // LISENS_PIPELINE_HPP

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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lisens/lisens.hpp"

namespace
{
namespace fs = std::filesystem;

// Exit status per outcome; 2 means results were written but the solver did not converge.
enum Exit : int {
  ok = 0,
  unknown = 1,
  not_converged = 2,
  config = 3,
  io = 4,
  dimension = 5,
  rank = 6,
  argument = 7,
};

int exit_for(lisens::ErrorKind k)
{
  switch (k) {
    case lisens::ErrorKind::config:
      return config;
    case lisens::ErrorKind::io:
      return io;
    case lisens::ErrorKind::dimension_mismatch:
      return dimension;
    case lisens::ErrorKind::rank_deficient:
      return rank;
    case lisens::ErrorKind::invalid_argument:
      return argument;
  }
  return unknown;
}

struct CommonOptions
{
  std::string config;
  std::string preset;
  std::string out;
  long long seed = -1;
};

void add_common(CLI::App * cmd, CommonOptions & o)
{
  cmd->add_option("--config", o.config, "key = value configuration file");
  cmd->add_option("--preset", o.preset, "camera preset (built in, or <name>.cfg in $LISENS_PRESET_DIR)");
  cmd->add_option("--out", o.out, "output directory (overrides output.dir)");
  cmd->add_option("--seed", o.seed, "global seed (overrides seed)");
}

lisens::KeyValueConfig load(const CommonOptions & o)
{
  lisens::KeyValueConfig kv;
  if (!o.preset.empty()) kv.merge_preset(o.preset);
  if (!o.config.empty()) kv.merge_file(o.config);
  if (!o.out.empty()) kv.set("output.dir", o.out);
  if (o.seed >= 0) kv.set("seed", std::to_string(o.seed));
  return kv;
}

void print_report(const lisens::ExperimentReport & r)
{
  r.write_csv(std::cout);
}

int run_design(const CommonOptions & o, std::size_t max_pixels)
{
  const auto kv = load(o);
  const auto camera = lisens::camera_from(kv);
  const fs::path dir = kv.get("output.dir", "lisens_out");
  fs::create_directories(dir);

  {
    std::ofstream csv(dir / "rate_curve.csv");
    if (!csv) lisens::fail(lisens::ErrorKind::io, "cannot write rate_curve.csv");
    csv << "pixels,measurement_rate\n";
    for (const auto & [f, rate] : lisens::rate_curve(camera, max_pixels)) csv << f << ',' << rate << '\n';
  }

  std::ostringstream rep;
  rep.precision(10);
  rep << "pixels = " << camera.pixels << '\n'
      << "dmd_rate_hz = " << camera.dmd_rate << '\n'
      << "adc_rate_hz = " << camera.adc_rate << '\n'
      << "measurement_rate = " << lisens::measurement_rate(camera) << '\n'
      << "f_min = " << lisens::f_min(camera) << '\n'
      << "rate_at_f_min = "
      << lisens::measurement_rate(static_cast<double>(lisens::f_min(camera)), camera.dmd_rate, camera.adc_rate)
      << '\n';
  if (camera.burst) {
    const auto b = lisens::burst_rate(camera);
    rep << "burst_fps = " << b.frames_per_second << '\n'
        << "burst_measurement_rate = " << b.measurements_per_second << '\n';
  }
  if (kv.has("optics.relay_focal")) {
    const auto d = lisens::make_optical_design(
      kv.number("optics.dmd_width", 0.0), kv.number("optics.dmd_height", 0.0),
      kv.number("optics.sensor_width", 0.0), kv.number("optics.sensor_height", 0.0),
      kv.number("optics.relay_focal", 0.0), kv.number("optics.relay_diameter", 0.0));
    const auto cyl = lisens::design_cylindrical(d.relay_focal, d.relay_diameter, d.sensor_height);
    rep << "relay_magnification = " << d.magnification << '\n'
        << "cylindrical_focal_mm = " << cyl.focal_exact << '\n'
        << "cylindrical_focal_approx_mm = " << cyl.focal_approx << '\n'
        << "cylindrical_to_sensor_mm = " << cyl.to_sensor << '\n'
        << "cylindrical_to_relay_mm = " << cyl.to_relay << '\n'
        << "constraint_error = " << d.constraint_error() << '\n';
  }
  std::ofstream(dir / "design_report.txt") << rep.str();
  std::cout << rep.str();
  return ok;
}

int run_stage(const CommonOptions & o, const std::string & stage)
{
  const auto cfg = lisens::experiment_from(load(o));
  if (stage == "simulate") {
    lisens::stage_simulate(cfg);
    return ok;
  }
  if (stage == "recover") {
    const auto result = lisens::stage_recover(cfg);
    return result.converged ? ok : not_converged;
  }
  if (stage == "report") {
    const auto report = lisens::stage_report(cfg);
    print_report(report);
    return report.all_converged() ? ok : not_converged;
  }
  if (stage == "all") {
    const auto report = lisens::run_experiment(cfg);
    print_report(report);
    return report.all_converged() ? ok : not_converged;
  }
  lisens::fail(lisens::ErrorKind::config, "unknown stage '" + stage + "'");
}
}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Compressive line-sensor and single-pixel camera simulator"};
  app.require_subcommand(1);

  CommonOptions design_opts, sim_opts, rec_opts, rep_opts, run_opts;
  std::size_t max_pixels = 1000000;
  std::string stage = "all";

  auto * design = app.add_subcommand("design", "measurement-rate curve and optical layout");
  add_common(design, design_opts);
  design->add_option("--max-pixels", max_pixels, "largest sensor size on the rate curve");

  auto * simulate = app.add_subcommand("simulate", "build the schedule and simulate the acquisition");
  add_common(simulate, sim_opts);
  auto * recover = app.add_subcommand("recover", "recover frames from simulated measurements");
  add_common(recover, rec_opts);
  auto * report = app.add_subcommand("report", "score recovered frames");
  add_common(report, rep_opts);
  auto * run = app.add_subcommand("run", "run the whole experiment");
  add_common(run, run_opts);
  run->add_option("--stage", stage, "all, simulate, recover or report")
    ->check(CLI::IsMember({"all", "simulate", "recover", "report"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*design) return run_design(design_opts, max_pixels);
    if (*simulate) return run_stage(sim_opts, "simulate");
    if (*recover) return run_stage(rec_opts, "recover");
    if (*report) return run_stage(rep_opts, "report");
    return run_stage(run_opts, stage);
  } catch (const lisens::Error & e) {
    std::cerr << "lisens: " << lisens::to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_for(e.kind());
  } catch (const std::exception & e) {
    std::cerr << "lisens: " << e.what() << '\n';
    return unknown;
  }
}

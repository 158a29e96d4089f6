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

#ifndef LISENS_CONFIG_HPP
#define LISENS_CONFIG_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lisens/error.hpp"
#include "lisens/optics.hpp"

namespace lisens
{
/// Flat `key = value` settings. Lines starting with '#' are comments. `include = <name>` pulls in
/// a file (relative to the including file) or a preset; later keys override earlier ones.
class KeyValueConfig
{
public:
  void set(const std::string & key, const std::string & value) { values_[key] = value; }
  bool has(const std::string & key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string> & values() const { return values_; }

  std::string get(const std::string & key, const std::string & fallback) const
  {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string require_key(const std::string & key) const
  {
    auto it = values_.find(key);
    require(it != values_.end(), ErrorKind::config, "missing key '" + key + "'");
    return it->second;
  }

  double number(const std::string & key, double fallback) const
  {
    return has(key) ? parse_number(key, require_key(key)) : fallback;
  }

  std::size_t count(const std::string & key, std::size_t fallback) const
  {
    if (!has(key)) return fallback;
    const double v = parse_number(key, require_key(key));
    require(
      v >= 0.0 && v == static_cast<double>(static_cast<std::size_t>(v)), ErrorKind::config,
      "key '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  bool flag(const std::string & key, bool fallback) const
  {
    if (!has(key)) return fallback;
    const std::string v = require_key(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(ErrorKind::config, "key '" + key + "' must be a boolean, got '" + v + "'");
  }

  /// Parse text. `base` resolves relative includes.
  void merge_text(const std::string & text, const std::filesystem::path & base, int depth = 0)
  {
    require(depth < 16, ErrorKind::config, "include nesting too deep");
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      require(
        eq != std::string::npos, ErrorKind::config,
        "line " + std::to_string(lineno) + ": expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      require(!key.empty(), ErrorKind::config, "line " + std::to_string(lineno) + ": empty key");
      if (key == "include") {
        merge_include(value, base, depth + 1);
      } else {
        values_[key] = value;
      }
    }
  }

  void merge_file(const std::filesystem::path & path, int depth = 0)
  {
    std::ifstream in(path);
    require(in.good(), ErrorKind::io, "cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    merge_text(ss.str(), path.parent_path(), depth);
  }

  void merge_preset(const std::string & name, int depth = 0);

  static KeyValueConfig from_file(const std::filesystem::path & path)
  {
    KeyValueConfig c;
    c.merge_file(path);
    return c;
  }

private:
  static std::string trim(const std::string & s)
  {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static double parse_number(const std::string & key, const std::string & text)
  {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    require(
      used == text.size() && !text.empty(), ErrorKind::config,
      "key '" + key + "' must be numeric, got '" + text + "'");
    return v;
  }

  void merge_include(const std::string & target, const std::filesystem::path & base, int depth)
  {
    const std::filesystem::path p = base / target;
    if (std::filesystem::exists(p)) {
      merge_file(p, depth);
    } else {
      merge_preset(target, depth);
    }
  }

  std::map<std::string, std::string> values_;
};

// Built-in camera presets. `paper-lisens` is the line-sensor prototype (20 kHz DMD, 1024-pixel
// sensor read in 100-frame bursts of 500 us frames with a 60 ms pause); `paper-spc` is the
// single-pixel camera on the DMD's other arm, limited to the DMD rate.
inline const std::map<std::string, std::string> & builtin_presets()
{
  static const std::map<std::string, std::string> presets = {
    {"paper-lisens",
     "camera.model = lisens\n"
     "camera.pixels = 1024\n"
     "camera.dmd_rate = 20000\n"
     "camera.adc_rate = 2048000\n"
     "camera.dmd_cols = 1024\n"
     "camera.dmd_rows = 768\n"
     "camera.burst_frames = 100\n"
     "camera.frame_period = 0.0005\n"
     "camera.cooldown = 0.060\n"},
    {"paper-spc",
     "camera.model = spc\n"
     "camera.pixels = 1\n"
     "camera.dmd_rate = 20000\n"
     "camera.adc_rate = 10000000\n"
     "camera.dmd_cols = 1024\n"
     "camera.dmd_rows = 768\n"},
  };
  return presets;
}

/// Directory searched for `<name>.cfg` before the built-in presets.
inline constexpr const char * preset_dir_env = "LISENS_PRESET_DIR";

inline void KeyValueConfig::merge_preset(const std::string & name, int depth)
{
  if (const char * dir = std::getenv(preset_dir_env); dir != nullptr && *dir != '\0') {
    const std::filesystem::path p = std::filesystem::path(dir) / (name + ".cfg");
    if (std::filesystem::exists(p)) {
      merge_file(p, depth);
      return;
    }
  }
  const auto & presets = builtin_presets();
  auto it = presets.find(name);
  require(it != presets.end(), ErrorKind::config, "unknown preset or include '" + name + "'");
  merge_text(it->second, {}, depth);
}

/// Camera description from `camera.*` keys. Burst timing is used only when all three burst
/// keys are present.
inline CameraConfig camera_from(const KeyValueConfig & kv)
{
  CameraConfig c;
  c.pixels = kv.count("camera.pixels", 1);
  c.dmd_rate = kv.number("camera.dmd_rate", 0.0);
  c.adc_rate = kv.number("camera.adc_rate", 0.0);
  c.dmd_cols = kv.count("camera.dmd_cols", 1);
  c.dmd_rows = kv.count("camera.dmd_rows", 1);
  const int burst_keys = int(kv.has("camera.burst_frames")) + int(kv.has("camera.frame_period")) +
                         int(kv.has("camera.cooldown"));
  require(
    burst_keys == 0 || burst_keys == 3, ErrorKind::config,
    "camera.burst_frames, camera.frame_period and camera.cooldown must be given together");
  if (burst_keys == 3) {
    c.burst = BurstTiming{
      kv.count("camera.burst_frames", 0), kv.number("camera.frame_period", 0.0),
      kv.number("camera.cooldown", 0.0)};
  }
  try {
    c.validate();
  } catch (const Error & e) {
    fail(ErrorKind::config, e.what());
  }
  return c;
}

}  // namespace lisens

#endif  // LISENS_CONFIG_HPP

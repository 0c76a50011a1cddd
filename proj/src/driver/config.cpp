// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "lipshape/driver.hpp"
#include "lipshape/error.hpp"

namespace lipshape {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  fail(ErrorKind::Config, "invalid value '" + std::string(value) + "' for key '" + std::string(key) +
                              "' (expected " + expected + ")");
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "a number");
  return out;
}

long long to_integer(std::string_view key, std::string_view value) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
  return out;
}

void set_marker_tag(MarkerTable& table, Marker marker, int tag) {
  for (auto it = table.by_physical_tag.begin(); it != table.by_physical_tag.end();) {
    it = it->second == marker ? table.by_physical_tag.erase(it) : std::next(it);
  }
  table.by_physical_tag[tag] = marker;
}

}  // namespace

void set_config_value(OptimConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "length") c.geometry.length = to_double(key, value);
  else if (key == "height") c.geometry.height = to_double(key, value);
  else if (key == "obstacle_edge") c.geometry.obstacle_edge = to_double(key, value);
  else if (key == "base_resolution") c.geometry.base_resolution = static_cast<int>(to_integer(key, value));
  else if (key == "grading") c.geometry.grading = to_double(key, value);
  else if (key == "mesh_file") c.mesh_file = std::string(value);
  else if (key == "msh_tag_inflow") set_marker_tag(c.markers, Marker::Inflow, static_cast<int>(to_integer(key, value)));
  else if (key == "msh_tag_outflow") set_marker_tag(c.markers, Marker::Outflow, static_cast<int>(to_integer(key, value)));
  else if (key == "msh_tag_wall") set_marker_tag(c.markers, Marker::Wall, static_cast<int>(to_integer(key, value)));
  else if (key == "msh_tag_obstacle") set_marker_tag(c.markers, Marker::Obstacle, static_cast<int>(to_integer(key, value)));
  else if (key == "nu") c.nu = to_double(key, value);
  else if (key == "levels") c.levels = static_cast<int>(to_integer(key, value));
  else if (key == "p_init") c.p_init = to_double(key, value);
  else if (key == "p_inc") c.p_inc = to_double(key, value);
  else if (key == "p_max") c.p_max = to_double(key, value);
  else if (key == "eps1") c.eps1 = to_double(key, value);
  else if (key == "eps2") c.eps2 = to_double(key, value);
  else if (key == "eps") c.eps = to_double(key, value);
  else if (key == "sigma_min") c.sigma_min = to_double(key, value);
  else if (key == "min_angle_guard") c.min_angle_guard = to_double(key, value);
  else if (key == "max_steps") c.max_steps = static_cast<int>(to_integer(key, value));
  else if (key == "flow_tol") c.flow_tol = to_double(key, value);
  else if (key == "flow_max_iterations") c.flow_max_iterations = static_cast<int>(to_integer(key, value));
  else if (key == "inner_solver") {
    if (value == "direct") c.inner_solver = InnerMode::Direct;
    else if (value == "iterative") c.inner_solver = InnerMode::Iterative;
    else bad_value(key, value, "direct or iterative");
  } else if (key == "inner_tol") c.inner_tol = to_double(key, value);
  else if (key == "output_dir") c.output_dir = std::string(value);
  else if (key == "seed") {
    const long long s = to_integer(key, value);
    if (s < 0) bad_value(key, value, "a non-negative integer");
    c.seed = static_cast<std::uint64_t>(s);
  } else {
    fail(ErrorKind::Config, "unknown key '" + std::string(key) + "'");
  }
}

void OptimConfig::validate() const {
  auto check = [](bool ok, const char* key, const char* what) {
    if (!ok) fail(ErrorKind::Config, std::string("key '") + key + "': " + what);
  };
  if (mesh_file.empty()) {
    check(geometry.obstacle_edge > 0.0 && geometry.obstacle_edge < geometry.height,
          "obstacle_edge", "must satisfy 0 < obstacle_edge < height");
    check(geometry.height < geometry.length, "height", "must be smaller than length");
    check(geometry.base_resolution >= 4, "base_resolution", "must be >= 4");
    check(geometry.grading > 0.0, "grading", "must be positive");
  }
  check(geometry.height > 0.0, "height", "must be positive");
  check(nu > 0.0, "nu", "must be positive");
  check(levels >= 0 && levels <= 6, "levels", "must lie in [0, 6]");
  check(p_init >= 2.0, "p_init", "must be >= 2");
  check(p_inc > 0.0, "p_inc", "must be positive");
  check(p_max >= p_init, "p_max", "must be >= p_init");
  check(eps1 > 0.0, "eps1", "must be positive");
  check(eps2 > 0.0, "eps2", "must be positive");
  check(eps > 0.0, "eps", "must be positive");
  check(sigma_min > 0.0 && sigma_min <= 1.0, "sigma_min", "must lie in (0, 1]");
  check(min_angle_guard >= 0.0 && min_angle_guard < 60.0, "min_angle_guard", "must lie in [0, 60)");
  check(max_steps >= 0, "max_steps", "must be non-negative");
  check(flow_tol > 0.0, "flow_tol", "must be positive");
  check(flow_max_iterations > 0, "flow_max_iterations", "must be positive");
  check(inner_tol > 0.0, "inner_tol", "must be positive");
}

OptimConfig parse_config_text(std::string_view text) {
  OptimConfig config;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::Config, "line " + std::to_string(line_number) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    try {
      set_config_value(config, key, line.substr(eq + 1));
    } catch (const Error& e) {
      fail(ErrorKind::Config, "line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

OptimConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Config, "cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace lipshape

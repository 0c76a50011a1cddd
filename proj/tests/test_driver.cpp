// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "lipshape/driver.hpp"
#include "lipshape/error.hpp"
#include "test_support.hpp"

using namespace lipshape;
using lipshape::testing::read_text;
using lipshape::testing::scratch_dir;

namespace {

OptimConfig small_config() {
  OptimConfig c;
  c.geometry.length = 4.0;
  c.geometry.height = 2.0;
  c.geometry.obstacle_edge = 0.5;
  c.nu = 0.05;
  c.levels = 0;
  c.max_steps = 3;
  return c;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') quoted = !quoted;
      else if (ch == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  const OptimConfig defaults = parse_config_text("");
  CHECK(defaults.p_init == 2.0);
  CHECK(defaults.p_inc == 0.19);
  CHECK(defaults.p_max == 4.8);
  CHECK(defaults.eps1 == 1e-5);
  CHECK(defaults.eps2 == 1e-8);
  CHECK(defaults.eps == 1e-8);
  CHECK(defaults.nu == 0.02);
  CHECK(defaults.geometry.length == 20.0);
  CHECK(defaults.geometry.height == 6.0);

  const OptimConfig c = parse_config_text("# comment\np_max = 4.8  # trailing\n\nlevels=2\ninner_solver = iterative\n");
  CHECK(c.p_max == 4.8);
  CHECK(c.levels == 2);
  CHECK(c.inner_solver == InnerMode::Iterative);

  auto config_error = [](std::string_view text) -> std::string {
    try {
      parse_config_text(text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
      return e.what();
    }
    FAIL("expected config error");
    return {};
  };
  CHECK(config_error("p_max = 1.0").find("p_max") != std::string::npos);
  const std::string unknown = config_error("nu = 0.1\nbogus = 3\n");
  CHECK(unknown.find("bogus") != std::string::npos);
  CHECK(unknown.find("line 2") != std::string::npos);
  CHECK(config_error("levels = two").find("levels") != std::string::npos);
  CHECK(config_error("sigma_min = 2").find("sigma_min") != std::string::npos);
  CHECK(config_error("min_angle_guard = 60").find("min_angle_guard") != std::string::npos);
  CHECK(config_error("eps2 = 0").find("eps2") != std::string::npos);
  CHECK(config_error("just text").find("line 1") != std::string::npos);

  try {
    parse_config("/nonexistent/dir/run.cfg");
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }

  OptimConfig set;
  set_config_value(set, "msh_tag_obstacle", "7");
  CHECK(set.markers.by_physical_tag.at(7) == Marker::Obstacle);
  CHECK(set.markers.by_physical_tag.count(4) == 0);
}

TEST_CASE("zero steps leave the geometry alone") {
  OptimConfig c = small_config();
  c.max_steps = 0;
  bool called = false;
  OptimizeHooks hooks;
  hooks.on_trial = [&](const TrialEvent&) { called = true; };
  const RunLog log = run_optimize(c, hooks);
  CHECK_FALSE(called);
  CHECK(log.records.empty());
  CHECK(log.objective_history() == std::vector<double>{log.initial_objective});
  CHECK(log.polygons.size() == 1);
  CHECK(log.status == RunStatus::MaxSteps);
}

TEST_CASE("short run: monotone objective, constraints, outputs") {
  const auto dir = scratch_dir("driver_run");
  OptimConfig c = small_config();
  c.output_dir = dir.string();
  int rejected = 0;
  bool restore_ok = true;
  std::vector<CoordinateSnapshot> after_accept;
  OptimizeHooks hooks;
  hooks.on_trial = [&](const TrialEvent& e) {
    if (!e.record.accepted) {
      ++rejected;
      restore_ok = restore_ok && e.hierarchy.snapshot() == e.before;
    }
  };
  const RunLog log = run_optimize(c, hooks);
  REQUIRE(log.accepted_steps() >= 1);
  const auto history = log.objective_history();
  for (std::size_t k = 1; k < history.size(); ++k) CHECK(history[k] < history[k - 1]);
  for (const auto& r : log.records) {
    if (!r.accepted) continue;
    CHECK(r.g_inf <= 10 * c.eps2);
    CHECK(r.quality.min_angle > 0.0);
    CHECK(r.stages.size() == 16);
  }
  CHECK(restore_ok);
  MESSAGE("accepted " << log.accepted_steps() << ", rejected " << rejected);

  for (const char* name : {"run.csv", "timing.csv", "summary.csv", "final_polygon.csv", "distance.csv", "step_0.vtk"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  CHECK(std::filesystem::exists(dir / ("step_" + std::to_string(log.accepted_steps()) + ".vtk")));

  const auto rows = read_csv(dir / "run.csv");
  REQUIRE(rows.size() == log.records.size() + 1);
  CHECK(rows[0][0] == "step");
  CHECK(rows[0][4] == "objective");
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const double j = std::strtod(rows[i + 1][4].c_str(), nullptr);
    if (std::isnan(log.records[i].objective)) CHECK(std::isnan(j));
    else CHECK(j == log.records[i].objective);
  }

  const auto distances = shape_convergence_report(log, log.polygons.back());
  REQUIRE(distances.size() == log.polygons.size());
  CHECK(distances.back() == 0.0);
  CHECK(distances.front() > 0.0);
  CHECK(shape_convergence_report(log, log.polygons.back()) == distances);

  // a second identical run reproduces the log byte for byte
  const auto dir2 = scratch_dir("driver_run_repeat");
  c.output_dir = dir2.string();
  run_optimize(c);
  CHECK(read_text(dir / "run.csv") == read_text(dir2 / "run.csv"));
}

TEST_CASE("flipped sensitivities are rejected and restored") {
  OptimConfig c = small_config();
  c.max_steps = 2;
  c.sigma_min = 0.1;
  std::vector<double> sigmas;
  bool restore_ok = true;
  OptimizeHooks hooks;
  hooks.gradient = [](int, Eigen::VectorXd& g) { g = -g; };
  hooks.on_trial = [&](const TrialEvent& e) {
    sigmas.push_back(e.record.sigma);
    CHECK_FALSE(e.record.accepted);
    restore_ok = restore_ok && e.hierarchy.snapshot() == e.before;
  };
  const RunLog log = run_optimize(c, hooks);
  CHECK(log.status == RunStatus::Stalled);
  CHECK(restore_ok);
  CHECK(sigmas == std::vector<double>{1.0, 0.5, 0.25, 0.125});
  CHECK(log.accepted_steps() == 0);
  CHECK(log.polygons.size() == 1);
}

TEST_CASE("minimum angle guard rejects distorting trials") {
  OptimConfig c = small_config();
  c.max_steps = 1;
  c.sigma_min = 0.1;
  c.min_angle_guard = 59.0;
  bool restore_ok = true;
  OptimizeHooks hooks;
  hooks.on_trial = [&](const TrialEvent& e) {
    restore_ok = restore_ok && e.hierarchy.snapshot() == e.before;
  };
  const RunLog log = run_optimize(c, hooks);
  CHECK(log.status == RunStatus::Stalled);
  CHECK(restore_ok);
  REQUIRE(log.records.size() == 4);
  for (const auto& r : log.records) {
    CHECK_FALSE(r.accepted);
    CHECK(std::isnan(r.objective));
    CHECK_FALSE(r.note.empty());
  }
  // sigma = 1 already inverts elements on this coarse channel
  for (std::size_t k = 1; k < log.records.size(); ++k) {
    CHECK(log.records[k].note.find("below guard") != std::string::npos);
  }
}

TEST_CASE("run log CSV of an empty log is a header") {
  const auto dir = scratch_dir("empty_log");
  write_runlog_csv(RunLog{}, dir / "run.csv");
  const auto rows = read_csv(dir / "run.csv");
  CHECK(rows.size() == 1);
  CHECK(rows[0].size() == 15);
}

TEST_CASE("run log CSV row count and precision") {
  RunLog log;
  log.initial_objective = 1.0;
  for (int k = 1; k <= 3; ++k) {
    StepRecord rejected;
    rejected.step = k;
    rejected.trial = 1;
    rejected.objective = 1.0;
    rejected.note = "objective did not decrease, retry";
    log.records.push_back(rejected);
    StepRecord accepted = rejected;
    accepted.trial = 2;
    accepted.accepted = true;
    accepted.sigma = 0.5;
    accepted.objective = 1.0 / (3.0 + k);
    accepted.note.clear();
    log.records.push_back(accepted);
  }
  const auto dir = scratch_dir("log_rows");
  write_runlog_csv(log, dir / "run.csv");
  const auto rows = read_csv(dir / "run.csv");
  CHECK(rows.size() == 7);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].size() == 15);
    CHECK(std::strtod(rows[i][4].c_str(), nullptr) == log.records[i - 1].objective);
  }
  CHECK(rows[1][14] == "objective did not decrease, retry");
  CHECK(log.accepted_steps() == 3);
  CHECK(log.objective_history().size() == 4);
}

TEST_CASE("check suites") {
  const auto results = run_check_suite("determinant", 3);
  REQUIRE(!results.empty());
  for (const auto& r : results) CHECK(r.passed);
  CHECK_THROWS_AS(run_check_suite("nonsense", 0), Error);
}

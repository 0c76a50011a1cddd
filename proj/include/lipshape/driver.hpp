// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "lipshape/descent.hpp"
#include "lipshape/mesh.hpp"
#include "lipshape/mesh_io.hpp"
#include "lipshape/saddle.hpp"

namespace lipshape {

struct OptimConfig {
  BenchmarkGeometry geometry;  // ignored when mesh_file is set, except height
  std::string mesh_file;       // MSH input instead of the built-in mesher
  MarkerTable markers;

  double nu = 0.02;
  int levels = 1;  // uniform refinements on top of the base mesh
  double p_init = 2.0;
  double p_inc = 0.19;
  double p_max = 4.8;
  double eps1 = 1e-5;  // outer stop on |u|_{W1p}
  double eps2 = 1e-8;  // Newton stop
  double eps = 1e-8;   // Hessian regularization
  double sigma_min = 1.0 / 1048576.0;
  double min_angle_guard = 0.0;  // degrees; trials dropping any level below it are rejected, 0 disables
  int max_steps = 20;
  double flow_tol = 1e-10;
  int flow_max_iterations = 25;
  InnerMode inner_solver = InnerMode::Direct;
  double inner_tol = 1e-12;
  std::string output_dir;  // no files are written when empty
  std::uint64_t seed = 0;

  /// Throws a Config error naming the offending key.
  void validate() const;
};

/// Sets one key from its textual value; throws a Config error for unknown keys
/// and malformed values.
void set_config_value(OptimConfig& config, std::string_view key, std::string_view value);

/// key = value lines with # comments. Missing keys keep their defaults.
OptimConfig parse_config_text(std::string_view text);
OptimConfig parse_config(const std::filesystem::path& path);

enum class RunStatus { Converged, MaxSteps, Stalled };
const char* to_string(RunStatus status) noexcept;

/// One trial of the step-size loop.
struct StepRecord {
  int step = 0;   // outer iteration, 1-based
  int trial = 0;  // 1-based within the step
  bool accepted = false;
  double sigma = 1.0;
  double objective = 0.0;  // NaN when the trial failed before the flow solve
  double g_inf = 0.0;      // accepted steps: re-evaluated from the deformed mesh
  QualityReport quality;
  double w1p = 0.0;
  std::vector<StageRecord> stages;
  std::string note;
  double wall_seconds = 0.0;
};

struct RunLog {
  double initial_objective = 0.0;
  QualityReport initial_quality;
  std::vector<StepRecord> records;
  std::vector<Polygon> polygons;  // obstacle after step 0, 1, 2, ... (accepted only)
  RunStatus status = RunStatus::MaxSteps;

  int accepted_steps() const;
  /// Objective after each accepted step, preceded by the initial objective.
  std::vector<double> objective_history() const;
};

/// Information passed to the trial callback after every trial.
struct TrialEvent {
  const StepRecord& record;
  const GridHierarchy& hierarchy;       // state after accept or revert
  const CoordinateSnapshot& before;     // coordinates before the trial
};

struct OptimizeHooks {
  /// May modify the shape gradient before the step-size loop.
  std::function<void(int step, Eigen::VectorXd& gradient)> gradient;
  std::function<void(const TrialEvent&)> on_trial;
};

/// Steepest descent with constraint-preserving p-Laplace directions and
/// sensitivity halving. Sub-solver failures inside a trial reject the trial;
/// failures of the initial flow solve or an adjoint solve propagate after the
/// partial log has been written.
RunLog run_optimize(const OptimConfig& config, const OptimizeHooks& hooks = {});

/// Header plus one row per trial, values at 17 significant digits.
void write_runlog_csv(const RunLog& log, const std::filesystem::path& path);
/// Wall-clock seconds per trial; kept apart from run.csv so that the latter is
/// reproducible bit for bit.
void write_timing_csv(const RunLog& log, const std::filesystem::path& path);
void write_polygon_csv(const Polygon& polygon, const std::filesystem::path& path);

/// Symmetric difference of every stored obstacle polygon with the reference.
std::vector<double> shape_convergence_report(const RunLog& log, const Polygon& reference,
                                             int samples_per_axis = 1000);
void write_distance_csv(const std::vector<double>& distances, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Verification suites shared by the CLI and the C API.

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Suites: "derivatives", "saddle", "determinant", "flow", "all".
/// Throws a Parameter error for unknown names.
std::vector<CheckResult> run_check_suite(std::string_view suite, std::uint64_t seed);

}  // namespace lipshape

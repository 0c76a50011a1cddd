// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "lipshape/driver.hpp"
#include "lipshape/error.hpp"
#include "lipshape/flow.hpp"
#include "lipshape/log.hpp"
#include "lipshape/mesh_io.hpp"

namespace lipshape {
namespace {

using Clock = std::chrono::steady_clock;

GridHierarchy build_hierarchy(const OptimConfig& config) {
  GridHierarchy h = config.mesh_file.empty()
                        ? generate_benchmark_mesh(config.geometry)
                        : GridHierarchy(read_msh(config.mesh_file, config.markers));
  for (int k = 0; k < config.levels; ++k) h.refine_uniform();
  return h;
}

bool trial_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Nonconvergence:
    case ErrorKind::SingularConfiguration:
    case ErrorKind::RankDeficient:
    case ErrorKind::Solver:
    case ErrorKind::Assembly:
    case ErrorKind::Tangling:
    case ErrorKind::Degenerate:
      return true;
    default:
      return false;
  }
}

double hierarchy_min_angle(const GridHierarchy& h) {
  double out = 180.0;
  for (std::size_t k = 0; k < h.num_levels(); ++k) out = std::min(out, quality_report(h.level(k)).min_angle);
  return out;
}

double constraint_drift(const Mesh& mesh, double initial_area) {
  const DomainMoments m = domain_moments(mesh);
  return std::max({std::abs(m.first_moment.x()), std::abs(m.first_moment.y()),
                   std::abs(m.area - initial_area)});
}

NodalField vector_field(std::string name, const Eigen::VectorXd& v) {
  return {std::move(name), 2, std::vector<double>(v.data(), v.data() + v.size())};
}

void write_step_vtk(const std::filesystem::path& dir, int step, const Mesh& mesh,
                    const FlowDiscretization& flow, const FlowState& state,
                    const Eigen::VectorXd& displacement, const Eigen::VectorXd& gradient) {
  std::vector<NodalField> fields;
  fields.push_back(vector_field("velocity", nodal_velocity(flow, state)));
  fields.push_back({"pressure", 1, std::vector<double>(state.q.data(), state.q.data() + state.q.size())});
  fields.push_back(vector_field("displacement", displacement));
  fields.push_back(vector_field("shape_gradient", gradient));
  write_vtk(mesh, fields, dir / ("step_" + std::to_string(step) + ".vtk"));
}

void write_outputs(const OptimConfig& config, const RunLog& log) {
  if (config.output_dir.empty()) return;
  const std::filesystem::path dir(config.output_dir);
  write_runlog_csv(log, dir / "run.csv");
  write_timing_csv(log, dir / "timing.csv");
  const auto history = log.objective_history();
  std::ofstream summary(dir / "summary.csv");
  summary << std::setprecision(17) << "key,value\n"
          << "status," << to_string(log.status) << '\n'
          << "accepted_steps," << log.accepted_steps() << '\n'
          << "trials," << log.records.size() << '\n'
          << "initial_objective," << log.initial_objective << '\n'
          << "final_objective," << history.back() << '\n'
          << "initial_min_angle," << log.initial_quality.min_angle << '\n'
          << "initial_max_radius_ratio," << log.initial_quality.max_radius_ratio << '\n';
  if (!log.polygons.empty()) {
    write_polygon_csv(log.polygons.back(), dir / "final_polygon.csv");
    write_distance_csv(shape_convergence_report(log, log.polygons.back()), dir / "distance.csv");
  }
}

}  // namespace

RunLog run_optimize(const OptimConfig& config, const OptimizeHooks& hooks) {
  config.validate();
  if (!config.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory " + config.output_dir + ": " + ec.message());
  }

  RunLog log;
  try {
    GridHierarchy h = build_hierarchy(config);
    const Mesh& mesh = h.finest();

    FlowSettings fs;
    fs.nu = config.nu;
    fs.inlet_height = config.geometry.height;
    fs.tolerance = config.flow_tol;
    fs.max_iterations = config.flow_max_iterations;
    const FlowDiscretization flow(mesh, fs);

    NewtonOptions newton;
    newton.epsilon = config.eps;
    newton.tolerance = config.eps2;
    newton.inner_mode = config.inner_solver;
    newton.inner_tolerance = config.inner_tol;

    FlowState y0 = solve_flow(flow);
    double phi0 = energy_dissipation(flow, y0);
    const double initial_area = domain_moments(mesh).area;
    log.initial_objective = phi0;
    log.initial_quality = quality_report(mesh);
    log.polygons.push_back(obstacle_polygon(mesh));
    log::info("initial objective " + std::to_string(phi0) + ", " + std::to_string(mesh.num_triangles()) +
              " triangles");
    const std::filesystem::path out(config.output_dir);
    if (!config.output_dir.empty()) {
      const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2 * mesh.num_nodes());
      write_step_vtk(out, 0, mesh, flow, y0, zero, zero);
    }

    log.status = RunStatus::MaxSteps;
    bool done = false;
    for (int step = 1; step <= config.max_steps && !done; ++step) {
      const AdjointState adjoint = solve_adjoint(flow, y0);
      Eigen::VectorXd G = shape_gradient(flow, y0, adjoint);
      if (hooks.gradient) hooks.gradient(step, G);
      const DescentDiscretization descent(mesh);

      double sigma = 1.0;
      for (int trial = 1;; ++trial) {
        const auto start = Clock::now();
        const CoordinateSnapshot before = h.snapshot();
        StepRecord rec;
        rec.step = step;
        rec.trial = trial;
        rec.sigma = sigma;
        rec.objective = std::numeric_limits<double>::quiet_NaN();

        Eigen::VectorXd u;
        FlowState y;
        bool evaluated = false;
        try {
          DescentResult d = p_continuation(descent, sigma, G, config.p_init, config.p_inc, config.p_max, newton);
          rec.stages = d.stages;
          rec.w1p = w1p_norm(descent, d.u, config.p_max);
          u = std::move(d.u);
          h.apply_deformation(u);
          if (config.min_angle_guard > 0.0) {
            const double angle = hierarchy_min_angle(h);
            if (angle < config.min_angle_guard) {
              fail(ErrorKind::Degenerate, "minimum angle " + std::to_string(angle) + " below guard");
            }
          }
          y = solve_flow(flow);
          rec.objective = energy_dissipation(flow, y);
          evaluated = true;
        } catch (const Error& e) {
          if (!trial_failure(e.kind())) throw;
          h.restore(before);
          rec.note = std::string(to_string(e.kind())) + ": " + e.what();
        }

        if (evaluated && rec.objective < phi0) {
          rec.accepted = true;
          phi0 = rec.objective;
          y0 = std::move(y);
          rec.quality = quality_report(mesh);
          rec.g_inf = constraint_drift(mesh, initial_area);
          log.polygons.push_back(obstacle_polygon(mesh));
        } else {
          if (evaluated) {
            h.restore(before);
            rec.note = "objective did not decrease";
          }
          sigma *= 0.5;
        }
        rec.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
        log.records.push_back(rec);
        log::info("step " + std::to_string(step) + " trial " + std::to_string(trial) +
                  (rec.accepted ? " accepted" : " rejected") + ", sigma " + std::to_string(rec.sigma) +
                  ", objective " + std::to_string(rec.objective) +
                  (rec.note.empty() ? std::string() : " (" + rec.note + ")"));
        if (hooks.on_trial) hooks.on_trial(TrialEvent{log.records.back(), h, before});

        if (rec.accepted) {
          if (!config.output_dir.empty()) write_step_vtk(out, step, mesh, flow, y0, u, G);
          if (rec.w1p < config.eps1) {
            log.status = RunStatus::Converged;
            done = true;
          }
          break;
        }
        if (sigma < config.sigma_min) {
          log.status = RunStatus::Stalled;
          done = true;
          break;
        }
      }
    }
  } catch (...) {
    write_outputs(config, log);
    throw;
  }
  write_outputs(config, log);
  return log;
}

}  // namespace lipshape

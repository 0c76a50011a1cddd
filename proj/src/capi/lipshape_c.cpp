// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include "lipshape/lipshape.h"

#include <exception>
#include <new>
#include <string>

#include "lipshape/driver.hpp"
#include "lipshape/error.hpp"
#include "lipshape/log.hpp"
#include "lipshape/mesh_io.hpp"

struct lipshape_config {
  lipshape::OptimConfig value;
};

struct lipshape_run {
  lipshape::RunLog log;
};

struct lipshape_mesh {
  lipshape::Mesh mesh;
};

namespace {

thread_local std::string g_last_error;

lipshape_status status_of(lipshape::ErrorKind kind) {
  using lipshape::ErrorKind;
  switch (kind) {
    case ErrorKind::Parameter: return LIPSHAPE_ERR_PARAMETER;
    case ErrorKind::Parse: return LIPSHAPE_ERR_PARSE;
    case ErrorKind::Contract: return LIPSHAPE_ERR_CONTRACT;
    case ErrorKind::Tangling: return LIPSHAPE_ERR_TANGLING;
    case ErrorKind::Topology: return LIPSHAPE_ERR_TOPOLOGY;
    case ErrorKind::Degenerate: return LIPSHAPE_ERR_DEGENERATE;
    case ErrorKind::Assembly: return LIPSHAPE_ERR_ASSEMBLY;
    case ErrorKind::Nonconvergence: return LIPSHAPE_ERR_NONCONVERGENCE;
    case ErrorKind::Solver: return LIPSHAPE_ERR_SOLVER;
    case ErrorKind::RankDeficient: return LIPSHAPE_ERR_RANK_DEFICIENT;
    case ErrorKind::SingularConfiguration: return LIPSHAPE_ERR_SINGULAR_CONFIGURATION;
    case ErrorKind::Config: return LIPSHAPE_ERR_CONFIG;
    case ErrorKind::Io: return LIPSHAPE_ERR_IO;
  }
  return LIPSHAPE_ERR_INTERNAL;
}

lipshape_status set_error(lipshape_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class F>
lipshape_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return LIPSHAPE_OK;
  } catch (const lipshape::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LIPSHAPE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(LIPSHAPE_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(LIPSHAPE_ERR_INTERNAL, "unknown exception");
  }
}

#define LIPSHAPE_REQUIRE_ARG(arg) \
  if ((arg) == nullptr) return set_error(LIPSHAPE_ERR_NULL_ARGUMENT, #arg " is null")

}  // namespace

extern "C" {

const char* lipshape_version(void) { return "0.1.0"; }

const char* lipshape_status_string(lipshape_status status) {
  switch (status) {
    case LIPSHAPE_OK: return "ok";
    case LIPSHAPE_ERR_PARAMETER: return "parameter error";
    case LIPSHAPE_ERR_PARSE: return "parse error";
    case LIPSHAPE_ERR_CONTRACT: return "contract error";
    case LIPSHAPE_ERR_TANGLING: return "tangling error";
    case LIPSHAPE_ERR_TOPOLOGY: return "topology error";
    case LIPSHAPE_ERR_DEGENERATE: return "degenerate element";
    case LIPSHAPE_ERR_ASSEMBLY: return "assembly error";
    case LIPSHAPE_ERR_NONCONVERGENCE: return "nonconvergence";
    case LIPSHAPE_ERR_SOLVER: return "solver error";
    case LIPSHAPE_ERR_RANK_DEFICIENT: return "rank deficiency";
    case LIPSHAPE_ERR_SINGULAR_CONFIGURATION: return "singular configuration";
    case LIPSHAPE_ERR_CONFIG: return "config error";
    case LIPSHAPE_ERR_IO: return "i/o error";
    case LIPSHAPE_ERR_NULL_ARGUMENT: return "null argument";
    case LIPSHAPE_ERR_OUT_OF_RANGE: return "index out of range";
    case LIPSHAPE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* lipshape_last_error(void) { return g_last_error.c_str(); }

void lipshape_set_log_callback(lipshape_log_callback callback, void* user) {
  if (callback == nullptr) {
    lipshape::log::set_sink({});
    return;
  }
  lipshape::log::set_sink([callback, user](lipshape::log::Level level, std::string_view message) {
    const std::string text(message);
    callback(static_cast<lipshape_log_level>(level), text.c_str(), user);
  });
}

void lipshape_set_log_level(lipshape_log_level level) {
  lipshape::log::set_min_level(static_cast<lipshape::log::Level>(level));
}

lipshape_status lipshape_config_create(lipshape_config** out) {
  LIPSHAPE_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new lipshape_config{}; });
}

lipshape_status lipshape_config_load(const char* path, lipshape_config** out) {
  LIPSHAPE_REQUIRE_ARG(path);
  LIPSHAPE_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new lipshape_config{lipshape::parse_config(path)}; });
}

lipshape_status lipshape_config_set(lipshape_config* config, const char* key, const char* value) {
  LIPSHAPE_REQUIRE_ARG(config);
  LIPSHAPE_REQUIRE_ARG(key);
  LIPSHAPE_REQUIRE_ARG(value);
  return guarded([&] { lipshape::set_config_value(config->value, key, value); });
}

void lipshape_config_destroy(lipshape_config* config) { delete config; }

lipshape_status lipshape_optimize(const lipshape_config* config, lipshape_run** out) {
  LIPSHAPE_REQUIRE_ARG(config);
  LIPSHAPE_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new lipshape_run{lipshape::run_optimize(config->value)}; });
}

lipshape_run_status lipshape_run_get_status(const lipshape_run* run) {
  if (run == nullptr) return LIPSHAPE_RUN_MAX_STEPS;
  switch (run->log.status) {
    case lipshape::RunStatus::Converged: return LIPSHAPE_RUN_CONVERGED;
    case lipshape::RunStatus::MaxSteps: return LIPSHAPE_RUN_MAX_STEPS;
    case lipshape::RunStatus::Stalled: return LIPSHAPE_RUN_STALLED;
  }
  return LIPSHAPE_RUN_MAX_STEPS;
}

double lipshape_run_initial_objective(const lipshape_run* run) {
  return run == nullptr ? 0.0 : run->log.initial_objective;
}

int lipshape_run_accepted_steps(const lipshape_run* run) {
  return run == nullptr ? 0 : run->log.accepted_steps();
}

size_t lipshape_run_record_count(const lipshape_run* run) {
  return run == nullptr ? 0 : run->log.records.size();
}

lipshape_status lipshape_run_record(const lipshape_run* run, size_t index, lipshape_step_record* out) {
  LIPSHAPE_REQUIRE_ARG(run);
  LIPSHAPE_REQUIRE_ARG(out);
  if (index >= run->log.records.size()) {
    return set_error(LIPSHAPE_ERR_OUT_OF_RANGE, "record index " + std::to_string(index) + " out of range");
  }
  const lipshape::StepRecord& r = run->log.records[index];
  out->step = r.step;
  out->trial = r.trial;
  out->accepted = r.accepted ? 1 : 0;
  out->sigma = r.sigma;
  out->objective = r.objective;
  out->g_inf = r.g_inf;
  out->min_angle = r.quality.min_angle;
  out->max_angle = r.quality.max_angle;
  out->max_radius_ratio = r.quality.max_radius_ratio;
  out->w1p = r.w1p;
  out->stages = static_cast<int>(r.stages.size());
  out->newton_iterations = 0;
  for (const auto& s : r.stages) out->newton_iterations += s.newton_iterations;
  g_last_error.clear();
  return LIPSHAPE_OK;
}

lipshape_status lipshape_run_write_csv(const lipshape_run* run, const char* path) {
  LIPSHAPE_REQUIRE_ARG(run);
  LIPSHAPE_REQUIRE_ARG(path);
  return guarded([&] { lipshape::write_runlog_csv(run->log, path); });
}

void lipshape_run_destroy(lipshape_run* run) { delete run; }

lipshape_status lipshape_check(const char* suite, uint64_t seed, lipshape_check_callback callback,
                               void* user, int* all_passed) {
  LIPSHAPE_REQUIRE_ARG(suite);
  return guarded([&] {
    const auto results = lipshape::run_check_suite(suite, seed);
    bool ok = true;
    for (const auto& r : results) {
      ok = ok && r.passed;
      if (callback != nullptr) callback(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user);
    }
    if (all_passed != nullptr) *all_passed = ok ? 1 : 0;
  });
}

lipshape_status lipshape_mesh_generate_benchmark(double length, double height, double obstacle_edge,
                                                 int base_resolution, lipshape_mesh** out) {
  LIPSHAPE_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    lipshape::BenchmarkGeometry g;
    g.length = length;
    g.height = height;
    g.obstacle_edge = obstacle_edge;
    g.base_resolution = base_resolution;
    *out = new lipshape_mesh{lipshape::generate_benchmark_mesh(g).finest()};
  });
}

lipshape_status lipshape_mesh_read_msh(const char* path, lipshape_mesh** out) {
  LIPSHAPE_REQUIRE_ARG(path);
  LIPSHAPE_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new lipshape_mesh{lipshape::read_msh(path)}; });
}

int lipshape_mesh_node_count(const lipshape_mesh* mesh) { return mesh == nullptr ? 0 : mesh->mesh.num_nodes(); }

int lipshape_mesh_triangle_count(const lipshape_mesh* mesh) {
  return mesh == nullptr ? 0 : mesh->mesh.num_triangles();
}

lipshape_status lipshape_mesh_quality(const lipshape_mesh* mesh, double* min_angle, double* max_angle,
                                      double* max_radius_ratio) {
  LIPSHAPE_REQUIRE_ARG(mesh);
  return guarded([&] {
    const lipshape::QualityReport q = lipshape::quality_report(mesh->mesh);
    if (min_angle != nullptr) *min_angle = q.min_angle;
    if (max_angle != nullptr) *max_angle = q.max_angle;
    if (max_radius_ratio != nullptr) *max_radius_ratio = q.max_radius_ratio;
  });
}

lipshape_status lipshape_mesh_write_vtk(const lipshape_mesh* mesh, const char* path) {
  LIPSHAPE_REQUIRE_ARG(mesh);
  LIPSHAPE_REQUIRE_ARG(path);
  return guarded([&] { lipshape::write_vtk(mesh->mesh, {}, path); });
}

void lipshape_mesh_destroy(lipshape_mesh* mesh) { delete mesh; }

}  // extern "C"

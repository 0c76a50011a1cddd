/* Copyright 2026 The lipshape Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the lipshape library. All objects are opaque handles that
 * the caller releases with the matching destroy function. Functions that can
 * fail return a status code; the message of the most recent failure on the
 * calling thread is available through lipshape_last_error().
 */
#ifndef LIPSHAPE_LIPSHAPE_H
#define LIPSHAPE_LIPSHAPE_H

#include <stddef.h>
#include <stdint.h>

#if defined(LIPSHAPE_BUILDING_LIBRARY)
#define LIPSHAPE_API __attribute__((visibility("default")))
#else
#define LIPSHAPE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lipshape_status {
  LIPSHAPE_OK = 0,
  LIPSHAPE_ERR_PARAMETER,
  LIPSHAPE_ERR_PARSE,
  LIPSHAPE_ERR_CONTRACT,
  LIPSHAPE_ERR_TANGLING,
  LIPSHAPE_ERR_TOPOLOGY,
  LIPSHAPE_ERR_DEGENERATE,
  LIPSHAPE_ERR_ASSEMBLY,
  LIPSHAPE_ERR_NONCONVERGENCE,
  LIPSHAPE_ERR_SOLVER,
  LIPSHAPE_ERR_RANK_DEFICIENT,
  LIPSHAPE_ERR_SINGULAR_CONFIGURATION,
  LIPSHAPE_ERR_CONFIG,
  LIPSHAPE_ERR_IO,
  LIPSHAPE_ERR_NULL_ARGUMENT,
  LIPSHAPE_ERR_OUT_OF_RANGE,
  LIPSHAPE_ERR_INTERNAL
} lipshape_status;

typedef enum lipshape_run_status {
  LIPSHAPE_RUN_CONVERGED = 0,
  LIPSHAPE_RUN_MAX_STEPS = 1,
  LIPSHAPE_RUN_STALLED = 2
} lipshape_run_status;

typedef enum lipshape_log_level {
  LIPSHAPE_LOG_DEBUG = 0,
  LIPSHAPE_LOG_INFO = 1,
  LIPSHAPE_LOG_WARNING = 2,
  LIPSHAPE_LOG_ERROR = 3
} lipshape_log_level;

typedef struct lipshape_config lipshape_config;
typedef struct lipshape_run lipshape_run;
typedef struct lipshape_mesh lipshape_mesh;

LIPSHAPE_API const char* lipshape_version(void);
LIPSHAPE_API const char* lipshape_status_string(lipshape_status status);
/* Message of the last failed call on this thread, "" if none. */
LIPSHAPE_API const char* lipshape_last_error(void);

/* Messages are delivered synchronously; pass NULL to restore stderr output. */
typedef void (*lipshape_log_callback)(lipshape_log_level level, const char* message, void* user);
LIPSHAPE_API void lipshape_set_log_callback(lipshape_log_callback callback, void* user);
LIPSHAPE_API void lipshape_set_log_level(lipshape_log_level level);

/* ---- configuration ---------------------------------------------------- */

LIPSHAPE_API lipshape_status lipshape_config_create(lipshape_config** out);
LIPSHAPE_API lipshape_status lipshape_config_load(const char* path, lipshape_config** out);
/* Same keys and value syntax as the configuration file. */
LIPSHAPE_API lipshape_status lipshape_config_set(lipshape_config* config, const char* key,
                                                 const char* value);
LIPSHAPE_API void lipshape_config_destroy(lipshape_config* config);

/* ---- optimization ----------------------------------------------------- */

typedef struct lipshape_step_record {
  int step;
  int trial;
  int accepted;
  double sigma;
  double objective; /* NaN when the trial failed before the flow solve */
  double g_inf;
  double min_angle;
  double max_angle;
  double max_radius_ratio;
  double w1p;
  int stages;
  long newton_iterations; /* summed over stages */
} lipshape_step_record;

/* Runs the optimization; on success *out holds the run log. */
LIPSHAPE_API lipshape_status lipshape_optimize(const lipshape_config* config, lipshape_run** out);
LIPSHAPE_API lipshape_run_status lipshape_run_get_status(const lipshape_run* run);
LIPSHAPE_API double lipshape_run_initial_objective(const lipshape_run* run);
LIPSHAPE_API int lipshape_run_accepted_steps(const lipshape_run* run);
LIPSHAPE_API size_t lipshape_run_record_count(const lipshape_run* run);
LIPSHAPE_API lipshape_status lipshape_run_record(const lipshape_run* run, size_t index,
                                                 lipshape_step_record* out);
LIPSHAPE_API lipshape_status lipshape_run_write_csv(const lipshape_run* run, const char* path);
LIPSHAPE_API void lipshape_run_destroy(lipshape_run* run);

/* ---- verification suites ---------------------------------------------- */

typedef void (*lipshape_check_callback)(const char* name, int passed, const char* detail, void* user);

/* suite: "derivatives", "saddle", "determinant", "flow" or "all". The
 * callback receives one call per check; *all_passed is 1 if every check
 * passed. */
LIPSHAPE_API lipshape_status lipshape_check(const char* suite, uint64_t seed,
                                            lipshape_check_callback callback, void* user,
                                            int* all_passed);

/* ---- meshes ----------------------------------------------------------- */

LIPSHAPE_API lipshape_status lipshape_mesh_generate_benchmark(double length, double height,
                                                              double obstacle_edge, int base_resolution,
                                                              lipshape_mesh** out);
LIPSHAPE_API lipshape_status lipshape_mesh_read_msh(const char* path, lipshape_mesh** out);
LIPSHAPE_API int lipshape_mesh_node_count(const lipshape_mesh* mesh);
LIPSHAPE_API int lipshape_mesh_triangle_count(const lipshape_mesh* mesh);
LIPSHAPE_API lipshape_status lipshape_mesh_quality(const lipshape_mesh* mesh, double* min_angle,
                                                   double* max_angle, double* max_radius_ratio);
LIPSHAPE_API lipshape_status lipshape_mesh_write_vtk(const lipshape_mesh* mesh, const char* path);
LIPSHAPE_API void lipshape_mesh_destroy(lipshape_mesh* mesh);

#ifdef __cplusplus
}
#endif

#endif /* LIPSHAPE_LIPSHAPE_H */

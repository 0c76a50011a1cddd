// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lipshape/lipshape.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("lipshape_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kSmallConfig =
    "length = 4\nheight = 2\nobstacle_edge = 0.5\n"
    "nu = 0.05\nlevels = 0\nmax_steps = 1\n";

int run_cli(const std::string& args) {
  const char* cli = std::getenv("LIPSHAPE_CLI");
  REQUIRE(cli != nullptr);
  const int rc = std::system((std::string(cli) + " " + args + " > /dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("status strings and null arguments") {
  CHECK(std::string(lipshape_status_string(LIPSHAPE_OK)) == "ok");
  CHECK(std::string(lipshape_status_string(LIPSHAPE_ERR_CONFIG)) == "config error");
  CHECK(std::string(lipshape_version()).size() > 0);
  CHECK(lipshape_config_create(nullptr) == LIPSHAPE_ERR_NULL_ARGUMENT);
  CHECK(std::string(lipshape_last_error()).find("null") != std::string::npos);
  lipshape_config_destroy(nullptr);
  lipshape_run_destroy(nullptr);
  lipshape_mesh_destroy(nullptr);
}

TEST_CASE("configuration handles") {
  lipshape_config* config = nullptr;
  REQUIRE(lipshape_config_create(&config) == LIPSHAPE_OK);
  CHECK(lipshape_config_set(config, "p_max", "4.1") == LIPSHAPE_OK);
  CHECK(lipshape_config_set(config, "warp_factor", "9") == LIPSHAPE_ERR_CONFIG);
  CHECK(std::string(lipshape_last_error()).find("warp_factor") != std::string::npos);
  CHECK(lipshape_config_set(config, "levels", "x") == LIPSHAPE_ERR_CONFIG);
  lipshape_config_destroy(config);

  lipshape_config* missing = nullptr;
  CHECK(lipshape_config_load("/nonexistent/run.cfg", &missing) == LIPSHAPE_ERR_CONFIG);
  CHECK(missing == nullptr);

  const auto dir = scratch("config");
  std::ofstream(dir / "bad.cfg") << "p_max = 1.0\n";
  CHECK(lipshape_config_load((dir / "bad.cfg").c_str(), &missing) == LIPSHAPE_ERR_CONFIG);
  CHECK(std::string(lipshape_last_error()).find("p_max") != std::string::npos);
}

TEST_CASE("mesh handles") {
  lipshape_mesh* mesh = nullptr;
  REQUIRE(lipshape_mesh_generate_benchmark(20, 6, 0.4, 4, &mesh) == LIPSHAPE_OK);
  CHECK(lipshape_mesh_triangle_count(mesh) == 616);
  CHECK(lipshape_mesh_node_count(mesh) == 336);
  double min_angle = 0, max_angle = 0, rho = 0;
  CHECK(lipshape_mesh_quality(mesh, &min_angle, &max_angle, &rho) == LIPSHAPE_OK);
  CHECK(min_angle > 0.0);
  CHECK(min_angle <= 60.0);
  CHECK(max_angle >= 60.0);
  CHECK(rho >= 2.0);
  const auto dir = scratch("mesh");
  CHECK(lipshape_mesh_write_vtk(mesh, (dir / "m.vtk").c_str()) == LIPSHAPE_OK);
  CHECK(fs::exists(dir / "m.vtk"));
  lipshape_mesh_destroy(mesh);

  lipshape_mesh* bad = nullptr;
  CHECK(lipshape_mesh_generate_benchmark(20, 6, 7, 4, &bad) == LIPSHAPE_ERR_PARAMETER);
  CHECK(bad == nullptr);
  CHECK(lipshape_mesh_read_msh("/nonexistent.msh", &bad) == LIPSHAPE_ERR_IO);
}

TEST_CASE("check suite through the callback") {
  std::vector<std::string> names;
  int all = 0;
  auto cb = [](const char* name, int, const char*, void* user) {
    static_cast<std::vector<std::string>*>(user)->push_back(name);
  };
  CHECK(lipshape_check("determinant", 1, cb, &names, &all) == LIPSHAPE_OK);
  CHECK(all == 1);
  CHECK(names.size() == 1);
  CHECK(lipshape_check("nope", 1, cb, &names, &all) == LIPSHAPE_ERR_PARAMETER);
}

TEST_CASE("optimize through the C interface") {
  const auto dir = scratch("optimize");
  std::ofstream(dir / "small.cfg") << kSmallConfig;
  lipshape_config* config = nullptr;
  REQUIRE(lipshape_config_load((dir / "small.cfg").c_str(), &config) == LIPSHAPE_OK);

  std::vector<std::string> messages;
  lipshape_set_log_callback(
      [](lipshape_log_level, const char* message, void* user) {
        static_cast<std::vector<std::string>*>(user)->push_back(message);
      },
      &messages);
  lipshape_run* run = nullptr;
  const lipshape_status status = lipshape_optimize(config, &run);
  lipshape_set_log_callback(nullptr, nullptr);
  REQUIRE(status == LIPSHAPE_OK);
  CHECK_FALSE(messages.empty());

  CHECK(lipshape_run_initial_objective(run) > 0.0);
  const size_t n = lipshape_run_record_count(run);
  REQUIRE(n >= 1);
  lipshape_step_record r;
  CHECK(lipshape_run_record(run, n - 1, &r) == LIPSHAPE_OK);
  CHECK(r.step == 1);
  if (r.accepted) {
    CHECK(r.objective < lipshape_run_initial_objective(run));
    CHECK(r.stages == 16);
    CHECK(r.newton_iterations > 0);
  }
  CHECK(lipshape_run_record(run, n, &r) == LIPSHAPE_ERR_OUT_OF_RANGE);
  CHECK(lipshape_run_write_csv(run, (dir / "run.csv").c_str()) == LIPSHAPE_OK);
  CHECK(fs::exists(dir / "run.csv"));
  lipshape_run_destroy(run);
  lipshape_config_destroy(config);

  lipshape_config* bad = nullptr;
  REQUIRE(lipshape_config_create(&bad) == LIPSHAPE_OK);
  CHECK(lipshape_config_set(bad, "mesh_file", "/nonexistent.msh") == LIPSHAPE_OK);
  CHECK(lipshape_optimize(bad, &run) == LIPSHAPE_ERR_IO);
  CHECK(run == nullptr);
  lipshape_config_destroy(bad);
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch("cli");
  std::ofstream(dir / "small.cfg") << kSmallConfig;
  std::ofstream(dir / "broken.cfg") << "unknown_key = 1\n";
  CHECK(run_cli("check --suite determinant") == 0);
  CHECK(run_cli("optimize --config " + (dir / "small.cfg").string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "run.csv"));
  CHECK(fs::exists(dir / "out" / "final_polygon.csv"));
  CHECK(run_cli("optimize --config " + (dir / "broken.cfg").string()) == 1);
  CHECK(run_cli("optimize --config " + (dir / "small.cfg").string() + " --levels 9 --out " +
                (dir / "x").string()) == 1);
  CHECK(run_cli("frobnicate") != 0);
}

// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "lipshape/lipshape.h"

namespace {

int report(lipshape_status status, const char* what) {
  std::fprintf(stderr, "%s: %s: %s\n", what, lipshape_status_string(status), lipshape_last_error());
  return 1;
}

struct ConfigHandle {
  lipshape_config* ptr = nullptr;
  ~ConfigHandle() { lipshape_config_destroy(ptr); }
};

struct RunHandle {
  lipshape_run* ptr = nullptr;
  ~RunHandle() { lipshape_run_destroy(ptr); }
};

int optimize(const std::string& config_path, const std::string& out, int levels, int max_steps,
             long long seed) {
  ConfigHandle config;
  if (auto s = lipshape_config_load(config_path.c_str(), &config.ptr); s != LIPSHAPE_OK) {
    return report(s, "config");
  }
  auto set = [&](const char* key, const std::string& value) {
    return lipshape_config_set(config.ptr, key, value.c_str());
  };
  const std::string output_dir = out.empty() ? "." : out;
  if (auto s = set("output_dir", output_dir); s != LIPSHAPE_OK) return report(s, "--out");
  if (levels >= 0) {
    if (auto s = set("levels", std::to_string(levels)); s != LIPSHAPE_OK) return report(s, "--levels");
  }
  if (max_steps >= 0) {
    if (auto s = set("max_steps", std::to_string(max_steps)); s != LIPSHAPE_OK) return report(s, "--max-steps");
  }
  if (seed >= 0) {
    if (auto s = set("seed", std::to_string(seed)); s != LIPSHAPE_OK) return report(s, "--seed");
  }

  RunHandle run;
  if (auto s = lipshape_optimize(config.ptr, &run.ptr); s != LIPSHAPE_OK) return report(s, "optimize");

  const lipshape_run_status status = lipshape_run_get_status(run.ptr);
  const char* label = status == LIPSHAPE_RUN_CONVERGED ? "converged"
                      : status == LIPSHAPE_RUN_STALLED ? "stalled"
                                                       : "max steps reached";
  double final_objective = lipshape_run_initial_objective(run.ptr);
  for (size_t i = 0; i < lipshape_run_record_count(run.ptr); ++i) {
    lipshape_step_record r;
    if (lipshape_run_record(run.ptr, i, &r) == LIPSHAPE_OK && r.accepted) final_objective = r.objective;
  }
  std::printf("%s after %d accepted steps; objective %.10g -> %.10g\n", label,
              lipshape_run_accepted_steps(run.ptr), lipshape_run_initial_objective(run.ptr),
              final_objective);
  return status == LIPSHAPE_RUN_STALLED ? 2 : 0;
}

void print_check(const char* name, int passed, const char* detail, void*) {
  std::printf("[%s] %s: %s\n", passed ? "PASS" : "FAIL", name, detail);
  std::fflush(stdout);
}

int check(const std::string& suite, long long seed) {
  int all_passed = 0;
  const auto s = lipshape_check(suite.c_str(), static_cast<uint64_t>(seed < 0 ? 0 : seed), print_check,
                                nullptr, &all_passed);
  if (s != LIPSHAPE_OK) return report(s, "check");
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz-type shape optimization for 2D channel flow"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Print debug messages");

  std::string config_path;
  std::string out;
  int levels = -1;
  int max_steps = -1;
  long long seed = -1;
  auto* opt = app.add_subcommand("optimize", "Run the steepest descent optimization");
  opt->add_option("--config", config_path, "key = value configuration file")->required()->check(CLI::ExistingFile);
  opt->add_option("--out", out, "Output directory (default: current directory)");
  opt->add_option("--levels", levels, "Uniform refinements of the base mesh")->check(CLI::NonNegativeNumber);
  opt->add_option("--max-steps", max_steps, "Maximum number of optimization steps")->check(CLI::NonNegativeNumber);
  opt->add_option("--seed", seed, "Seed recorded with the run")->check(CLI::NonNegativeNumber);

  std::string suite = "all";
  long long check_seed = 1;
  auto* chk = app.add_subcommand("check", "Run a verification suite");
  chk->add_option("--suite", suite, "derivatives, saddle, determinant, flow or all")
      ->check(CLI::IsMember({"derivatives", "saddle", "determinant", "flow", "all"}));
  chk->add_option("--seed", check_seed, "Seed of the random samples")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);
  if (verbose) lipshape_set_log_level(LIPSHAPE_LOG_DEBUG);

  if (*opt) return optimize(config_path, out, levels, max_steps, seed);
  return check(suite, check_seed);
}

// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <string>

#include "lipshape/driver.hpp"
#include "lipshape/error.hpp"

namespace lipshape {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out + "\"";
}

/// Writes through a temporary file so a failed write leaves no partial output.
void write_file(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path partial = path.string() + ".partial";
  {
    std::ofstream out(partial, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot open " + partial.string() + " for writing");
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::Io, "failed writing " + partial.string());
  }
  std::error_code ec;
  std::filesystem::rename(partial, path, ec);
  if (ec) fail(ErrorKind::Io, "cannot rename " + partial.string() + ": " + ec.message());
}

}  // namespace

const char* to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxSteps: return "max_steps";
    case RunStatus::Stalled: return "stalled";
  }
  return "unknown";
}

int RunLog::accepted_steps() const {
  int n = 0;
  for (const auto& r : records) n += r.accepted ? 1 : 0;
  return n;
}

std::vector<double> RunLog::objective_history() const {
  std::vector<double> h{initial_objective};
  for (const auto& r : records) {
    if (r.accepted) h.push_back(r.objective);
  }
  return h;
}

void write_runlog_csv(const RunLog& log, const std::filesystem::path& path) {
  std::string s =
      "step,trial,accepted,sigma,objective,g_inf,min_angle,max_angle,max_radius_ratio,w1p,"
      "newton_iterations,inner_solves,linear_iterations,stage_iterations,note\n";
  for (const auto& r : log.records) {
    int newton = 0;
    long inner = 0;
    long linear = 0;
    std::string per_stage;
    for (const auto& st : r.stages) {
      newton += st.newton_iterations;
      inner += st.inner_solves;
      linear += st.linear_iterations;
      if (!per_stage.empty()) per_stage += ';';
      per_stage += std::to_string(st.newton_iterations);
    }
    s += std::to_string(r.step) + ',' + std::to_string(r.trial) + ',' + (r.accepted ? "1" : "0") + ',' +
         num(r.sigma) + ',' + num(r.objective) + ',' + num(r.g_inf) + ',' + num(r.quality.min_angle) + ',' +
         num(r.quality.max_angle) + ',' + num(r.quality.max_radius_ratio) + ',' + num(r.w1p) + ',' +
         std::to_string(newton) + ',' + std::to_string(inner) + ',' + std::to_string(linear) + ',' +
         per_stage + ',' + quoted(r.note) + '\n';
  }
  write_file(path, s);
}

void write_timing_csv(const RunLog& log, const std::filesystem::path& path) {
  std::string s = "step,trial,wall_seconds\n";
  for (const auto& r : log.records) {
    s += std::to_string(r.step) + ',' + std::to_string(r.trial) + ',' + num(r.wall_seconds) + '\n';
  }
  write_file(path, s);
}

void write_polygon_csv(const Polygon& polygon, const std::filesystem::path& path) {
  std::string s = "x,y\n";
  for (const auto& p : polygon.vertices) s += num(p.x()) + ',' + num(p.y()) + '\n';
  write_file(path, s);
}

std::vector<double> shape_convergence_report(const RunLog& log, const Polygon& reference,
                                             int samples_per_axis) {
  std::vector<double> d;
  d.reserve(log.polygons.size());
  for (const auto& p : log.polygons) d.push_back(symmetric_difference_area(p, reference, samples_per_axis));
  return d;
}

void write_distance_csv(const std::vector<double>& distances, const std::filesystem::path& path) {
  std::string s = "step,distance\n";
  for (std::size_t k = 0; k < distances.size(); ++k) s += std::to_string(k) + ',' + num(distances[k]) + '\n';
  write_file(path, s);
}

}  // namespace lipshape

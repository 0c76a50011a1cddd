// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include "lipshape/log.hpp"

#include <iostream>
#include <mutex>

#include "lipshape/error.hpp"

namespace lipshape {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Contract: return "contract error";
    case ErrorKind::Tangling: return "tangling error";
    case ErrorKind::Topology: return "topology error";
    case ErrorKind::Degenerate: return "degenerate element";
    case ErrorKind::Assembly: return "assembly error";
    case ErrorKind::Nonconvergence: return "nonconvergence";
    case ErrorKind::Solver: return "solver error";
    case ErrorKind::RankDeficient: return "rank deficiency";
    case ErrorKind::SingularConfiguration: return "singular configuration";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown error";
}

namespace log {
namespace {

std::mutex g_mutex;
Sink g_sink;
Level g_min_level = Level::Info;

const char* prefix(Level level) {
  switch (level) {
    case Level::Debug: return "debug: ";
    case Level::Info: return "";
    case Level::Warning: return "warning: ";
    case Level::Error: return "error: ";
  }
  return "";
}

}  // namespace

void set_sink(Sink sink) {
  std::lock_guard lock(g_mutex);
  g_sink = std::move(sink);
}

void set_min_level(Level level) {
  std::lock_guard lock(g_mutex);
  g_min_level = level;
}

void write(Level level, std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (level < g_min_level) return;
  if (g_sink) {
    g_sink(level, message);
    return;
  }
  std::clog << prefix(level) << message << '\n';
}

}  // namespace log
}  // namespace lipshape

// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lipshape {

enum class ErrorKind {
  Parameter,
  Parse,
  Contract,
  Tangling,
  Topology,
  Degenerate,
  Assembly,
  Nonconvergence,
  Solver,
  RankDeficient,
  SingularConfiguration,
  Config,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception of the library. Every failure carries a kind so the C API
/// can translate it into a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure with the offending 1-based line number (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(ErrorKind::Parse,
              line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Newton-type nonconvergence; keeps the last residual for diagnostics.
class NonconvergenceError : public Error {
 public:
  NonconvergenceError(const std::string& what, double last_residual)
      : Error(ErrorKind::Nonconvergence, what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace lipshape

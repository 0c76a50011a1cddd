// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "lipshape/error.hpp"
#include "lipshape/saddle.hpp"

namespace lipshape {

Givens givens(double a, double b) {
  require(a != 0.0 || b != 0.0, ErrorKind::Contract, "givens rotation of a zero vector");
  const double r = std::hypot(a, b);
  return {a / r, b / r, r};
}

}  // namespace lipshape

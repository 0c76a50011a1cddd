// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include "lipshape/descent.hpp"
#include "lipshape/error.hpp"

namespace lipshape {

std::vector<double> det_expansion_coeffs(const Eigen::MatrixXd& v) {
  require(v.rows() == v.cols() && (v.rows() == 2 || v.rows() == 3), ErrorKind::Parameter,
          "determinant expansion supports d = 2 and d = 3 only");
  if (v.rows() == 2) {
    return {1.0, v(0, 0) + v(1, 1), v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0)};
  }
  const double v11 = v(0, 0), v12 = v(0, 1), v13 = v(0, 2);
  const double v21 = v(1, 0), v22 = v(1, 1), v23 = v(1, 2);
  const double v31 = v(2, 0), v32 = v(2, 1), v33 = v(2, 2);
  return {1.0,
          v11 + v22 + v33,
          v11 * v22 + v11 * v33 - v12 * v21 - v13 * v31 + v22 * v33 - v23 * v32,
          v11 * v22 * v33 - v11 * v23 * v32 - v12 * v21 * v33 + v12 * v23 * v31 +
              v13 * v21 * v32 - v13 * v22 * v31};
}

}  // namespace lipshape

// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/LU>

#include "lipshape/error.hpp"
#include "lipshape/fem.hpp"

namespace lipshape {

ElementGeometry element_geometry(const std::array<Point, 3>& corners) {
  ElementGeometry g;
  g.jacobian.col(0) = corners[1] - corners[0];
  g.jacobian.col(1) = corners[2] - corners[0];
  g.det = g.jacobian.determinant();
  if (!(g.det > 0.0)) fail(ErrorKind::Degenerate, "element has non-positive Jacobian determinant");
  const Eigen::Matrix2d& J = g.jacobian;
  g.inverse_transpose << J(1, 1), -J(1, 0), -J(0, 1), J(0, 0);
  g.inverse_transpose /= g.det;
  return g;
}

std::array<double, 3> p1_values(const Point& xi) {
  return {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
}

const std::array<Eigen::Vector2d, 3>& p1_reference_gradients() {
  static const std::array<Eigen::Vector2d, 3> grads{Eigen::Vector2d(-1.0, -1.0),
                                                    Eigen::Vector2d(1.0, 0.0),
                                                    Eigen::Vector2d(0.0, 1.0)};
  return grads;
}

std::array<double, 6> p2_values(const Point& xi) {
  const auto l = p1_values(xi);
  return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[0] * l[1],         4.0 * l[1] * l[2],         4.0 * l[2] * l[0]};
}

std::array<Eigen::Vector2d, 6> p2_reference_gradients(const Point& xi) {
  const auto l = p1_values(xi);
  const auto& g = p1_reference_gradients();
  return {(4.0 * l[0] - 1.0) * g[0],
          (4.0 * l[1] - 1.0) * g[1],
          (4.0 * l[2] - 1.0) * g[2],
          4.0 * (l[0] * g[1] + l[1] * g[0]),
          4.0 * (l[1] * g[2] + l[2] * g[1]),
          4.0 * (l[2] * g[0] + l[0] * g[2])};
}

}  // namespace lipshape

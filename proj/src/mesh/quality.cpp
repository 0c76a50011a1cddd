// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lipshape/mesh.hpp"

namespace lipshape {
namespace {

double angle_deg(double opposite, double s1, double s2) {
  const double c = (s1 * s1 + s2 * s2 - opposite * opposite) / (2.0 * s1 * s2);
  return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

}  // namespace

TriangleQuality triangle_quality(const Point& a, const Point& b, const Point& c) {
  const double la = (b - c).norm();  // opposite a
  const double lb = (c - a).norm();  // opposite b
  const double lc = (a - b).norm();  // opposite c
  TriangleQuality q;
  q.angles = {angle_deg(la, lb, lc), angle_deg(lb, lc, la), angle_deg(lc, la, lb)};

  const double area = std::abs(signed_area(a, b, c));
  const double s = 0.5 * (la + lb + lc);
  // R = abc / (4 area), r = area / s.
  q.radius_ratio = area > 0.0 ? la * lb * lc * s / (4.0 * area * area)
                              : std::numeric_limits<double>::infinity();
  return q;
}

QualityReport quality_report(const Mesh& mesh) {
  QualityReport report;
  report.min_angle = std::numeric_limits<double>::infinity();
  report.max_angle = 0.0;
  report.max_radius_ratio = 0.0;
  report.element_count = mesh.triangles.size();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.corners(t);
    const auto q = triangle_quality(c[0], c[1], c[2]);
    for (double angle : q.angles) {
      report.min_angle = std::min(report.min_angle, angle);
      report.max_angle = std::max(report.max_angle, angle);
    }
    report.max_radius_ratio = std::max(report.max_radius_ratio, q.radius_ratio);
  }
  return report;
}

}  // namespace lipshape

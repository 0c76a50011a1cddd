// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <string>

#include "lipshape/error.hpp"
#include "lipshape/mesh.hpp"

namespace lipshape {

double Polygon::area() const {
  double twice = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = vertices[i];
    const Point& q = vertices[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

bool Polygon::contains(const Point& p) const {
  bool inside = false;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = vertices[i];
    const Point& b = vertices[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double xc = (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (p.x() < xc) inside = !inside;
    }
  }
  return inside;
}

Polygon obstacle_polygon(const Mesh& mesh) {
  std::map<int, std::vector<int>> neighbours;
  std::size_t edge_count = 0;
  for (const auto& e : mesh.boundary_edges) {
    if (e.marker != Marker::Obstacle) continue;
    neighbours[e.a].push_back(e.b);
    neighbours[e.b].push_back(e.a);
    ++edge_count;
  }
  require(edge_count >= 3, ErrorKind::Topology, "mesh has no closed obstacle boundary");
  for (const auto& [node, adj] : neighbours) {
    require(adj.size() == 2, ErrorKind::Topology,
            "obstacle boundary node " + std::to_string(node) + " has " +
                std::to_string(adj.size()) + " obstacle edges (open chain or touching loops)");
  }

  const int start = neighbours.begin()->first;
  Polygon poly;
  int prev = -1;
  int cur = start;
  do {
    poly.vertices.push_back(mesh.nodes[cur]);
    const auto& adj = neighbours[cur];
    const int next = (adj[0] != prev) ? adj[0] : adj[1];
    prev = cur;
    cur = next;
    require(poly.vertices.size() <= edge_count, ErrorKind::Topology,
            "obstacle boundary walk does not close");
  } while (cur != start);
  require(poly.vertices.size() == edge_count, ErrorKind::Topology,
          "obstacle boundary consists of more than one loop");

  if (poly.area() < 0.0) std::reverse(poly.vertices.begin(), poly.vertices.end());
  return poly;
}

namespace {

// Sorted x coordinates where the horizontal line at y crosses polygon edges,
// using the same half-open rule as Polygon::contains.
void row_crossings(const Polygon& poly, double y, std::vector<double>& out) {
  out.clear();
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = v[i];
    const Point& b = v[j];
    if ((a.y() > y) != (b.y() > y)) {
      out.push_back((b.x() - a.x()) * (y - a.y()) / (b.y() - a.y()) + a.x());
    }
  }
  std::sort(out.begin(), out.end());
}

}  // namespace

double symmetric_difference_area(const Polygon& a, const Polygon& b, int samples_per_axis) {
  require(samples_per_axis >= 100, ErrorKind::Contract, "samples_per_axis must be >= 100");
  require(a.vertices.size() >= 3 && b.vertices.size() >= 3 && a.area() != 0.0 && b.area() != 0.0,
          ErrorKind::Contract, "degenerate polygon");

  Point lo = a.vertices.front();
  Point hi = lo;
  for (const auto* poly : {&a, &b}) {
    for (const auto& p : poly->vertices) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  }
  const int n = samples_per_axis;
  const double dx = (hi.x() - lo.x()) / n;
  const double dy = (hi.y() - lo.y()) / n;

  std::vector<double> xa;
  std::vector<double> xb;
  long long count = 0;
  for (int j = 0; j < n; ++j) {
    const double y = lo.y() + (j + 0.5) * dy;
    row_crossings(a, y, xa);
    row_crossings(b, y, xb);
    // A sample is inside when an odd number of crossings lies strictly to its right.
    std::size_t ia = 0;
    std::size_t ib = 0;
    for (int i = 0; i < n; ++i) {
      const double x = lo.x() + (i + 0.5) * dx;
      while (ia < xa.size() && xa[ia] <= x) ++ia;
      while (ib < xb.size() && xb[ib] <= x) ++ib;
      const bool in_a = ((xa.size() - ia) % 2) == 1;
      const bool in_b = ((xb.size() - ib) % 2) == 1;
      if (in_a != in_b) ++count;
    }
  }
  return static_cast<double>(count) * dx * dy;
}

}  // namespace lipshape

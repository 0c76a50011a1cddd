// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>

#include "lipshape/error.hpp"
#include "lipshape/mesh.hpp"

namespace lipshape {
namespace {

// Root grid lines of one axis: offset + k * size inside (-half, half) plus the
// two boundary lines. Boundary cells narrower than half a root cell are merged
// with their neighbour.
std::vector<double> root_lines(double half, double offset, double size) {
  std::vector<double> lines{-half};
  const auto first = static_cast<long>(std::ceil((-half - offset) / size));
  for (long k = first;; ++k) {
    const double x = offset + static_cast<double>(k) * size;
    if (x >= half) break;
    if (x > -half) lines.push_back(x);
  }
  if (lines.size() > 2 && lines[1] - lines[0] < 0.5 * size) lines.erase(lines.begin() + 1);
  if (lines.size() > 2 && half - lines.back() < 0.5 * size) lines.pop_back();
  lines.push_back(half);
  return lines;
}

// Cells are addressed on the lattice of the finest level: a cell of level l
// spans 2^(depth - l) lattice units, a root cell 2^depth.
struct Cell {
  int level;
  std::int64_t i;
  std::int64_t j;
  bool operator<(const Cell& o) const { return std::tie(level, i, j) < std::tie(o.level, o.i, o.j); }
};

class Quadtree {
 public:
  Quadtree(std::vector<double> xs, std::vector<double> ys, int depth)
      : xs_(std::move(xs)), ys_(std::move(ys)), depth_(depth) {}

  std::int64_t span(int level) const { return std::int64_t{1} << (depth_ - level); }

  double x(std::int64_t lattice) const { return coordinate(xs_, lattice); }
  double y(std::int64_t lattice) const { return coordinate(ys_, lattice); }

  std::int64_t nx() const { return static_cast<std::int64_t>(xs_.size() - 1) << depth_; }
  std::int64_t ny() const { return static_cast<std::int64_t>(ys_.size() - 1) << depth_; }

 private:
  double coordinate(const std::vector<double>& lines, std::int64_t lattice) const {
    const std::int64_t root = lattice >> depth_;
    if (root >= static_cast<std::int64_t>(lines.size()) - 1) return lines.back();
    const double t = static_cast<double>(lattice - (root << depth_)) / static_cast<double>(span(0));
    return lines[root] + t * (lines[root + 1] - lines[root]);
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
  int depth_;
};

}  // namespace

GridHierarchy generate_benchmark_mesh(const BenchmarkGeometry& g) {
  require(g.obstacle_edge > 0.0 && g.obstacle_edge < g.height && g.height < g.length,
          ErrorKind::Parameter, "benchmark geometry requires 0 < obstacle_edge < height < length");
  require(g.base_resolution >= 4, ErrorKind::Parameter, "base_resolution must be >= 4");
  require(g.grading > 0.0, ErrorKind::Parameter, "grading must be positive");

  const double h0 = g.obstacle_edge / g.base_resolution;
  const double core = 0.5 * g.obstacle_edge;
  // finest lattice lines must hit the obstacle edges
  const double offset = g.base_resolution % 2 == 0 ? 0.0 : 0.5 * h0;

  int depth = 0;
  while (std::ldexp(h0, depth + 1) <= 0.5 * g.height) ++depth;
  std::vector<double> xs, ys;
  for (;; --depth) {
    const double size = std::ldexp(h0, depth);
    xs = root_lines(0.5 * g.length, offset, size);
    ys = root_lines(0.5 * g.height, offset, size);
    // the obstacle must sit inside uniform root cells
    auto covered = [&](const std::vector<double>& lines) {
      return lines[1] <= -core - 0.25 * h0 && lines[lines.size() - 2] >= core + 0.25 * h0 &&
             lines[1] - lines[0] >= 0.5 * size && lines.back() - lines[lines.size() - 2] >= 0.5 * size;
    };
    if (covered(xs) && covered(ys)) break;
    require(depth > 0, ErrorKind::Parameter, "obstacle too close to the walls for this base_resolution");
  }
  const Quadtree tree(xs, ys, depth);

  auto box = [&](const Cell& c) {
    const std::int64_t s = tree.span(c.level);
    return std::array<double, 4>{tree.x(c.i), tree.x(c.i + s), tree.y(c.j), tree.y(c.j + s)};
  };
  auto inside_obstacle = [&](const Cell& c) {
    const auto b = box(c);
    const double tol = 1e-9 * h0;
    return b[0] >= -core - tol && b[1] <= core + tol && b[2] >= -core - tol && b[3] <= core + tol;
  };
  auto wants_split = [&](const Cell& c) {
    if (c.level == depth) return false;
    const auto b = box(c);
    const double dx = std::max({0.0, b[0] - core, -core - b[1]});
    const double dy = std::max({0.0, b[2] - core, -core - b[3]});
    const double size = std::max(b[1] - b[0], b[3] - b[2]);
    return size > h0 * (1.0 + 1e-9) + g.grading * std::hypot(dx, dy);
  };

  // leaves keyed by cell; internal cells are remembered for the balance test
  std::map<Cell, bool> cells;  // true for leaves
  std::vector<Cell> work;
  for (std::int64_t j = 0; j < tree.ny(); j += tree.span(0)) {
    for (std::int64_t i = 0; i < tree.nx(); i += tree.span(0)) work.push_back({0, i, j});
  }
  auto split = [&](const Cell& c, std::vector<Cell>& out) {
    cells[c] = false;
    const std::int64_t h = tree.span(c.level + 1);
    for (const auto& [di, dj] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
      const Cell child{c.level + 1, c.i + di * h, c.j + dj * h};
      out.push_back(child);
    }
  };
  while (!work.empty()) {
    const Cell c = work.back();
    work.pop_back();
    if (inside_obstacle(c)) continue;
    if (wants_split(c)) {
      split(c, work);
    } else {
      cells[c] = true;
    }
  }

  // 2:1 balance across edges
  auto refined = [&](int level, std::int64_t i, std::int64_t j) {
    const auto it = cells.find({level, i, j});
    return it != cells.end() && !it->second;
  };
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Cell> leaves;
    for (const auto& [c, leaf] : cells) {
      if (leaf) leaves.push_back(c);
    }
    for (const Cell& c : leaves) {
      if (c.level + 2 > depth) continue;
      const std::int64_t s = tree.span(c.level);
      const std::int64_t h = s / 2;
      // children of the same-level neighbours that touch this cell
      const std::array<std::array<std::int64_t, 4>, 4> touching{{
          {c.i - h, c.j, c.i - h, c.j + h},      // west neighbour, east children
          {c.i + s, c.j, c.i + s, c.j + h},      // east neighbour, west children
          {c.i, c.j - h, c.i + h, c.j - h},      // south neighbour, north children
          {c.i, c.j + s, c.i + h, c.j + s},      // north neighbour, south children
      }};
      bool must = false;
      for (const auto& t : touching) {
        must = must || refined(c.level + 1, t[0], t[1]) || refined(c.level + 1, t[2], t[3]);
      }
      if (!must) continue;
      std::vector<Cell> children;
      split(c, children);
      for (const Cell& child : children) {
        if (!inside_obstacle(child)) cells[child] = true;
      }
      changed = true;
    }
  }

  Mesh mesh;
  std::unordered_map<std::uint64_t, int> node_of;
  auto key = [](std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
  };
  auto node = [&](std::int64_t i, std::int64_t j) {
    const auto [it, fresh] = node_of.try_emplace(key(i, j), mesh.num_nodes());
    if (fresh) mesh.nodes.emplace_back(tree.x(i), tree.y(j));
    return it->second;
  };
  for (const auto& [c, leaf] : cells) {
    if (!leaf) continue;
    const std::int64_t s = tree.span(c.level);
    node(c.i, c.j);
    node(c.i + s, c.j);
    node(c.i, c.j + s);
    node(c.i + s, c.j + s);
  }

  for (const auto& [c, leaf] : cells) {
    if (!leaf) continue;
    const std::int64_t s = tree.span(c.level);
    const std::int64_t h = s / 2;
    const std::int64_t corner_i[4] = {c.i, c.i + s, c.i + s, c.i};
    const std::int64_t corner_j[4] = {c.j, c.j, c.j + s, c.j + s};
    std::vector<int> loop;
    bool hanging = false;
    for (int k = 0; k < 4; ++k) {
      loop.push_back(node_of.at(key(corner_i[k], corner_j[k])));
      if (s < 2) continue;
      const std::int64_t mi = (corner_i[k] + corner_i[(k + 1) % 4]) / 2;
      const std::int64_t mj = (corner_j[k] + corner_j[(k + 1) % 4]) / 2;
      if (const auto it = node_of.find(key(mi, mj)); it != node_of.end()) {
        loop.push_back(it->second);
        hanging = true;
      }
    }
    if (hanging) {
      const int centre = node(c.i + h, c.j + h);
      for (std::size_t k = 0; k < loop.size(); ++k) {
        mesh.triangles.push_back({centre, loop[k], loop[(k + 1) % loop.size()]});
      }
      continue;
    }
    const int sw = loop[0], se = loop[1], ne = loop[2], nw = loop[3];
    // diagonals point away from the origin so the mesh is mirror symmetric
    const double cx = 0.5 * (tree.x(c.i) + tree.x(c.i + s));
    const double cy = 0.5 * (tree.y(c.j) + tree.y(c.j + s));
    if (cx * cy > 0.0) {
      mesh.triangles.push_back({sw, se, ne});
      mesh.triangles.push_back({sw, ne, nw});
    } else {
      mesh.triangles.push_back({sw, se, nw});
      mesh.triangles.push_back({se, ne, nw});
    }
  }

  const double tol = 1e-9 * g.length;
  const EdgeTable edges(mesh);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int e = edges.triangle_edges(t)[k];
      if (edges.valence(e) != 1) continue;
      const int a = mesh.triangles[t][k];
      const int b = mesh.triangles[t][(k + 1) % 3];
      const Point mid = 0.5 * (mesh.nodes[a] + mesh.nodes[b]);
      Marker marker = Marker::Obstacle;
      if (std::abs(mid.x() + 0.5 * g.length) < tol) {
        marker = Marker::Inflow;
      } else if (std::abs(mid.x() - 0.5 * g.length) < tol) {
        marker = Marker::Outflow;
      } else if (std::abs(std::abs(mid.y()) - 0.5 * g.height) < tol) {
        marker = Marker::Wall;
      }
      mesh.boundary_edges.push_back({a, b, marker});
    }
  }

  mesh.validate();
  return GridHierarchy(std::move(mesh));
}

}  // namespace lipshape

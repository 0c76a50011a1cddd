// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace lipshape {

using Point = Eigen::Vector2d;

enum class Marker : std::uint8_t { Inflow, Outflow, Wall, Obstacle };

const char* to_string(Marker marker) noexcept;

struct BoundaryEdge {
  int a = -1;
  int b = -1;
  Marker marker = Marker::Wall;
};

/// Unstructured triangle mesh of the wetted domain. Triangles are stored
/// counterclockwise; boundary edges carry the marker of the boundary part
/// they belong to.
struct Mesh {
  static constexpr int dimension = 2;

  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  std::array<Point, 3> corners(int t) const {
    const auto& tri = triangles[t];
    return {nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]};
  }

  double signed_area(int t) const;

  /// Nodes lying on at least one boundary edge with the given marker.
  std::vector<bool> nodes_on(Marker marker) const;

  /// Nodes held fixed by deformations: Inflow, Outflow and Wall nodes.
  std::vector<bool> fixed_nodes() const;

  /// Throws a Topology or Degenerate error when an invariant is violated:
  /// positive areas, edge manifoldness, and a marked boundary that matches
  /// the geometric boundary exactly.
  void validate() const;
};

double signed_area(const Point& a, const Point& b, const Point& c);

/// Global edge numbering. Local edge k of a triangle joins corners k and
/// (k+1) mod 3.
class EdgeTable {
 public:
  explicit EdgeTable(const Mesh& mesh);

  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }
  /// Number of triangles sharing edge e (1 on the boundary, 2 inside).
  int valence(int e) const { return valence_[e]; }

  std::optional<int> find(int a, int b) const;

 private:
  static std::uint64_t key(int a, int b);

  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<int> valence_;
  std::unordered_map<std::uint64_t, int> lookup_;
};

struct DomainMoments {
  double area = 0.0;
  Point first_moment = Point::Zero();  // integral of x over the domain
};

DomainMoments domain_moments(const Mesh& mesh);

// ---------------------------------------------------------------------------
// Benchmark geometry

/// Channel [-L/2, L/2] x [-height/2, height/2] around a centered square
/// obstacle, meshed from a 2:1 balanced quadtree. Cells touching the obstacle
/// have edge obstacle_edge / base_resolution; at distance d from the obstacle
/// cells may grow to that size plus grading * d.
struct BenchmarkGeometry {
  double length = 20.0;
  double height = 6.0;
  double obstacle_edge = 0.4;
  int base_resolution = 4;
  double grading = 0.5;
};

class GridHierarchy;

GridHierarchy generate_benchmark_mesh(const BenchmarkGeometry& geometry);

// ---------------------------------------------------------------------------
// Grid hierarchy

/// Where a fine node comes from: either a coarse node (copied) or the
/// midpoint of a coarse edge.
struct NodeParent {
  int coarse_node = -1;
  std::array<int, 2> coarse_edge{-1, -1};
};

/// Node coordinates of every level, used to restore a hierarchy exactly.
using CoordinateSnapshot = std::vector<std::vector<Point>>;

/// Stack of uniformly refined meshes, coarsest first. Deformations are given
/// on the finest level and transferred to coarser levels by injection.
class GridHierarchy {
 public:
  explicit GridHierarchy(Mesh base);

  std::size_t num_levels() const { return levels_.size(); }
  const Mesh& level(std::size_t k) const { return levels_.at(k); }
  const Mesh& finest() const { return levels_.back(); }
  const Mesh& coarsest() const { return levels_.front(); }

  /// Parent map of level k (k >= 1) with respect to level k - 1.
  const std::vector<NodeParent>& parents(std::size_t k) const { return parents_.at(k); }

  /// Finest-level node coincident with node i of level k.
  int finest_node(std::size_t k, int i) const { return finest_index_.at(k).at(i); }

  /// Adds one red-refined level on top.
  void refine_uniform();

  /// Moves finest node x to x + u(x) (u interleaved, two entries per finest
  /// node) and coarse nodes by the displacement of their coincident fine node.
  /// Throws a Tangling error and leaves the hierarchy untouched if any element
  /// on any level would lose positive area.
  void apply_deformation(const Eigen::VectorXd& u);

  CoordinateSnapshot snapshot() const;
  void restore(const CoordinateSnapshot& snapshot);

 private:
  void rebuild_finest_index();

  std::vector<Mesh> levels_;
  std::vector<std::vector<NodeParent>> parents_;
  std::vector<std::vector<int>> finest_index_;
};

/// Red refinement of a single mesh; parents receives the fine-to-coarse map.
Mesh refine_mesh(const Mesh& coarse, std::vector<NodeParent>* parents = nullptr);

/// Value-returning form of GridHierarchy::refine_uniform.
GridHierarchy refine_uniform(GridHierarchy hierarchy);

// ---------------------------------------------------------------------------
// Quality

struct TriangleQuality {
  std::array<double, 3> angles{};  // degrees
  double radius_ratio = 0.0;       // circumradius / inradius
};

TriangleQuality triangle_quality(const Point& a, const Point& b, const Point& c);

struct QualityReport {
  double min_angle = 0.0;         // degrees
  double max_angle = 0.0;         // degrees
  double max_radius_ratio = 0.0;  // circumradius / inradius, >= 2
  std::size_t element_count = 0;
};

QualityReport quality_report(const Mesh& mesh);

// ---------------------------------------------------------------------------
// Polygons

/// Closed loop of points, counterclockwise; the closing edge is implicit.
struct Polygon {
  std::vector<Point> vertices;

  double area() const;  // signed shoelace area
  bool contains(const Point& p) const;  // even-odd rule
};

/// Counterclockwise loop of the obstacle boundary nodes.
Polygon obstacle_polygon(const Mesh& mesh);

/// |a \ b| + |b \ a| estimated by even-odd point sampling at cell centers of a
/// samples_per_axis^2 grid over the joint bounding box. The error is bounded by
/// roughly one cell area per cell crossed by either boundary, i.e.
/// O(cell_size * (perimeter(a) + perimeter(b))).
double symmetric_difference_area(const Polygon& a, const Polygon& b, int samples_per_axis);

}  // namespace lipshape

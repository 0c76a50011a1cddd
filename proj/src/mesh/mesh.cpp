// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <string>

#include "lipshape/error.hpp"
#include "lipshape/mesh.hpp"

namespace lipshape {

const char* to_string(Marker marker) noexcept {
  switch (marker) {
    case Marker::Inflow: return "inflow";
    case Marker::Outflow: return "outflow";
    case Marker::Wall: return "wall";
    case Marker::Obstacle: return "obstacle";
  }
  return "unknown";
}

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double Mesh::signed_area(int t) const {
  const auto& tri = triangles[t];
  return lipshape::signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

std::vector<bool> Mesh::nodes_on(Marker marker) const {
  std::vector<bool> on(nodes.size(), false);
  for (const auto& e : boundary_edges) {
    if (e.marker != marker) continue;
    on[e.a] = true;
    on[e.b] = true;
  }
  return on;
}

std::vector<bool> Mesh::fixed_nodes() const {
  std::vector<bool> fixed(nodes.size(), false);
  for (const auto& e : boundary_edges) {
    if (e.marker == Marker::Obstacle) continue;
    fixed[e.a] = true;
    fixed[e.b] = true;
  }
  return fixed;
}

void Mesh::validate() const {
  const int n = num_nodes();
  for (int t = 0; t < num_triangles(); ++t) {
    for (int v : triangles[t]) {
      require(v >= 0 && v < n, ErrorKind::Topology,
              "triangle " + std::to_string(t) + " references node " + std::to_string(v));
    }
    require(signed_area(t) > 0.0, ErrorKind::Degenerate,
            "triangle " + std::to_string(t) + " has non-positive area");
  }

  EdgeTable edges(*this);
  std::vector<int> marked(edges.num_edges(), 0);
  for (const auto& be : boundary_edges) {
    require(be.a >= 0 && be.a < n && be.b >= 0 && be.b < n, ErrorKind::Topology,
            "boundary edge references a missing node");
    auto e = edges.find(be.a, be.b);
    require(e.has_value(), ErrorKind::Topology,
            "boundary edge (" + std::to_string(be.a) + ", " + std::to_string(be.b) +
                ") is not an edge of the triangulation");
    ++marked[*e];
  }
  for (int e = 0; e < edges.num_edges(); ++e) {
    const int valence = edges.valence(e);
    require(valence <= 2, ErrorKind::Topology,
            "edge " + std::to_string(e) + " shared by more than two triangles");
    if (valence == 1) {
      require(marked[e] == 1, ErrorKind::Topology,
              "boundary edge (" + std::to_string(edges.edge(e)[0]) + ", " +
                  std::to_string(edges.edge(e)[1]) + ") is marked " +
                  std::to_string(marked[e]) + " times");
    } else {
      require(marked[e] == 0, ErrorKind::Topology,
              "interior edge (" + std::to_string(edges.edge(e)[0]) + ", " +
                  std::to_string(edges.edge(e)[1]) + ") carries a boundary marker");
    }
  }
}

// ---------------------------------------------------------------------------

std::uint64_t EdgeTable::key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

EdgeTable::EdgeTable(const Mesh& mesh) {
  triangle_edges_.resize(mesh.triangles.size());
  lookup_.reserve(mesh.triangles.size() * 2);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      auto [it, inserted] = lookup_.try_emplace(key(a, b), static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back({std::min(a, b), std::max(a, b)});
        valence_.push_back(0);
      }
      ++valence_[it->second];
      triangle_edges_[t][k] = it->second;
    }
  }
}

std::optional<int> EdgeTable::find(int a, int b) const {
  auto it = lookup_.find(key(a, b));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

DomainMoments domain_moments(const Mesh& mesh) {
  DomainMoments m;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.corners(t);
    const double area = signed_area(c[0], c[1], c[2]);
    m.area += area;
    m.first_moment += area * (c[0] + c[1] + c[2]) / 3.0;
  }
  return m;
}

}  // namespace lipshape

// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "lipshape/error.hpp"
#include "lipshape/mesh.hpp"

namespace lipshape {

Mesh refine_mesh(const Mesh& coarse, std::vector<NodeParent>* parents) {
  const EdgeTable edges(coarse);
  const int nc = coarse.num_nodes();

  Mesh fine;
  fine.nodes = coarse.nodes;
  fine.nodes.reserve(nc + edges.num_edges());
  for (int e = 0; e < edges.num_edges(); ++e) {
    const auto& ab = edges.edge(e);
    fine.nodes.push_back(0.5 * (coarse.nodes[ab[0]] + coarse.nodes[ab[1]]));
  }

  fine.triangles.reserve(4 * coarse.triangles.size());
  for (int t = 0; t < coarse.num_triangles(); ++t) {
    const auto& v = coarse.triangles[t];
    const auto& te = edges.triangle_edges(t);
    const int m01 = nc + te[0];
    const int m12 = nc + te[1];
    const int m20 = nc + te[2];
    fine.triangles.push_back({v[0], m01, m20});
    fine.triangles.push_back({m01, v[1], m12});
    fine.triangles.push_back({m20, m12, v[2]});
    fine.triangles.push_back({m01, m12, m20});
  }

  fine.boundary_edges.reserve(2 * coarse.boundary_edges.size());
  for (const auto& be : coarse.boundary_edges) {
    const int m = nc + *edges.find(be.a, be.b);
    fine.boundary_edges.push_back({be.a, m, be.marker});
    fine.boundary_edges.push_back({m, be.b, be.marker});
  }

  if (parents) {
    parents->assign(fine.nodes.size(), NodeParent{});
    for (int i = 0; i < nc; ++i) (*parents)[i].coarse_node = i;
    for (int e = 0; e < edges.num_edges(); ++e) (*parents)[nc + e].coarse_edge = edges.edge(e);
  }
  return fine;
}

GridHierarchy::GridHierarchy(Mesh base) {
  levels_.push_back(std::move(base));
  parents_.emplace_back();
  rebuild_finest_index();
}

void GridHierarchy::refine_uniform() {
  std::vector<NodeParent> parents;
  Mesh fine = refine_mesh(levels_.back(), &parents);
  levels_.push_back(std::move(fine));
  parents_.push_back(std::move(parents));
  rebuild_finest_index();
}

GridHierarchy refine_uniform(GridHierarchy hierarchy) {
  hierarchy.refine_uniform();
  return hierarchy;
}

void GridHierarchy::rebuild_finest_index() {
  const std::size_t top = levels_.size() - 1;
  finest_index_.assign(levels_.size(), {});
  auto& finest = finest_index_[top];
  finest.resize(levels_[top].nodes.size());
  for (std::size_t i = 0; i < finest.size(); ++i) finest[i] = static_cast<int>(i);

  for (std::size_t k = top; k > 0; --k) {
    auto& coarse = finest_index_[k - 1];
    coarse.assign(levels_[k - 1].nodes.size(), -1);
    const auto& parents = parents_[k];
    for (std::size_t i = 0; i < parents.size(); ++i) {
      if (parents[i].coarse_node >= 0) coarse[parents[i].coarse_node] = finest_index_[k][i];
    }
  }
}

void GridHierarchy::apply_deformation(const Eigen::VectorXd& u) {
  const Mesh& top = finest();
  require(u.size() == 2 * static_cast<Eigen::Index>(top.nodes.size()), ErrorKind::Contract,
          "deformation size does not match the finest level");
  const auto fixed = top.fixed_nodes();
  for (int i = 0; i < top.num_nodes(); ++i) {
    if (!fixed[i]) continue;
    require(std::abs(u[2 * i]) <= 1e-14 && std::abs(u[2 * i + 1]) <= 1e-14, ErrorKind::Contract,
            "deformation does not vanish on fixed boundary node " + std::to_string(i));
  }

  CoordinateSnapshot moved = snapshot();
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    for (std::size_t i = 0; i < moved[k].size(); ++i) {
      const int f = finest_index_[k][i];
      // Skipping exact zeros keeps untouched coordinates bitwise identical.
      if (u[2 * f] != 0.0) moved[k][i].x() += u[2 * f];
      if (u[2 * f + 1] != 0.0) moved[k][i].y() += u[2 * f + 1];
    }
    const Mesh& mesh = levels_[k];
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto& tri = mesh.triangles[t];
      if (signed_area(moved[k][tri[0]], moved[k][tri[1]], moved[k][tri[2]]) <= 0.0) {
        throw Error(ErrorKind::Tangling, "deformation inverts triangle " + std::to_string(t) +
                                             " on level " + std::to_string(k));
      }
    }
  }
  restore(moved);
}

CoordinateSnapshot GridHierarchy::snapshot() const {
  CoordinateSnapshot s;
  s.reserve(levels_.size());
  for (const auto& mesh : levels_) s.push_back(mesh.nodes);
  return s;
}

void GridHierarchy::restore(const CoordinateSnapshot& s) {
  require(s.size() == levels_.size(), ErrorKind::Contract, "snapshot level count mismatch");
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    require(s[k].size() == levels_[k].nodes.size(), ErrorKind::Contract,
            "snapshot node count mismatch");
  }
  for (std::size_t k = 0; k < levels_.size(); ++k) levels_[k].nodes = s[k];
}

}  // namespace lipshape

// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "lipshape/error.hpp"
#include "lipshape/fem.hpp"

namespace lipshape {

DofMap concatenate(std::span<const DofMap> parts) {
  DofMap out;
  require(!parts.empty(), ErrorKind::Contract, "no dof maps to concatenate");
  const int elements = parts.front().num_elements();
  for (const auto& p : parts) {
    require(p.num_elements() == elements, ErrorKind::Contract, "dof maps cover different meshes");
    out.per_element += p.per_element;
  }
  out.indices.reserve(static_cast<std::size_t>(elements) * out.per_element);
  for (int t = 0; t < elements; ++t) {
    int offset = 0;
    for (const auto& p : parts) {
      for (int d : p.element(t)) out.indices.push_back(d + offset);
      offset += p.num_dofs;
    }
  }
  for (const auto& p : parts) out.num_dofs += p.num_dofs;
  return out;
}

FunctionSpace::FunctionSpace(const Mesh& mesh, SpaceKind kind)
    : mesh_(&mesh), kind_(kind), edges_(mesh) {
  const int nn = mesh.num_nodes();
  const int comps = components();
  const int scalars = scalar_per_element();
  dofs_.per_element = scalars * comps;
  dofs_.num_dofs = comps * (kind == SpaceKind::P2Vector ? nn + edges_.num_edges() : nn);
  dofs_.indices.reserve(static_cast<std::size_t>(mesh.num_triangles()) * dofs_.per_element);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    std::array<int, 6> s{};
    for (int k = 0; k < 3; ++k) s[k] = mesh.triangles[t][k];
    if (kind == SpaceKind::P2Vector) {
      for (int k = 0; k < 3; ++k) s[3 + k] = nn + edges_.triangle_edges(t)[k];
    }
    for (int a = 0; a < scalars; ++a) {
      for (int c = 0; c < comps; ++c) dofs_.indices.push_back(comps * s[a] + c);
    }
  }
}

FunctionSpace::DofLocation FunctionSpace::locate(int dof) const {
  require(dof >= 0 && dof < num_dofs(), ErrorKind::Contract, "dof " + std::to_string(dof) + " out of range");
  const int comps = components();
  const int s = dof / comps;
  DofLocation loc;
  loc.component = dof % comps;
  if (s < mesh_->num_nodes()) {
    loc.entity = s;
  } else {
    loc.on_edge = true;
    loc.entity = s - mesh_->num_nodes();
  }
  return loc;
}

Point FunctionSpace::scalar_dof_point(int s) const {
  const int nn = mesh_->num_nodes();
  if (s < nn) return mesh_->nodes[s];
  const auto& e = edges_.edge(s - nn);
  return 0.5 * (mesh_->nodes[e[0]] + mesh_->nodes[e[1]]);
}

FieldSample evaluate_field(const FunctionSpace& space, const Eigen::VectorXd& coefficients,
                           int triangle, const std::array<double, 3>& barycentric) {
  require(coefficients.size() == space.num_dofs(), ErrorKind::Contract,
          "coefficient vector does not match the space");
  require(triangle >= 0 && triangle < space.mesh().num_triangles(), ErrorKind::Contract,
          "triangle index out of range");
  const ElementGeometry g = element_geometry(space.mesh().corners(triangle));
  const Point xi(barycentric[1], barycentric[2]);
  const int comps = space.components();
  const auto dofs = space.dofs().element(triangle);

  FieldSample out;
  out.value = Eigen::VectorXd::Zero(comps);
  out.gradient = Eigen::MatrixXd::Zero(comps, 2);
  auto accumulate = [&](int a, double phi, const Eigen::Vector2d& ref_grad) {
    const Eigen::Vector2d grad = g.inverse_transpose * ref_grad;
    for (int c = 0; c < comps; ++c) {
      const double coef = coefficients[dofs[comps * a + c]];
      out.value[c] += coef * phi;
      out.gradient.row(c) += coef * grad.transpose();
    }
  };
  if (space.kind() == SpaceKind::P2Vector) {
    const auto phi = p2_values(xi);
    const auto grads = p2_reference_gradients(xi);
    for (int a = 0; a < 6; ++a) accumulate(a, phi[a], grads[a]);
  } else {
    const auto phi = p1_values(xi);
    const auto& grads = p1_reference_gradients();
    for (int a = 0; a < 3; ++a) accumulate(a, phi[a], grads[a]);
  }
  return out;
}

}  // namespace lipshape

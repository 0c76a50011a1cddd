// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/LU>
#include <string>

#include "lipshape/descent.hpp"
#include "lipshape/error.hpp"

namespace lipshape {
namespace {

DofMap p1_vector_dofs(const Mesh& mesh) {
  DofMap d;
  d.num_dofs = 2 * mesh.num_nodes();
  d.per_element = 6;
  d.indices.reserve(6 * mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    for (int v : tri) {
      d.indices.push_back(2 * v);
      d.indices.push_back(2 * v + 1);
    }
  }
  return d;
}

}  // namespace

DescentDiscretization::DescentDiscretization(const Mesh& mesh)
    : mesh_(&mesh), dofs_(p1_vector_dofs(mesh)), assembler_(dofs_, dofs_) {
  elements_.reserve(mesh.triangles.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh.corners(t));
    Element e;
    e.nodes = mesh.triangles[t];
    e.area = 0.5 * g.det;
    const auto& ref = p1_reference_gradients();
    for (int a = 0; a < 3; ++a) e.grad[a] = g.inverse_transpose * ref[a];
    elements_.push_back(e);
  }
  const auto fixed = mesh.fixed_nodes();
  is_dirichlet_.assign(num_dofs(), 0);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (!fixed[i]) continue;
    for (int c = 0; c < 2; ++c) {
      dirichlet_.push_back(2 * i + c);
      is_dirichlet_[2 * i + c] = 1;
    }
  }
}

void DescentDiscretization::zero_dirichlet(Eigen::VectorXd& v) const {
  for (int d : dirichlet_) v[d] = 0.0;
}

DeformedElement deform_element(const DescentDiscretization::Element& e, const Mesh& mesh,
                               const Eigen::VectorXd& u) {
  DeformedElement d;
  d.Du.setZero();
  d.centroid.setZero();
  for (int a = 0; a < 3; ++a) {
    const int n = e.nodes[a];
    const Eigen::Vector2d ua(u[2 * n], u[2 * n + 1]);
    d.Du += ua * e.grad[a].transpose();
    d.centroid += (mesh.nodes[n] + ua) / 3.0;
  }
  d.frob2 = d.Du.squaredNorm();
  const Eigen::Matrix2d F = Eigen::Matrix2d::Identity() + d.Du;
  d.det = F.determinant();
  if (!(d.det > 0.0)) fail(ErrorKind::SingularConfiguration, "deformation inverts an element");
  d.inverse_transpose << F(1, 1), -F(1, 0), -F(0, 1), F(0, 0);
  d.inverse_transpose /= d.det;
  for (int a = 0; a < 3; ++a) d.t[a] = d.inverse_transpose * e.grad[a];
  return d;
}

bool is_admissible(const DescentDiscretization& disc, const Eigen::VectorXd& u) {
  for (const auto& e : disc.elements()) {
    Eigen::Matrix2d F = Eigen::Matrix2d::Identity();
    for (int a = 0; a < 3; ++a) {
      const int n = e.nodes[a];
      F += Eigen::Vector2d(u[2 * n], u[2 * n + 1]) * e.grad[a].transpose();
    }
    if (!(F.determinant() > 0.0)) return false;
  }
  return true;
}

ConstraintValue constraint_values(const DescentDiscretization& disc, const Eigen::VectorXd& u) {
  require(u.size() == disc.num_dofs(), ErrorKind::Contract, "displacement size mismatch");
  ConstraintValue g = ConstraintValue::Zero();
  for (const auto& e : disc.elements()) {
    const DeformedElement d = deform_element(e, disc.mesh(), u);
    g[0] += e.area * d.det * d.centroid.x();
    g[1] += e.area * d.det * d.centroid.y();
    g[2] += e.area * (d.det - 1.0);
  }
  return g;
}

ConstraintValue constraint_values(const Mesh& mesh, const Eigen::VectorXd& u) {
  return constraint_values(DescentDiscretization(mesh), u);
}

Eigen::MatrixXd assemble_constraint_jacobian(const DescentDiscretization& disc, const Eigen::VectorXd& u) {
  require(u.size() == disc.num_dofs(), ErrorKind::Contract, "displacement size mismatch");
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(disc.num_dofs(), 3);
  for (const auto& e : disc.elements()) {
    const DeformedElement d = deform_element(e, disc.mesh(), u);
    const double w = e.area * d.det;
    for (int a = 0; a < 3; ++a) {
      for (int c = 0; c < 2; ++c) {
        const int row = 2 * e.nodes[a] + c;
        const double tac = d.t[a][c];
        for (int i = 0; i < 2; ++i) {
          B(row, i) += w * ((i == c ? 1.0 / 3.0 : 0.0) + d.centroid[i] * tac);
        }
        B(row, 2) += w * tac;
      }
    }
  }
  for (int dof : disc.dirichlet_dofs()) B.row(dof).setZero();
  return B;
}

}  // namespace lipshape

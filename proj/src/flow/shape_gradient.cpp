// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "lipshape/error.hpp"
#include "lipshape/flow.hpp"

namespace lipshape {

Eigen::VectorXd shape_gradient(const FlowDiscretization& disc, const FlowState& state,
                               const AdjointState& adjoint) {
  const auto& settings = disc.settings();
  require(!settings.forcing && !settings.outflow_traction, ErrorKind::Contract,
          "shape gradient supports unforced flows only");
  require(state.residual_norm <= settings.tolerance, ErrorKind::Contract,
          "shape gradient needs a converged flow state");
  require(adjoint.residual_norm <= 1e-8, ErrorKind::Contract,
          "shape gradient needs a converged adjoint state (residual " +
              std::to_string(adjoint.residual_norm) + ")");

  const Mesh& mesh = disc.mesh();
  const auto& rule = disc.rule();
  const double nu = settings.nu;
  const Eigen::VectorXd y = disc.pack(state.v, state.q);
  const Eigen::VectorXd ys = disc.pack(adjoint.v, adjoint.q);

  std::vector<std::array<double, 6>> phi;
  std::vector<std::array<Eigen::Vector2d, 6>> grad;
  std::vector<std::array<double, 3>> psi;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point xi = rule.reference_point(q);
    phi.push_back(p2_values(xi));
    grad.push_back(p2_reference_gradients(xi));
    psi.push_back(p1_values(xi));
  }
  const auto& p1_grad = p1_reference_gradients();
  const Eigen::Matrix2d I2 = Eigen::Matrix2d::Identity();

  Eigen::VectorXd G = Eigen::VectorXd::Zero(2 * mesh.num_nodes());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo = element_geometry(mesh.corners(t));
    const double area = 0.5 * geo.det;
    const auto dofs = disc.dofs().element(t);
    Eigen::Matrix2d E = Eigen::Matrix2d::Zero();
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      Eigen::Vector2d v = Eigen::Vector2d::Zero();
      Eigen::Vector2d vs = Eigen::Vector2d::Zero();
      Eigen::Matrix2d Dv = Eigen::Matrix2d::Zero();
      Eigen::Matrix2d Dvs = Eigen::Matrix2d::Zero();
      for (int s = 0; s < 6; ++s) {
        const Eigen::Vector2d g = geo.inverse_transpose * grad[qp][s];
        const Eigen::Vector2d a(y[dofs[2 * s]], y[dofs[2 * s + 1]]);
        const Eigen::Vector2d b(ys[dofs[2 * s]], ys[dofs[2 * s + 1]]);
        v += phi[qp][s] * a;
        vs += phi[qp][s] * b;
        Dv += a * g.transpose();
        Dvs += b * g.transpose();
      }
      double q = 0.0;
      double qs = 0.0;
      for (int l = 0; l < 3; ++l) {
        q += psi[qp][l] * y[dofs[12 + l]];
        qs += psi[qp][l] * ys[dofs[12 + l]];
      }
      const double density = 0.5 * nu * Dv.squaredNorm() + nu * (Dv.array() * Dvs.array()).sum() +
                             (Dv * v).dot(vs) - q * Dvs.trace() + qs * Dv.trace();
      const Eigen::Matrix2d dI_dDv = nu * Dv + nu * Dvs + vs * v.transpose() + qs * I2;
      const Eigen::Matrix2d dI_dDvs = nu * Dv - q * I2;
      E += area * rule.weights[qp] *
           (-Dv.transpose() * dI_dDv - Dvs.transpose() * dI_dDvs + density * I2);
    }
    for (int a = 0; a < 3; ++a) {
      const Eigen::Vector2d g = geo.inverse_transpose * p1_grad[a];
      const Eigen::Vector2d contribution = E * g;
      const int n = mesh.triangles[t][a];
      G[2 * n] += contribution[0];
      G[2 * n + 1] += contribution[1];
    }
  }
  const auto fixed = mesh.fixed_nodes();
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    if (fixed[n]) G[2 * n] = G[2 * n + 1] = 0.0;
  }
  return G;
}

}  // namespace lipshape

// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "lipshape/descent.hpp"
#include "lipshape/error.hpp"

namespace lipshape {

double lagrangian(const DescentDiscretization& disc, const Eigen::VectorXd& u,
                  const Multipliers& lambda, double p, double sigma, const Eigen::VectorXd& G) {
  require(u.size() == disc.num_dofs() && G.size() == disc.num_dofs(), ErrorKind::Contract,
          "lagrangian size mismatch");
  double energy = 0.0;
  for (const auto& e : disc.elements()) {
    const DeformedElement d = deform_element(e, disc.mesh(), u);
    energy += e.area * std::pow(d.frob2, 0.5 * p);
  }
  return energy / p + sigma * G.dot(u) + lambda.dot(constraint_values(disc, u));
}

Defect assemble_defect(const DescentDiscretization& disc, const Eigen::VectorXd& u,
                       const Multipliers& lambda, double p, double sigma, const Eigen::VectorXd& G) {
  require(p >= 1.0, ErrorKind::Parameter, "exponent p must be >= 1");
  require(u.size() == disc.num_dofs() && G.size() == disc.num_dofs(), ErrorKind::Contract,
          "defect size mismatch");
  Defect out;
  out.r_u = -sigma * G;
  out.r_lambda = ConstraintValue::Zero();
  for (const auto& e : disc.elements()) {
    const DeformedElement d = deform_element(e, disc.mesh(), u);
    const double coef = d.frob2 > 0.0 ? std::pow(d.frob2, 0.5 * (p - 2.0)) : 0.0;
    const double w = e.area * d.det;
    for (int a = 0; a < 3; ++a) {
      const Eigen::Vector2d flux = d.Du * e.grad[a];
      for (int c = 0; c < 2; ++c) {
        const double tac = d.t[a][c];
        double value = e.area * coef * flux[c];
        for (int i = 0; i < 2; ++i) {
          value += lambda[i] * w * ((i == c ? 1.0 / 3.0 : 0.0) + d.centroid[i] * tac);
        }
        value += lambda[2] * w * tac;
        out.r_u[2 * e.nodes[a] + c] -= value;
      }
    }
    out.r_lambda[0] -= w * d.centroid.x();
    out.r_lambda[1] -= w * d.centroid.y();
    out.r_lambda[2] -= e.area * (d.det - 1.0);
  }
  disc.zero_dirichlet(out.r_u);
  return out;
}

SparseMatrix assemble_hessian(const DescentDiscretization& disc, const Eigen::VectorXd& u,
                              const Multipliers& lambda, double p, double epsilon) {
  require(p >= 2.0, ErrorKind::Parameter, "Hessian requires p >= 2");
  require(epsilon >= 0.0, ErrorKind::Parameter, "regularization must be non-negative");
  require(u.size() == disc.num_dofs(), ErrorKind::Contract, "Hessian size mismatch");
  const double theta = p <= 4.0 ? 1.0 : 0.0;
  const auto& elements = disc.elements();
  const Mesh& mesh = disc.mesh();

  SparseMatrix A = disc.assembler().assemble_matrix([&](int t, Eigen::MatrixXd& local) {
    const auto& e = elements[t];
    const DeformedElement d = deform_element(e, mesh, u);
    const double c1 = p == 2.0 ? 0.0 : (p - 2.0) * std::pow(d.frob2 + epsilon * theta, 0.5 * (p - 4.0));
    const double c2 = std::pow(d.frob2 + epsilon, 0.5 * (p - 2.0));
    if (!std::isfinite(c1) || !std::isfinite(c2)) {
      fail(ErrorKind::Assembly, "non-finite Hessian coefficient on element " + std::to_string(t));
    }
    const double w = e.area * d.det;
    std::array<Eigen::Vector2d, 3> flux;
    for (int a = 0; a < 3; ++a) flux[a] = d.Du * e.grad[a];
    for (int a = 0; a < 3; ++a) {
      for (int c = 0; c < 2; ++c) {
        for (int b = 0; b < 3; ++b) {
          for (int f = 0; f < 2; ++f) {
            const double tac = d.t[a][c];
            const double tbf = d.t[b][f];
            const double M = tac * tbf - d.t[a][f] * d.t[b][c];
            double value = e.area * c1 * flux[a][c] * flux[b][f];
            if (c == f) value += e.area * c2 * e.grad[a].dot(e.grad[b]);
            for (int i = 0; i < 2; ++i) {
              double bary = d.centroid[i] * M;
              if (i == c) bary += tbf / 3.0;
              if (i == f) bary += tac / 3.0;
              value += lambda[i] * w * bary;
            }
            value += lambda[2] * w * M;
            local(2 * a + c, 2 * b + f) = value;
          }
        }
      }
    }
  });

  Eigen::VectorXd dummy = Eigen::VectorXd::Zero(A.rows());
  const std::vector<double> zeros(disc.dirichlet_dofs().size(), 0.0);
  apply_dirichlet(A, dummy, disc.dirichlet_dofs(), zeros);
  return A;
}

double w1p_norm(const DescentDiscretization& disc, const Eigen::VectorXd& u, double p) {
  require(p >= 1.0, ErrorKind::Parameter, "W1p norm requires p >= 1");
  require(u.size() == disc.num_dofs(), ErrorKind::Contract, "displacement size mismatch");
  const QuadratureRule& rule = quadrature_rule(std::min(10, static_cast<int>(std::ceil(p)) + 1));
  double value = 0.0;
  double gradient = 0.0;
  for (const auto& e : disc.elements()) {
    Eigen::Matrix2d Du = Eigen::Matrix2d::Zero();
    std::array<Eigen::Vector2d, 3> ua;
    for (int a = 0; a < 3; ++a) {
      const int n = e.nodes[a];
      ua[a] = Eigen::Vector2d(u[2 * n], u[2 * n + 1]);
      Du += ua[a] * e.grad[a].transpose();
    }
    gradient += e.area * std::pow(Du.squaredNorm(), 0.5 * p);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.barycentric[q];
      const Eigen::Vector2d uq = l[0] * ua[0] + l[1] * ua[1] + l[2] * ua[2];
      value += e.area * rule.weights[q] * std::pow(uq.norm(), p);
    }
  }
  return std::pow(value, 1.0 / p) + std::pow(gradient, 1.0 / p);
}

double w1p_norm(const Mesh& mesh, const Eigen::VectorXd& u, double p) {
  return w1p_norm(DescentDiscretization(mesh), u, p);
}

}  // namespace lipshape

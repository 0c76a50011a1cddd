// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "lipshape/error.hpp"
#include "lipshape/flow.hpp"
#include "lipshape/log.hpp"

namespace lipshape {

Eigen::Vector2d inflow_profile(const Point& x, double inlet_height) {
  require(inlet_height > 0.0, ErrorKind::Parameter, "inlet height must be positive");
  return {std::max(0.0, std::cos(std::numbers::pi * std::abs(x.y()) / inlet_height)), 0.0};
}

namespace {

DofMap flow_dofs(const FunctionSpace& velocity, const FunctionSpace& pressure) {
  const std::array<DofMap, 2> parts{velocity.dofs(), pressure.dofs()};
  return concatenate(parts);
}

}  // namespace

FlowDiscretization::FlowDiscretization(const Mesh& mesh, FlowSettings settings)
    : settings_(std::move(settings)),
      velocity_(mesh, SpaceKind::P2Vector),
      pressure_(mesh, SpaceKind::P1Scalar),
      dofs_(flow_dofs(velocity_, pressure_)),
      assembler_(dofs_, dofs_),
      rule_(&quadrature_rule(settings_.quadrature_degree)) {
  require(settings_.nu > 0.0, ErrorKind::Parameter, "viscosity must be positive");
  require(settings_.max_iterations > 0, ErrorKind::Parameter, "max_iterations must be positive");

  for (std::size_t q = 0; q < rule_->size(); ++q) {
    const Point xi = rule_->reference_point(q);
    ref_.phi.push_back(p2_values(xi));
    ref_.grad.push_back(p2_reference_gradients(xi));
    ref_.psi.push_back(p1_values(xi));
  }

  // Scalar P2 dof -> prescribed velocity. Inflow first so that Wall and
  // Obstacle zeros win at shared corners.
  const int nn = mesh.num_nodes();
  std::map<int, Eigen::Vector2d> prescribed;
  for (Marker pass : {Marker::Inflow, Marker::Wall, Marker::Obstacle}) {
    for (const auto& be : mesh.boundary_edges) {
      if (be.marker != pass) continue;
      const int e = *velocity_.edges().find(be.a, be.b);
      for (int s : {be.a, be.b, nn + e}) {
        const Point x = velocity_.scalar_dof_point(s);
        Eigen::Vector2d value = Eigen::Vector2d::Zero();
        if (settings_.dirichlet) {
          value = settings_.dirichlet(x);
        } else if (pass == Marker::Inflow) {
          value = inflow_profile(x, settings_.inlet_height);
        }
        prescribed[s] = value;
      }
    }
  }
  is_dirichlet_.assign(num_dofs(), 0);
  for (const auto& [s, value] : prescribed) {
    for (int c = 0; c < 2; ++c) {
      dirichlet_dofs_.push_back(2 * s + c);
      dirichlet_values_.push_back(value[c]);
      is_dirichlet_[2 * s + c] = 1;
    }
  }
}

Eigen::VectorXd FlowDiscretization::pack(const Eigen::VectorXd& v, const Eigen::VectorXd& q) const {
  require(v.size() == num_velocity_dofs() && q.size() == pressure_.num_dofs(), ErrorKind::Contract,
          "flow coefficient size mismatch");
  Eigen::VectorXd y(num_dofs());
  y << v, q;
  return y;
}

Eigen::VectorXd FlowDiscretization::velocity_part(const Eigen::VectorXd& y) const {
  return y.head(num_velocity_dofs());
}

Eigen::VectorXd FlowDiscretization::pressure_part(const Eigen::VectorXd& y) const {
  return y.tail(pressure_.num_dofs());
}

Eigen::VectorXd FlowDiscretization::boundary_load() const {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(num_dofs());
  if (!settings_.outflow_traction) return load;
  const Mesh& m = mesh();
  const int nn = m.num_nodes();
  const double g = 0.5 * std::sqrt(0.6);
  const std::array<double, 3> s{0.5 - g, 0.5, 0.5 + g};
  const std::array<double, 3> w{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  for (const auto& be : m.boundary_edges) {
    if (be.marker != Marker::Outflow) continue;
    const Point& a = m.nodes[be.a];
    const Point& b = m.nodes[be.b];
    const double length = (b - a).norm();
    const std::array<int, 3> scalar{be.a, be.b, nn + *velocity_.edges().find(be.a, be.b)};
    for (int k = 0; k < 3; ++k) {
      const double t = s[k];
      const std::array<double, 3> N{(1.0 - t) * (1.0 - 2.0 * t), t * (2.0 * t - 1.0), 4.0 * t * (1.0 - t)};
      const Eigen::Vector2d h = settings_.outflow_traction((1.0 - t) * a + t * b);
      for (int j = 0; j < 3; ++j) {
        for (int c = 0; c < 2; ++c) load[2 * scalar[j] + c] += w[k] * length * N[j] * h[c];
      }
    }
  }
  return load;
}

FlowDiscretization::System FlowDiscretization::assemble(const Eigen::VectorXd& y, bool convection) const {
  require(y.size() == num_dofs(), ErrorKind::Contract, "flow state size mismatch");
  const Mesh& m = mesh();
  const double nu = settings_.nu;
  const double conv = convection ? 1.0 : 0.0;
  const auto& rule = *rule_;

  System sys;
  assembler_.assemble_system(
      [&](int t, Eigen::MatrixXd& J, Eigen::VectorXd& R) {
        const auto corners = m.corners(t);
        const ElementGeometry geo = element_geometry(corners);
        const double area = 0.5 * geo.det;
        const auto dofs = dofs_.element(t);
        std::array<Eigen::Vector2d, 6> vl;
        for (int s = 0; s < 6; ++s) vl[s] = {y[dofs[2 * s]], y[dofs[2 * s + 1]]};
        std::array<double, 3> ql{y[dofs[12]], y[dofs[13]], y[dofs[14]]};

        for (std::size_t qp = 0; qp < rule.size(); ++qp) {
          const double w = area * rule.weights[qp];
          const auto& phi = ref_.phi[qp];
          const auto& psi = ref_.psi[qp];
          std::array<Eigen::Vector2d, 6> g;
          Eigen::Vector2d v = Eigen::Vector2d::Zero();
          Eigen::Matrix2d Dv = Eigen::Matrix2d::Zero();
          for (int s = 0; s < 6; ++s) {
            g[s] = geo.inverse_transpose * ref_.grad[qp][s];
            v += phi[s] * vl[s];
            Dv += vl[s] * g[s].transpose();
          }
          const double q = psi[0] * ql[0] + psi[1] * ql[1] + psi[2] * ql[2];
          Eigen::Vector2d f = Eigen::Vector2d::Zero();
          if (settings_.forcing) {
            const auto& l = rule.barycentric[qp];
            f = settings_.forcing(l[0] * corners[0] + l[1] * corners[1] + l[2] * corners[2]);
          }
          const Eigen::Vector2d adv = Dv * v;
          const double div = Dv.trace();

          for (int s = 0; s < 6; ++s) {
            const Eigen::Vector2d visc = Dv * g[s];
            for (int c = 0; c < 2; ++c) {
              R[2 * s + c] += w * (nu * visc[c] + conv * adv[c] * phi[s] - q * g[s][c] - f[c] * phi[s]);
            }
          }
          for (int l = 0; l < 3; ++l) R[12 + l] += w * psi[l] * div;

          for (int s = 0; s < 6; ++s) {
            for (int mm = 0; mm < 6; ++mm) {
              const double diag = w * (nu * g[mm].dot(g[s]) + conv * g[mm].dot(v) * phi[s]);
              const double pp = w * conv * phi[mm] * phi[s];
              for (int c = 0; c < 2; ++c) {
                J(2 * s + c, 2 * mm + c) += diag;
                for (int e = 0; e < 2; ++e) J(2 * s + c, 2 * mm + e) += pp * Dv(c, e);
              }
            }
            for (int l = 0; l < 3; ++l) {
              for (int c = 0; c < 2; ++c) {
                J(2 * s + c, 12 + l) -= w * psi[l] * g[s][c];
                J(12 + l, 2 * s + c) += w * psi[l] * g[s][c];
              }
            }
          }
        }
        for (int i = 0; i < 15; ++i) {
          if (!std::isfinite(R[i])) fail(ErrorKind::Assembly, "non-finite residual on element " + std::to_string(t));
        }
      },
      sys.jacobian, sys.residual);
  if (settings_.outflow_traction) sys.residual -= boundary_load();
  return sys;
}

Eigen::VectorXd FlowDiscretization::residual(const Eigen::VectorXd& y, bool convection) const {
  return assemble(y, convection).residual;
}

double FlowDiscretization::objective(const Eigen::VectorXd& y) const {
  require(y.size() == num_dofs(), ErrorKind::Contract, "flow state size mismatch");
  const Mesh& m = mesh();
  const auto& rule = *rule_;
  double total = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry geo = element_geometry(m.corners(t));
    const auto dofs = dofs_.element(t);
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      Eigen::Matrix2d Dv = Eigen::Matrix2d::Zero();
      for (int s = 0; s < 6; ++s) {
        Dv += Eigen::Vector2d(y[dofs[2 * s]], y[dofs[2 * s + 1]]) *
              (geo.inverse_transpose * ref_.grad[qp][s]).transpose();
      }
      total += 0.5 * geo.det * rule.weights[qp] * Dv.squaredNorm();
    }
  }
  return 0.5 * settings_.nu * total;
}

Eigen::VectorXd FlowDiscretization::objective_gradient(const Eigen::VectorXd& y) const {
  require(y.size() == num_dofs(), ErrorKind::Contract, "flow state size mismatch");
  const Mesh& m = mesh();
  const auto& rule = *rule_;
  const double nu = settings_.nu;
  return assemble_functional(dofs_, [&](int t, Eigen::VectorXd& local) {
    const ElementGeometry geo = element_geometry(m.corners(t));
    const auto dofs = dofs_.element(t);
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      std::array<Eigen::Vector2d, 6> g;
      Eigen::Matrix2d Dv = Eigen::Matrix2d::Zero();
      for (int s = 0; s < 6; ++s) {
        g[s] = geo.inverse_transpose * ref_.grad[qp][s];
        Dv += Eigen::Vector2d(y[dofs[2 * s]], y[dofs[2 * s + 1]]) * g[s].transpose();
      }
      const double w = 0.5 * geo.det * rule.weights[qp];
      for (int s = 0; s < 6; ++s) {
        const Eigen::Vector2d dj = Dv * g[s];
        local[2 * s] += w * nu * dj[0];
        local[2 * s + 1] += w * nu * dj[1];
      }
    }
  });
}

double FlowDiscretization::free_residual_norm(const Eigen::VectorXd& residual) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < residual.size(); ++i) {
    if (!is_dirichlet_[i]) sum += residual[i] * residual[i];
  }
  return std::sqrt(sum);
}

FlowDiscretization::System assemble_ns_system(const FlowDiscretization& disc, const FlowState& state) {
  return disc.assemble(disc.pack(state.v, state.q));
}

FlowState solve_flow(const FlowDiscretization& disc) {
  const auto& settings = disc.settings();
  const auto& bc_dofs = disc.dirichlet_dofs();
  const std::vector<double> zeros(bc_dofs.size(), 0.0);

  Eigen::VectorXd y = Eigen::VectorXd::Zero(disc.num_dofs());
  for (std::size_t k = 0; k < bc_dofs.size(); ++k) y[bc_dofs[k]] = disc.dirichlet_values()[k];

  SparseDirectSolver solver;
  auto update = [&](FlowDiscretization::System& sys) {
    Eigen::VectorXd rhs = -sys.residual;
    apply_dirichlet(sys.jacobian, rhs, bc_dofs, zeros);
    solver.factorize(sys.jacobian);
    y += solver.solve(rhs);
  };

  auto stokes = disc.assemble(y, false);
  update(stokes);

  FlowState state;
  state.nu = settings.nu;
  double norm = 0.0;
  int it = 0;
  while (true) {
    auto sys = disc.assemble(y, true);
    norm = disc.free_residual_norm(sys.residual);
    log::debug("flow newton it=" + std::to_string(it) + " residual=" + std::to_string(norm));
    if (norm <= settings.tolerance) break;
    if (it == settings.max_iterations) {
      std::ostringstream msg;
      msg << "Navier-Stokes Newton did not converge in " << it << " iterations (residual " << norm << ")";
      throw NonconvergenceError(msg.str(), norm);
    }
    update(sys);
    ++it;
  }
  state.v = disc.velocity_part(y);
  state.q = disc.pressure_part(y);
  state.residual_norm = norm;
  state.newton_iterations = it;
  return state;
}

FlowState solve_flow(const Mesh& mesh, const FlowSettings& settings) {
  return solve_flow(FlowDiscretization(mesh, settings));
}

double energy_dissipation(const FlowDiscretization& disc, const FlowState& state) {
  return disc.objective(disc.pack(state.v, state.q));
}

Eigen::VectorXd nodal_velocity(const FlowDiscretization& disc, const FlowState& state) {
  require(state.v.size() == disc.num_velocity_dofs(), ErrorKind::Contract, "velocity size mismatch");
  return state.v.head(2 * disc.mesh().num_nodes());
}

}  // namespace lipshape

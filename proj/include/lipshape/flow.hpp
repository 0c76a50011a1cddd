// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "lipshape/fem.hpp"
#include "lipshape/mesh.hpp"

namespace lipshape {

using VectorField = std::function<Eigen::Vector2d(const Point&)>;

/// (max{0, cos(pi |y| / inlet_height)}, 0)
Eigen::Vector2d inflow_profile(const Point& x, double inlet_height);

struct FlowSettings {
  double nu = 0.02;
  double inlet_height = 6.0;
  double tolerance = 1e-10;  // absolute, Euclidean norm of the free residual
  int max_iterations = 25;
  int quadrature_degree = 5;
  VectorField forcing;           // body force, zero when empty
  VectorField outflow_traction;  // boundary load on Outflow, zero when empty
  VectorField dirichlet;         // values on Inflow, Wall and Obstacle when set
};

struct FlowState {
  Eigen::VectorXd v;  // P2 vector coefficients, interleaved
  Eigen::VectorXd q;  // P1 pressure
  double nu = 0.0;
  double residual_norm = 0.0;
  int newton_iterations = 0;
};

struct AdjointState {
  Eigen::VectorXd v;
  Eigen::VectorXd q;
  double residual_norm = 0.0;
};

/// P2-P1 Taylor-Hood discretization on one mesh geometry. Global unknowns are
/// the velocity dofs followed by the pressure dofs. The mesh must outlive the
/// discretization and keep its coordinates while it is in use.
class FlowDiscretization {
 public:
  FlowDiscretization(const Mesh& mesh, FlowSettings settings);

  const Mesh& mesh() const { return velocity_.mesh(); }
  const FlowSettings& settings() const { return settings_; }
  const FunctionSpace& velocity_space() const { return velocity_; }
  const FunctionSpace& pressure_space() const { return pressure_; }
  const DofMap& dofs() const { return dofs_; }
  const QuadratureRule& rule() const { return *rule_; }
  int num_velocity_dofs() const { return velocity_.num_dofs(); }
  int num_dofs() const { return velocity_.num_dofs() + pressure_.num_dofs(); }

  const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }
  const std::vector<double>& dirichlet_values() const { return dirichlet_values_; }

  Eigen::VectorXd pack(const Eigen::VectorXd& v, const Eigen::VectorXd& q) const;
  Eigen::VectorXd velocity_part(const Eigen::VectorXd& y) const;
  Eigen::VectorXd pressure_part(const Eigen::VectorXd& y) const;

  struct System {
    Eigen::VectorXd residual;
    SparseMatrix jacobian;
  };

  /// Residual and exact Jacobian at y; no boundary conditions applied.
  System assemble(const Eigen::VectorXd& y, bool convection = true) const;
  Eigen::VectorXd residual(const Eigen::VectorXd& y, bool convection = true) const;

  /// (nu/2) int Dv : Dv and its derivative with respect to y.
  double objective(const Eigen::VectorXd& y) const;
  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& y) const;

  /// Euclidean norm of the residual restricted to non-Dirichlet rows.
  double free_residual_norm(const Eigen::VectorXd& residual) const;

 private:
  struct Reference {
    std::vector<std::array<double, 6>> phi;
    std::vector<std::array<Eigen::Vector2d, 6>> grad;
    std::vector<std::array<double, 3>> psi;
  };

  Eigen::VectorXd boundary_load() const;

  FlowSettings settings_;
  FunctionSpace velocity_;
  FunctionSpace pressure_;
  DofMap dofs_;
  Assembler assembler_;
  const QuadratureRule* rule_;
  Reference ref_;
  std::vector<int> dirichlet_dofs_;
  std::vector<double> dirichlet_values_;
  std::vector<char> is_dirichlet_;
};

FlowDiscretization::System assemble_ns_system(const FlowDiscretization& disc, const FlowState& state);

/// Stokes warm start followed by Newton. Throws NonconvergenceError after
/// max_iterations Newton steps.
FlowState solve_flow(const FlowDiscretization& disc);
FlowState solve_flow(const Mesh& mesh, const FlowSettings& settings);

double energy_dissipation(const FlowDiscretization& disc, const FlowState& state);

/// Solves J^T y* = -dJ/dy with homogeneous Dirichlet rows.
AdjointState solve_adjoint(const FlowDiscretization& disc, const FlowState& state);

/// Derivative of the reduced objective with respect to the vertex coordinates,
/// two entries per mesh node, zero on Inflow, Outflow and Wall nodes.
Eigen::VectorXd shape_gradient(const FlowDiscretization& disc, const FlowState& state,
                               const AdjointState& adjoint);

/// Velocity at the mesh nodes, two entries per node.
Eigen::VectorXd nodal_velocity(const FlowDiscretization& disc, const FlowState& state);

}  // namespace lipshape

// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include "lipshape/error.hpp"
#include "lipshape/flow.hpp"

namespace lipshape {

AdjointState solve_adjoint(const FlowDiscretization& disc, const FlowState& state) {
  const Eigen::VectorXd y = disc.pack(state.v, state.q);
  auto sys = disc.assemble(y);
  Eigen::VectorXd rhs = -disc.objective_gradient(y);
  const std::vector<double> zeros(disc.dirichlet_dofs().size(), 0.0);
  apply_dirichlet(sys.jacobian, rhs, disc.dirichlet_dofs(), zeros);

  SparseDirectSolver solver;
  solver.factorize(sys.jacobian);
  const Eigen::VectorXd ys = solver.solve_transpose(rhs);

  AdjointState adj;
  adj.v = disc.velocity_part(ys);
  adj.q = disc.pressure_part(ys);
  adj.residual_norm = (sys.jacobian.transpose_times(ys) - rhs).norm();
  return adj;
}

}  // namespace lipshape

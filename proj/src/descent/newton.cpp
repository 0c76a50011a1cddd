// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include "lipshape/descent.hpp"
#include "lipshape/error.hpp"
#include "lipshape/log.hpp"

namespace lipshape {

DescentResult newton_descent(const DescentDiscretization& disc, const Eigen::VectorXd& u0,
                             double sigma, const Eigen::VectorXd& G, double p,
                             const NewtonOptions& options) {
  require(u0.size() == disc.num_dofs(), ErrorKind::Contract, "initial displacement size mismatch");
  require(options.tolerance > 0.0 && options.epsilon > 0.0 && options.max_iterations > 0,
          ErrorKind::Parameter, "invalid Newton options");
  require(is_admissible(disc, u0), ErrorKind::SingularConfiguration,
          "initial displacement inverts an element");

  DescentResult out;
  out.u = u0;
  out.lambda = Multipliers::Zero();
  StageRecord stage;
  stage.p = p;

  double update = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Defect defect = assemble_defect(disc, out.u, out.lambda, p, sigma, G);
    SaddlePointSystem system;
    system.A = assemble_hessian(disc, out.u, out.lambda, p, options.epsilon);
    system.B = assemble_constraint_jacobian(disc, out.u);
    system.r_u = defect.r_u;
    system.r_lambda = defect.r_lambda;
    const InnerSolver inner(system.A, options.inner_mode, options.inner_tolerance);

    SaddleSolution step;
    if (options.use_gmres) {
      step = schur_gmres(inner, system.B, system.r_u, system.r_lambda,
                         Eigen::VectorXd::Zero(system.B.cols()), static_cast<int>(system.B.cols()), 1e-13);
      stage.linear_iterations += step.iterations;
    } else {
      step = solve_saddle_direct(system, inner);
    }
    stage.inner_solves += step.inner_solves;
    stage.linear_iterations += inner.iterations();

    double scale = 1.0;
    Eigen::VectorXd trial = out.u + step.du;
    int halvings = 0;
    while (!is_admissible(disc, trial)) {
      if (halvings == options.max_halvings) {
        std::ostringstream msg;
        msg << "Newton step inverts elements after " << halvings << " halvings at p = " << p;
        throw Error(ErrorKind::SingularConfiguration, msg.str());
      }
      ++halvings;
      scale *= 0.5;
      trial = out.u + scale * step.du;
    }
    stage.halvings += halvings;

    out.u = trial;
    out.lambda += scale * step.dlambda;
    update = w1p_norm(disc, scale * step.du, p) + scale * step.dlambda.norm();
    stage.newton_iterations = it;
    stage.last_update = update;
    log::debug("newton p=" + std::to_string(p) + " it=" + std::to_string(it) +
               " update=" + std::to_string(update));
    if (update < options.tolerance) {
      out.stages.push_back(stage);
      return out;
    }
  }
  std::ostringstream msg;
  msg << "Newton iteration for p = " << p << " did not converge in " << options.max_iterations
      << " iterations";
  throw NonconvergenceError(msg.str(), update);
}

std::vector<double> p_sequence(double p_init, double p_inc, double p_max) {
  require(p_init >= 2.0 && p_inc > 0.0 && p_max >= p_init, ErrorKind::Parameter,
          "p sequence needs p_init >= 2, p_inc > 0 and p_max >= p_init");
  std::vector<double> seq;
  for (int k = 0;; ++k) {
    const double p = p_init + k * p_inc;
    if (p >= p_max - 1e-12) break;
    seq.push_back(p);
  }
  seq.push_back(p_max);
  return seq;
}

DescentResult p_continuation(const DescentDiscretization& disc, double sigma,
                             const Eigen::VectorXd& G, double p_init, double p_inc,
                             double p_max, const NewtonOptions& options) {
  DescentResult out;
  out.u = Eigen::VectorXd::Zero(disc.num_dofs());
  for (double p : p_sequence(p_init, p_inc, p_max)) {
    DescentResult stage = newton_descent(disc, out.u, sigma, G, p, options);
    out.u = std::move(stage.u);
    out.lambda = stage.lambda;
    out.stages.insert(out.stages.end(), stage.stages.begin(), stage.stages.end());
  }
  return out;
}

}  // namespace lipshape

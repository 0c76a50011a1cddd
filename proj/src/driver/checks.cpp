// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/LU>
#include <cmath>
#include <random>
#include <sstream>

#include "lipshape/descent.hpp"
#include "lipshape/driver.hpp"
#include "lipshape/error.hpp"
#include "lipshape/flow.hpp"
#include "lipshape/saddle.hpp"

namespace lipshape {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a = -1.0, double b = 1.0) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

double rel_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

CheckResult make(std::string name, double error, double limit) {
  std::ostringstream s;
  s << "error " << error << " (limit " << limit << ")";
  return {std::move(name), error <= limit, s.str()};
}

/// Structured rectangle with diagonals, markers by side: left, right,
/// bottom/top.
Mesh rectangle(double x0, double x1, double y0, double y1, int nx, int ny, Marker left,
               Marker right, Marker sides) {
  Mesh m;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) m.nodes.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny);
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  for (int i = 0; i < nx; ++i) {
    m.boundary_edges.push_back({id(i, 0), id(i + 1, 0), sides});
    m.boundary_edges.push_back({id(i + 1, ny), id(i, ny), sides});
  }
  for (int j = 0; j < ny; ++j) {
    m.boundary_edges.push_back({id(0, j + 1), id(0, j), left});
    m.boundary_edges.push_back({id(nx, j), id(nx, j + 1), right});
  }
  m.validate();
  return m;
}

GridHierarchy small_benchmark() {
  BenchmarkGeometry g;
  g.length = 4.0;
  g.height = 2.0;
  g.obstacle_edge = 0.5;
  g.base_resolution = 4;
  return generate_benchmark_mesh(g);
}

Eigen::VectorXd random_free(const Mesh& mesh, Rng& rng, double scale) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * mesh.num_nodes());
  const auto fixed = mesh.fixed_nodes();
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (fixed[i]) continue;
    u[2 * i] = scale * uniform(rng);
    u[2 * i + 1] = scale * uniform(rng);
  }
  return u;
}

void derivative_checks(std::uint64_t seed, std::vector<CheckResult>& out) {
  Rng rng(seed);
  const GridHierarchy h = small_benchmark();
  const Mesh& mesh = h.finest();
  const DescentDiscretization disc(mesh);
  const Eigen::VectorXd G = random_free(mesh, rng, 1.0);
  const double fd = 1e-6;

  for (double p : {2.0, 2.57, 3.5, 4.5}) {
    const Eigen::VectorXd u = random_free(mesh, rng, 0.01);
    const Multipliers lambda(uniform(rng), uniform(rng), uniform(rng));
    const Defect defect = assemble_defect(disc, u, lambda, p, 0.7, G);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const Eigen::VectorXd d = random_free(mesh, rng, 1.0);
      const double numeric = (lagrangian(disc, u + fd * d, lambda, p, 0.7, G) -
                              lagrangian(disc, u - fd * d, lambda, p, 0.7, G)) / (2 * fd);
      worst = std::max(worst, std::abs(-defect.r_u.dot(d) - numeric) / std::abs(numeric));
    }
    out.push_back(make("defect vs Lagrangian, p = " + std::to_string(p).substr(0, 4), worst, 1e-5));
  }

  {
    const double p = 4.5;
    const Eigen::VectorXd u = random_free(mesh, rng, 0.01);
    const Multipliers lambda(uniform(rng), uniform(rng), uniform(rng));
    const SparseMatrix A = assemble_hessian(disc, u, lambda, p, 1e-8);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Eigen::VectorXd d = random_free(mesh, rng, 1.0);
      const Eigen::VectorXd numeric = -(assemble_defect(disc, u + fd * d, lambda, p, 0.0, G).r_u -
                                        assemble_defect(disc, u - fd * d, lambda, p, 0.0, G).r_u) / (2 * fd);
      worst = std::max(worst, rel_error(A * d, numeric));
    }
    out.push_back(make("Hessian action vs defect, p = 4.5", worst, 1e-4));
  }

  {
    const Eigen::VectorXd u = random_free(mesh, rng, 0.01);
    const Eigen::MatrixXd B = assemble_constraint_jacobian(disc, u);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Eigen::VectorXd d = random_free(mesh, rng, 1.0);
      const Eigen::Vector3d numeric =
          (constraint_values(disc, u + fd * d) - constraint_values(disc, u - fd * d)) / (2 * fd);
      worst = std::max(worst, rel_error(B.transpose() * d, numeric));
    }
    out.push_back(make("constraint Jacobian vs constraints", worst, 1e-6));
  }

  FlowSettings fs;
  fs.nu = 0.1;
  fs.inlet_height = 2.0;
  fs.tolerance = 1e-12;
  {
    const FlowDiscretization flow(mesh, fs);
    Eigen::VectorXd y(flow.num_dofs());
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = uniform(rng);
    const auto sys = flow.assemble(y);
    const Eigen::MatrixXd J = sys.jacobian.to_dense();
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const int j = static_cast<int>(std::uniform_int_distribution<int>(0, flow.num_dofs() - 1)(rng));
      Eigen::VectorXd yp = y;
      Eigen::VectorXd ym = y;
      yp[j] += fd;
      ym[j] -= fd;
      const Eigen::VectorXd numeric = (flow.residual(yp) - flow.residual(ym)) / (2 * fd);
      worst = std::max(worst, rel_error(J.col(j), numeric));
    }
    out.push_back(make("flow Jacobian vs residual", worst, 1e-6));
  }

  {
    GridHierarchy work = h;
    const FlowDiscretization flow(work.finest(), fs);
    const FlowState state = solve_flow(flow);
    const Eigen::VectorXd grad = shape_gradient(flow, state, solve_adjoint(flow, state));
    const CoordinateSnapshot base = work.snapshot();
    auto objective_at = [&](const Eigen::VectorXd& shift) {
      work.restore(base);
      work.apply_deformation(shift);
      const double value = energy_dissipation(flow, solve_flow(flow));
      work.restore(base);
      return value;
    };
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Eigen::VectorXd d = random_free(work.finest(), rng, 1.0);
      const double numeric = (objective_at(fd * d) - objective_at(-fd * d)) / (2 * fd);
      worst = std::max(worst, std::abs(grad.dot(d) - numeric) / std::abs(numeric));
    }
    out.push_back(make("shape gradient vs reduced objective", worst, 1e-4));
  }
}

SparseMatrix random_stiffness(int nx, int ny, Rng& rng) {
  const Mesh m = rectangle(0.0, 1.0, 0.0, 1.0, nx, ny, Marker::Wall, Marker::Wall, Marker::Wall);
  DofMap dofs;
  dofs.num_dofs = m.num_nodes();
  dofs.per_element = 3;
  for (const auto& t : m.triangles) dofs.indices.insert(dofs.indices.end(), t.begin(), t.end());
  std::vector<double> kappa(m.num_triangles());
  for (auto& k : kappa) k = uniform(rng, 0.5, 2.0);
  SparseMatrix A = assemble_operator(dofs, dofs, [&](int t, Eigen::MatrixXd& local) {
    const ElementGeometry g = element_geometry(m.corners(t));
    const auto& ref = p1_reference_gradients();
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        local(a, b) = kappa[t] * 0.5 * g.det * (g.inverse_transpose * ref[a]).dot(g.inverse_transpose * ref[b]);
      }
    }
  });
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A.rows());
  std::vector<int> fixed;
  for (int i = 0; i <= nx; ++i) fixed.push_back(i);
  apply_dirichlet(A, rhs, fixed, std::vector<double>(fixed.size(), 0.0));
  return A;
}

void saddle_checks(std::uint64_t seed, std::vector<CheckResult>& out) {
  Rng rng(seed);
  double worst_direct = 0.0;
  double worst_gmres = 0.0;
  int worst_iters = 0;
  for (int k = 0; k < 5; ++k) {
    SaddlePointSystem sys;
    sys.A = random_stiffness(10 + k, 12, rng);
    const int n = sys.A.rows();
    const int m = 3 + k % 2;
    sys.B = Eigen::MatrixXd::Zero(n, m);
    for (int i = 13 + k; i < n; ++i) {
      for (int j = 0; j < m; ++j) sys.B(i, j) = uniform(rng);
    }
    sys.r_u = Eigen::VectorXd::Zero(n);
    for (int i = 13 + k; i < n; ++i) sys.r_u[i] = uniform(rng);
    sys.r_lambda = Eigen::VectorXd::NullaryExpr(m, [&] { return uniform(rng); });

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
    K.topLeftCorner(n, n) = sys.A.to_dense();
    K.topRightCorner(n, m) = sys.B;
    K.bottomLeftCorner(m, n) = sys.B.transpose();
    Eigen::VectorXd rhs(n + m);
    rhs << sys.r_u, sys.r_lambda;
    const Eigen::VectorXd exact = K.fullPivLu().solve(rhs);

    const InnerSolver inner(sys.A, InnerMode::Direct);
    const SaddleSolution d = solve_saddle_direct(sys, inner);
    Eigen::VectorXd xd(n + m);
    xd << d.du, d.dlambda;
    worst_direct = std::max(worst_direct, rel_error(xd, exact));
    const SaddleSolution g = schur_gmres(inner, sys.B, sys.r_u, sys.r_lambda, Eigen::VectorXd::Zero(m), m, 1e-14);
    Eigen::VectorXd xg(n + m);
    xg << g.du, g.dlambda;
    worst_gmres = std::max(worst_gmres, rel_error(xg, exact));
    worst_iters = std::max(worst_iters, g.iterations - m);
  }
  out.push_back(make("direct Schur solve vs dense KKT", worst_direct, 1e-8));
  out.push_back(make("Schur GMRES vs dense KKT", worst_gmres, 1e-8));
  out.push_back({"Schur GMRES iterations <= m", worst_iters <= 0, "excess " + std::to_string(worst_iters)});
}

void determinant_checks(std::uint64_t seed, std::vector<CheckResult>& out) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int d = 2 + k % 2;
    Eigen::MatrixXd v(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) v(i, j) = uniform(rng);
    }
    const double t = uniform(rng, 0.0, 2.0);
    const auto f = det_expansion_coeffs(v);
    double sum = 0.0;
    for (int i = d; i >= 0; --i) sum = sum * t + f[i];
    const Eigen::MatrixXd F = Eigen::MatrixXd::Identity(d, d) + t * v;
    worst = std::max(worst, std::abs(sum - F.determinant()));
  }
  out.push_back(make("determinant expansion, 1000 samples", worst, 1e-12));
}

double velocity_l2_error(const FlowDiscretization& flow, const FlowState& state, const VectorField& exact) {
  const Mesh& m = flow.mesh();
  const QuadratureRule& rule = quadrature_rule(8);
  double sum = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto c = m.corners(t);
    const double area = m.signed_area(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.barycentric[q];
      const FieldSample s = evaluate_field(flow.velocity_space(), state.v, t, l);
      const Point x = l[0] * c[0] + l[1] * c[1] + l[2] * c[2];
      sum += area * rule.weights[q] * (s.value - exact(x)).squaredNorm();
    }
  }
  return std::sqrt(sum);
}

void flow_checks(std::uint64_t, std::vector<CheckResult>& out) {
  const double nu = 0.5;
  auto v_exact = [](const Point& x) {
    return Eigen::Vector2d(std::sin(x.x()) * std::sin(x.y()), std::cos(x.x()) * std::cos(x.y()));
  };
  FlowSettings fs;
  fs.nu = nu;
  fs.dirichlet = v_exact;
  fs.forcing = [nu](const Point& x) {
    const double sx = std::sin(x.x()), cx = std::cos(x.x()), sy = std::sin(x.y()), cy = std::cos(x.y());
    const Eigen::Vector2d v(sx * sy, cx * cy);
    Eigen::Matrix2d Dv;
    Dv << cx * sy, sx * cy, -sx * cy, -cx * sy;
    return Eigen::Vector2d(2.0 * nu * v + Dv * v + Eigen::Vector2d(cx * cy, -sx * sy));
  };
  fs.outflow_traction = [nu](const Point& x) {
    const double sx = std::sin(x.x()), cx = std::cos(x.x()), sy = std::sin(x.y()), cy = std::cos(x.y());
    return Eigen::Vector2d(nu * cx * sy - sx * cy, -nu * sx * cy);
  };
  std::vector<double> errors;
  double worst_div = 0.0;
  for (int n : {4, 8, 16}) {
    const Mesh m = rectangle(0.0, 1.0, 0.0, 1.0, n, n, Marker::Inflow, Marker::Outflow, Marker::Wall);
    const FlowDiscretization flow(m, fs);
    const FlowState state = solve_flow(flow);
    errors.push_back(velocity_l2_error(flow, state, v_exact));
    const Eigen::VectorXd r = flow.residual(flow.pack(state.v, state.q));
    worst_div = std::max(worst_div, r.tail(flow.pressure_space().num_dofs()).cwiseAbs().maxCoeff());
  }
  const double order = std::log2(errors[1] / errors[2]);
  std::ostringstream s;
  s << "order " << order << " (errors " << errors[0] << ", " << errors[1] << ", " << errors[2] << ")";
  out.push_back({"manufactured solution velocity order >= 2.5", order >= 2.5, s.str()});
  out.push_back(make("discrete divergence residual", worst_div, 1e-10));
}

}  // namespace

std::vector<CheckResult> run_check_suite(std::string_view suite, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "derivatives") { derivative_checks(seed, out); known = true; }
  if (all || suite == "saddle") { saddle_checks(seed, out); known = true; }
  if (all || suite == "determinant") { determinant_checks(seed, out); known = true; }
  if (all || suite == "flow") { flow_checks(seed, out); known = true; }
  if (!known) fail(ErrorKind::Parameter, "unknown check suite '" + std::string(suite) + "'");
  return out;
}

}  // namespace lipshape

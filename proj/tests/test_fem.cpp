// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "lipshape/error.hpp"
#include "lipshape/fem.hpp"
#include "test_support.hpp"

using namespace lipshape;
using lipshape::testing::rectangle;

namespace {

// a! b! / (a + b + 2)!
double monomial_integral(int a, int b) {
  double v = 1.0;
  for (int k = 1; k <= a; ++k) v *= k;
  for (int k = 1; k <= b; ++k) v *= k;
  for (int k = 1; k <= a + b + 2; ++k) v /= k;
  return v;
}

double rule_integral(const QuadratureRule& rule, int a, int b) {
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point xi = rule.reference_point(q);
    s += rule.weights[q] * std::pow(xi.x(), a) * std::pow(xi.y(), b);
  }
  return 0.5 * s;
}

Mesh reference_triangle() {
  Mesh m;
  m.nodes = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.boundary_edges = {{0, 1, Marker::Wall}, {1, 2, Marker::Wall}, {2, 0, Marker::Wall}};
  return m;
}

DofMap p1_dofs(const Mesh& m) {
  DofMap d;
  d.num_dofs = m.num_nodes();
  d.per_element = 3;
  for (const auto& t : m.triangles) d.indices.insert(d.indices.end(), t.begin(), t.end());
  return d;
}

MatrixKernel p1_stiffness(const Mesh& m) {
  return [&m](int t, Eigen::MatrixXd& local) {
    const ElementGeometry g = element_geometry(m.corners(t));
    const auto& ref = p1_reference_gradients();
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        local(a, b) = 0.5 * g.det * (g.inverse_transpose * ref[a]).dot(g.inverse_transpose * ref[b]);
      }
    }
  };
}

MatrixKernel p1_mass(const Mesh& m) {
  return [&m](int t, Eigen::MatrixXd& local) {
    const ElementGeometry g = element_geometry(m.corners(t));
    const QuadratureRule& rule = quadrature_rule(2);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto phi = p1_values(rule.reference_point(q));
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) local(a, b) += 0.5 * g.det * rule.weights[q] * phi[a] * phi[b];
      }
    }
  };
}

VectorKernel p1_load(const Mesh& m, std::function<double(const Point&)> f) {
  return [&m, f](int t, Eigen::VectorXd& local) {
    const auto c = m.corners(t);
    const ElementGeometry g = element_geometry(c);
    const QuadratureRule& rule = quadrature_rule(3);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.barycentric[q];
      const Point x = l[0] * c[0] + l[1] * c[1] + l[2] * c[2];
      for (int a = 0; a < 3; ++a) local[a] += 0.5 * g.det * rule.weights[q] * l[a] * f(x);
    }
  };
}

}  // namespace

TEST_CASE("element geometry of reference, scaled and collinear triangles") {
  const ElementGeometry id = element_geometry({Point(0, 0), Point(1, 0), Point(0, 1)});
  CHECK((id.jacobian - Eigen::Matrix2d::Identity()).norm() == 0.0);
  CHECK(id.det == 1.0);

  const ElementGeometry s = element_geometry({Point(0, 0), Point(2, 0), Point(0, 2)});
  CHECK(s.det == doctest::Approx(4.0));

  const ElementGeometry g = element_geometry({Point(0.3, -0.1), Point(1.7, 0.4), Point(0.2, 0.9)});
  const Eigen::Matrix2d prod = g.jacobian * g.inverse_transpose.transpose();
  CHECK((prod - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-14);

  try {
    element_geometry({Point(0, 0), Point(1, 1), Point(2, 2)});
    FAIL("expected degenerate-element error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
  CHECK_THROWS_AS(element_geometry({Point(0, 0), Point(0, 1), Point(1, 0)}), Error);
}

TEST_CASE("quadrature rules are exact to their degree") {
  for (int degree = 1; degree <= 10; ++degree) {
    const QuadratureRule& rule = quadrature_rule(degree);
    CAPTURE(degree);
    CHECK(rule.degree >= degree);
    double wsum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(std::abs(wsum - 1.0) <= 1e-14);
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        CHECK(std::abs(rule_integral(rule, a, b) - monomial_integral(a, b)) <= 1e-14);
      }
    }
  }
  CHECK(quadrature_rule(1).size() == 1);
  const QuadratureRule& five = quadrature_rule(5);
  CHECK(std::abs(rule_integral(five, 5, 0) - monomial_integral(5, 0)) <= 1e-15);
  CHECK(std::abs(rule_integral(five, 6, 0) - monomial_integral(6, 0)) > 1e-8);
  CHECK(reference_monomial_integral(2, 3) == doctest::Approx(monomial_integral(2, 3)).epsilon(1e-15));

  CHECK_THROWS_AS(quadrature_rule(0), Error);
  CHECK_THROWS_AS(quadrature_rule(11), Error);
}

TEST_CASE("shape functions form a partition of unity") {
  for (int degree : {2, 5, 8}) {
    const QuadratureRule& rule = quadrature_rule(degree);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point xi = rule.reference_point(q);
      const auto p1 = p1_values(xi);
      const auto p2 = p2_values(xi);
      CHECK(std::abs(p1[0] + p1[1] + p1[2] - 1.0) <= 1e-14);
      double s = 0.0;
      for (double v : p2) s += v;
      CHECK(std::abs(s - 1.0) <= 1e-14);
      Eigen::Vector2d g = Eigen::Vector2d::Zero();
      for (const auto& v : p2_reference_gradients(xi)) g += v;
      CHECK(g.norm() <= 1e-13);
    }
  }
  // nodal property of P2 at the vertices and edge midpoints
  const Point pts[6] = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};
  for (int i = 0; i < 6; ++i) {
    const auto v = p2_values(pts[i]);
    for (int j = 0; j < 6; ++j) CHECK(std::abs(v[j] - (i == j ? 1.0 : 0.0)) <= 1e-15);
  }
}

TEST_CASE("function space dof counts and locations") {
  const Mesh m = rectangle(0, 1, 0, 1, 3, 2);
  const EdgeTable edges(m);
  const FunctionSpace s1(m, SpaceKind::P1Scalar);
  const FunctionSpace v1(m, SpaceKind::P1Vector);
  const FunctionSpace v2(m, SpaceKind::P2Vector);
  CHECK(s1.num_dofs() == m.num_nodes());
  CHECK(v1.num_dofs() == 2 * m.num_nodes());
  CHECK(v2.num_dofs() == 2 * (m.num_nodes() + edges.num_edges()));
  CHECK(v2.dofs().per_element == 12);

  std::vector<int> seen(v2.num_dofs(), 0);
  for (int d : v2.dofs().indices) seen[d] = 1;
  for (int d = 0; d < v2.num_dofs(); ++d) CHECK(seen[d] == 1);

  const auto loc = v2.locate(2 * m.num_nodes() + 1);
  CHECK(loc.on_edge);
  CHECK(loc.entity == 0);
  CHECK(loc.component == 1);
  const auto e = edges.edge(0);
  CHECK((v2.scalar_dof_point(m.num_nodes()) - 0.5 * (m.nodes[e[0]] + m.nodes[e[1]])).norm() <= 1e-15);
}

TEST_CASE("evaluate_field reproduces quadratics and linear interpolants") {
  const Mesh m = rectangle(0, 1, 0, 1, 2, 2);
  const FunctionSpace v2(m, SpaceKind::P2Vector);
  const int ns = v2.num_dofs() / 2;
  Eigen::VectorXd c(v2.num_dofs());
  for (int s = 0; s < ns; ++s) {
    const Point x = v2.scalar_dof_point(s);
    c[2 * s] = x.x() * x.x();
    c[2 * s + 1] = x.x() * x.y();
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    double a = u(rng), b = u(rng);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    const std::array<double, 3> l{1.0 - a - b, a, b};
    const int t = k % m.num_triangles();
    const auto corners = m.corners(t);
    const Point x = l[0] * corners[0] + l[1] * corners[1] + l[2] * corners[2];
    const FieldSample f = evaluate_field(v2, c, t, l);
    CHECK(std::abs(f.value[0] - x.x() * x.x()) <= 1e-14);
    CHECK(std::abs(f.value[1] - x.x() * x.y()) <= 1e-14);
    CHECK(std::abs(f.gradient(0, 0) - 2 * x.x()) <= 1e-13);
    CHECK(std::abs(f.gradient(0, 1)) <= 1e-13);
    CHECK(std::abs(f.gradient(1, 0) - x.y()) <= 1e-13);
    CHECK(std::abs(f.gradient(1, 1) - x.x()) <= 1e-13);
  }

  const Mesh tri = reference_triangle();
  const FunctionSpace s1(tri, SpaceKind::P1Scalar);
  Eigen::VectorXd q(3);
  for (int i = 0; i < 3; ++i) q[i] = tri.nodes[i].x() * tri.nodes[i].x();
  const FieldSample mid = evaluate_field(s1, q, 0, {0.5, 0.5, 0.0});
  CHECK(mid.value[0] == doctest::Approx(0.5).epsilon(1e-15));
  const FieldSample other = evaluate_field(s1, q, 0, {0.2, 0.3, 0.5});
  CHECK((mid.gradient - other.gradient).norm() == 0.0);

  CHECK_THROWS_AS(evaluate_field(s1, q, 1, {1, 0, 0}), Error);
  CHECK_THROWS_AS(evaluate_field(s1, Eigen::VectorXd::Zero(2), 0, {1, 0, 0}), Error);
}

TEST_CASE("P1 mass and stiffness on the reference triangle") {
  const Mesh m = reference_triangle();
  const SparseMatrix mass = assemble_operator(p1_dofs(m), p1_dofs(m), p1_mass(m));
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) CHECK(std::abs(mass.coeff(a, b) - (a == b ? 2.0 : 1.0) / 24.0) <= 1e-16);
  }
  const SparseMatrix k = assemble_operator(p1_dofs(m), p1_dofs(m), p1_stiffness(m));
  for (int a = 0; a < 3; ++a) {
    double row = 0.0;
    for (double v : k.row_values(a)) row += v;
    CHECK(std::abs(row) <= 1e-15);
  }
}

TEST_CASE("global stiffness is symmetric and assembly is reproducible") {
  const Mesh m = rectangle(0, 1, 0, 1, 1, 1);
  const DofMap d = p1_dofs(m);
  SparseMatrix k = assemble_operator(d, d, p1_stiffness(m));
  CHECK(k.symmetry_defect() <= 1e-14);
  CHECK_NOTHROW(k.mark_symmetric());
  CHECK(k.symmetric());

  const Mesh big = rectangle(0, 2, 0, 1, 7, 5);
  const Assembler assembler(p1_dofs(big), p1_dofs(big));
  const SparseMatrix a1 = assembler.assemble_matrix(p1_stiffness(big));
  const SparseMatrix a2 = assembler.assemble_matrix(p1_stiffness(big));
  CHECK(a1.values() == a2.values());
  CHECK(a1.columns() == a2.columns());
}

TEST_CASE("functional assembly over the unit square") {
  const Mesh m = rectangle(0, 1, 0, 1, 4, 4);
  const DofMap d = p1_dofs(m);
  CHECK(std::abs(assemble_functional(d, p1_load(m, [](const Point&) { return 1.0; })).sum() - 1.0) <= 1e-14);
  CHECK(std::abs(assemble_functional(d, p1_load(m, [](const Point& x) { return x.x(); })).sum() - 0.5) <= 1e-12);
  CHECK(assemble_functional(d, [](int, Eigen::VectorXd&) {}).norm() == 0.0);
}

TEST_CASE("non-finite kernel output names the element") {
  const Mesh m = rectangle(0, 1, 0, 1, 1, 1);
  const DofMap d = p1_dofs(m);
  try {
    assemble_operator(d, d, [](int t, Eigen::MatrixXd& local) {
      if (t == 1) local(0, 0) = std::numeric_limits<double>::quiet_NaN();
    });
    FAIL("expected assembly error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Assembly);
    CHECK(std::string(e.what()).find("element 1") != std::string::npos);
  }
  CHECK_THROWS_AS(assemble_functional(d, [](int, Eigen::VectorXd& local) {
                    local[0] = std::numeric_limits<double>::infinity();
                  }),
                  Error);
}

TEST_CASE("Dirichlet elimination") {
  {
    const Mesh m = rectangle(0, 1, 0, 1, 2, 2);
    const DofMap d = p1_dofs(m);
    SparseMatrix k = assemble_operator(d, d, p1_stiffness(m));
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(k.rows());
    std::vector<int> all(k.rows());
    for (int i = 0; i < k.rows(); ++i) all[i] = i;
    apply_dirichlet(k, rhs, all, std::vector<double>(all.size(), 0.0));
    CHECK((k.to_dense() - Eigen::MatrixXd::Identity(k.rows(), k.cols())).norm() == 0.0);
    CHECK(rhs.norm() == 0.0);
  }
  {
    SparseMatrix a = SparseMatrix::from_dense((Eigen::Matrix2d() << 2, 1, 1, 2).finished());
    a.mark_symmetric();
    Eigen::VectorXd b(2);
    b << 5, 7;
    const int dof[] = {0};
    const double val[] = {1.0};
    apply_dirichlet(a, b, dof, val);
    CHECK(a.coeff(0, 0) == 1.0);
    CHECK(a.coeff(0, 1) == 0.0);
    CHECK(a.coeff(1, 0) == 0.0);
    CHECK(a.coeff(1, 1) == 2.0);
    CHECK(b[0] == 1.0);
    CHECK(b[1] == 6.0);
    CHECK(a.symmetric());
  }
  {
    const Mesh m = rectangle(0, 1, 0, 1, 3, 3);
    const DofMap d = p1_dofs(m);
    SparseMatrix k = assemble_operator(d, d, p1_stiffness(m));
    k.mark_symmetric();
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(k.rows());
    const int dofs[] = {0, 5, 7};
    const double vals[] = {1.0, -2.0, 0.5};
    apply_dirichlet(k, rhs, dofs, vals);
    CHECK(k.symmetry_defect() == 0.0);
    CHECK(k.symmetric());

    const int dup[] = {1, 1};
    const double conflicting[] = {1.0, 2.0};
    try {
      apply_dirichlet(k, rhs, dup, conflicting);
      FAIL("expected contract error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Contract);
    }
  }
}

TEST_CASE("sparse matrix validation and direct solves") {
  CHECK_NOTHROW(SparseMatrix(2, 2, {0, 1, 2}, {1, 0}, {1.0, 1.0}));
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 2, 2}, {0, 0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1, 2}, {0, 2}, {1.0, 1.0}), Error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(30, 30);
  for (int i = 0; i < 30; ++i) {
    dense(i, i) = 4.0;
    dense(i, (i + 1) % 30) = u(rng);
    dense(i, (i + 7) % 30) = u(rng);
  }
  const SparseMatrix a = SparseMatrix::from_dense(dense);
  Eigen::VectorXd b(30);
  for (auto& v : b) v = u(rng);
  CHECK((a * b - dense * b).norm() <= 1e-14);
  CHECK((a.transpose_times(b) - dense.transpose() * b).norm() <= 1e-14);

  SparseDirectSolver solver;
  solver.factorize(a);
  const Eigen::VectorXd x = solver.solve(b);
  const Eigen::VectorXd y = solver.solve_transpose(b);
  CHECK((dense * x - b).norm() <= 1e-12);
  CHECK((dense.transpose() * y - b).norm() <= 1e-12);

  Eigen::MatrixXd singular = dense;
  singular.row(3).setZero();
  SparseDirectSolver bad;
  try {
    bad.factorize(SparseMatrix::from_dense(singular));
    FAIL("expected solver error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Solver);
  }
}

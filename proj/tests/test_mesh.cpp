// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lipshape/error.hpp"
#include "lipshape/log.hpp"
#include "lipshape/mesh.hpp"
#include "lipshape/mesh_io.hpp"
#include "test_support.hpp"

using namespace lipshape;
using lipshape::testing::rectangle;

namespace {

const char* kSquareMsh = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
1 0 0 0
2 1 0 0
3 1 1 0
4 0 1 0
$EndNodes
$Elements
6
1 1 2 3 1 1 2
2 1 2 2 1 2 3
3 1 2 3 1 3 4
4 1 2 1 1 4 1
5 2 2 0 1 1 2 3
6 2 2 0 1 1 3 4
$EndElements
)";

double shoelace(const std::vector<Point>& loop) {
  double a = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point& p = loop[i];
    const Point& q = loop[(i + 1) % loop.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Polygon square(double x0, double y0, double edge) {
  return Polygon{{{x0, y0}, {x0 + edge, y0}, {x0 + edge, y0 + edge}, {x0, y0 + edge}}};
}

BenchmarkGeometry benchmark(int n0 = 4) {
  BenchmarkGeometry g;
  g.base_resolution = n0;
  return g;
}

}  // namespace

TEST_CASE("benchmark mesh has the wetted area of channel minus square") {
  const GridHierarchy h = generate_benchmark_mesh(benchmark());
  const Mesh& m = h.finest();
  double area = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto c = m.corners(t);
    const Eigen::Vector2d e1 = c[1] - c[0], e2 = c[2] - c[0];
    area += 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
  }
  CHECK(std::abs(area - (20.0 * 6.0 - 0.4 * 0.4)) <= 1e-10);
  CHECK(quality_report(m).min_angle > 0.0);
  CHECK_NOTHROW(m.validate());

  const Polygon obstacle = obstacle_polygon(m);
  CHECK(std::abs(obstacle.area() - 0.16) <= 1e-12);
  CHECK(std::abs(area - (120.0 - shoelace(obstacle.vertices))) <= 1e-12);

  const DomainMoments moments = domain_moments(m);
  CHECK(moments.first_moment.norm() <= 1e-12);
}

TEST_CASE("graded benchmark mesh is symmetric, isotropic and resolves the obstacle") {
  for (int n0 : {4, 5, 8}) {
    const GridHierarchy h = generate_benchmark_mesh(benchmark(n0));
    const Mesh& m = h.finest();
    CAPTURE(n0);
    int obstacle_edges = 0;
    for (const auto& e : m.boundary_edges) {
      if (e.marker != Marker::Obstacle) continue;
      ++obstacle_edges;
      CHECK(std::abs((m.nodes[e.a] - m.nodes[e.b]).norm() - 0.4 / n0) <= 1e-12);
    }
    CHECK(obstacle_edges == 4 * n0);
    // clipped root cells in the domain corners are at most 3:1
    CHECK(quality_report(m).min_angle >= std::atan(1.0 / 3.0) * 180.0 / M_PI);
    if (n0 % 2 == 0) {
      // every node has its mirror images about both axes
      std::set<std::pair<long long, long long>> keys;
      auto key = [](double x, double y) { return std::pair{std::llround(x * 1e9), std::llround(y * 1e9)}; };
      for (const Point& p : m.nodes) keys.insert(key(p.x(), p.y()));
      for (const Point& p : m.nodes) {
        CHECK(keys.count(key(-p.x(), p.y())) == 1);
        CHECK(keys.count(key(p.x(), -p.y())) == 1);
      }
    }
  }
  // a smaller grading keeps more cells
  BenchmarkGeometry fine = benchmark(4);
  fine.grading = 0.2;
  CHECK(generate_benchmark_mesh(fine).finest().num_triangles() >
        generate_benchmark_mesh(benchmark(4)).finest().num_triangles());
}

TEST_CASE("minimal benchmark mesh closes the obstacle loop") {
  BenchmarkGeometry g;
  g.length = 3.0;
  g.height = 2.0;
  g.obstacle_edge = 1.0;
  const GridHierarchy h = generate_benchmark_mesh(g);
  const Polygon p = obstacle_polygon(h.finest());
  CHECK(p.vertices.size() >= 4);
  CHECK(p.area() > 0.0);
}

TEST_CASE("benchmark mesher rejects bad geometry") {
  BenchmarkGeometry g;
  g.obstacle_edge = 7.0;
  CHECK_THROWS_AS(generate_benchmark_mesh(g), Error);
  g = BenchmarkGeometry{};
  g.base_resolution = 3;
  try {
    generate_benchmark_mesh(g);
    FAIL("expected a parameter error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parameter);
  }
}

TEST_CASE("read_msh reads a two-triangle square") {
  const auto dir = lipshape::testing::scratch_dir("msh_square");
  lipshape::testing::write_text(dir / "square.msh", kSquareMsh);
  const Mesh m = read_msh(dir / "square.msh");
  CHECK(m.num_nodes() == 4);
  CHECK(m.num_triangles() == 2);
  CHECK(m.boundary_edges.size() == 4);
  CHECK(m.boundary_edges[0].marker == Marker::Wall);
  CHECK(m.boundary_edges[1].marker == Marker::Outflow);
  CHECK(m.boundary_edges[3].marker == Marker::Inflow);

  // refinement of the same square
  GridHierarchy h(m);
  h.refine_uniform();
  CHECK(h.finest().num_triangles() == 8);
  CHECK(h.finest().num_nodes() == 9);
  CHECK(h.finest().boundary_edges.size() == 8);
}

TEST_CASE("read_msh reorders clockwise triangles with a warning") {
  std::string text = kSquareMsh;
  const auto pos = text.find("5 2 2 0 1 1 2 3");
  text.replace(pos, 15, "5 2 2 0 1 1 3 2");
  const auto dir = lipshape::testing::scratch_dir("msh_cw");
  lipshape::testing::write_text(dir / "cw.msh", text);
  std::vector<std::string> warnings;
  log::set_sink([&](log::Level level, std::string_view msg) {
    if (level == log::Level::Warning) warnings.emplace_back(msg);
  });
  const Mesh m = read_msh(dir / "cw.msh");
  log::set_sink({});
  CHECK(warnings.size() == 1);
  for (int t = 0; t < m.num_triangles(); ++t) CHECK(m.signed_area(t) > 0.0);
}

TEST_CASE("read_msh error paths") {
  const auto dir = lipshape::testing::scratch_dir("msh_errors");

  std::string no_nodes = kSquareMsh;
  no_nodes.erase(no_nodes.find("$Nodes"), no_nodes.find("$Elements") - no_nodes.find("$Nodes"));
  lipshape::testing::write_text(dir / "no_nodes.msh", no_nodes);
  try {
    read_msh(dir / "no_nodes.msh");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("$Nodes") != std::string::npos);
  }

  std::string quad = kSquareMsh;
  quad.replace(quad.find("6 2 2 0 1 1 3 4"), 15, "6 3 2 0 1 1 2 3 4");
  lipshape::testing::write_text(dir / "quad.msh", quad);
  try {
    read_msh(dir / "quad.msh");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 18);
  }

  std::string dangling = kSquareMsh;
  dangling.replace(dangling.find("6 2 2 0 1 1 3 4"), 15, "6 2 2 0 1 1 3 9");
  lipshape::testing::write_text(dir / "dangling.msh", dangling);
  CHECK_THROWS_AS(read_msh(dir / "dangling.msh"), ParseError);

  try {
    read_msh(dir / "does_not_exist.msh");
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

TEST_CASE("write_vtk writes point data in field order") {
  const Mesh m = rectangle(0, 1, 0, 1, 1, 1);
  const auto dir = lipshape::testing::scratch_dir("vtk");
  std::vector<NodalField> fields{{"u", 2, std::vector<double>(8, 0.0)}, {"p", 1, {1, 2, 3, 4}}};
  write_vtk(m, fields, dir / "a.vtk");
  const std::string text = lipshape::testing::read_text(dir / "a.vtk");
  CHECK(text.find("POINT_DATA 4") != std::string::npos);
  const auto u = text.find("VECTORS u");
  const auto p = text.find("SCALARS p");
  REQUIRE(u != std::string::npos);
  REQUIRE(p != std::string::npos);
  CHECK(u < p);

  fields[1].values.pop_back();
  CHECK_THROWS_AS(write_vtk(m, fields, dir / "b.vtk"), Error);
  CHECK_FALSE(std::filesystem::exists(dir / "b.vtk"));
  std::size_t leftovers = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) leftovers += entry.path() != dir / "a.vtk";
  CHECK(leftovers == 0);
}

TEST_CASE("write_vtk coordinates round-trip at 17 digits") {
  Mesh m = rectangle(0, 1, 0, 1, 1, 1);
  m.nodes[3] = Point(0.1 + 1e-17, 1.0 / 3.0);
  const auto dir = lipshape::testing::scratch_dir("vtk_round");
  write_vtk(m, {}, dir / "m.vtk");
  std::istringstream in(lipshape::testing::read_text(dir / "m.vtk"));
  std::string word;
  while (in >> word && word != "POINTS") {
  }
  int n = 0;
  in >> n >> word;
  REQUIRE(n == 4);
  for (int i = 0; i < n; ++i) {
    double x, y, z;
    in >> x >> y >> z;
    CHECK(x == m.nodes[i].x());
    CHECK(y == m.nodes[i].y());
  }
}

TEST_CASE("uniform refinement keeps similarity and doubles boundary edges") {
  GridHierarchy h = generate_benchmark_mesh(benchmark());
  const Mesh base = h.finest();
  const QualityReport q0 = quality_report(base);
  h.refine_uniform();
  h.refine_uniform();
  const Mesh& fine = h.finest();
  CHECK(fine.num_triangles() == 16 * base.num_triangles());
  CHECK(fine.boundary_edges.size() == 4 * base.boundary_edges.size());
  const QualityReport q2 = quality_report(fine);
  CHECK(std::abs(q2.min_angle - q0.min_angle) <= 1e-12);
  CHECK(std::abs(q2.max_radius_ratio - q0.max_radius_ratio) <= 1e-9);
  CHECK_NOTHROW(fine.validate());

  for (std::size_t k = 0; k < h.num_levels(); ++k) {
    const Mesh& level = h.level(k);
    for (int i = 0; i < level.num_nodes(); ++i) {
      CHECK(level.nodes[i] == fine.nodes[h.finest_node(k, i)]);
    }
  }
  for (std::size_t i = 0; i < h.parents(1).size(); ++i) {
    const NodeParent& p = h.parents(1)[i];
    if (p.coarse_node >= 0) continue;
    const Point mid = 0.5 * (base.nodes[p.coarse_edge[0]] + base.nodes[p.coarse_edge[1]]);
    CHECK((h.level(1).nodes[i] - mid).norm() <= 1e-15);
  }
}

TEST_CASE("apply_deformation: identity, inverse, and tangling") {
  GridHierarchy h = generate_benchmark_mesh(benchmark());
  h.refine_uniform();
  const CoordinateSnapshot before = h.snapshot();
  const Mesh& fine = h.finest();
  const int n = fine.num_nodes();

  h.apply_deformation(Eigen::VectorXd::Zero(2 * n));
  CHECK(h.snapshot() == before);

  // smooth bump supported near the obstacle
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * n);
  const auto fixed = fine.fixed_nodes();
  for (int i = 0; i < n; ++i) {
    if (fixed[i]) continue;
    const Point& x = fine.nodes[i];
    const double w = std::exp(-x.squaredNorm());
    u[2 * i] = 0.01 * w * x.y();
    u[2 * i + 1] = -0.02 * w * x.x();
  }
  h.apply_deformation(u);
  CHECK(h.snapshot() != before);
  for (std::size_t k = 0; k < h.num_levels(); ++k) {
    for (int i = 0; i < h.level(k).num_nodes(); ++i) {
      CHECK((h.level(k).nodes[i] - h.finest().nodes[h.finest_node(k, i)]).norm() <= 1e-14);
    }
  }
  h.apply_deformation(-u);
  double worst = 0.0;
  const CoordinateSnapshot after = h.snapshot();
  for (std::size_t k = 0; k < after.size(); ++k) {
    for (std::size_t i = 0; i < after[k].size(); ++i) worst = std::max(worst, (after[k][i] - before[k][i]).norm());
  }
  CHECK(worst <= 1e-14);

  // shift only the obstacle nodes by more than the local edge length
  h.restore(before);
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(2 * n);
  const auto on_obstacle = fine.nodes_on(Marker::Obstacle);
  for (int i = 0; i < n; ++i) {
    if (on_obstacle[i]) shift[2 * i] = 1.0;
  }
  try {
    h.apply_deformation(shift);
    FAIL("expected tangling error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Tangling);
  }
  CHECK(h.snapshot() == before);

  // displacements on fixed boundaries violate the contract
  Eigen::VectorXd wall = Eigen::VectorXd::Zero(2 * n);
  for (int i = 0; i < n; ++i) {
    if (fixed[i]) {
      wall[2 * i] = 1e-3;
      break;
    }
  }
  CHECK_THROWS_AS(h.apply_deformation(wall), Error);
  CHECK(h.snapshot() == before);
}

TEST_CASE("quality of single triangles") {
  const double s3 = std::sqrt(3.0);
  const TriangleQuality eq = triangle_quality({0, 0}, {1, 0}, {0.5, s3 / 2});
  for (double a : eq.angles) CHECK(a == doctest::Approx(60.0).epsilon(1e-13));
  CHECK(eq.radius_ratio == doctest::Approx(2.0).epsilon(1e-13));

  const TriangleQuality ri = triangle_quality({0, 0}, {1, 0}, {0, 1});
  std::vector<double> angles(ri.angles.begin(), ri.angles.end());
  std::sort(angles.begin(), angles.end());
  CHECK(std::abs(angles[0] - 45.0) <= 1e-12);
  CHECK(std::abs(angles[1] - 45.0) <= 1e-12);
  CHECK(std::abs(angles[2] - 90.0) <= 1e-12);
  const double R = std::sqrt(2.0) / 2.0;
  const double r = (2.0 - std::sqrt(2.0)) / 2.0;
  CHECK(std::abs(ri.radius_ratio - R / r) <= 1e-12);

  Mesh single;
  single.nodes = {{0, 0}, {1, 0}, {0, 1}};
  single.triangles = {{0, 1, 2}};
  const QualityReport q = quality_report(single);
  CHECK(q.element_count == 1);
  CHECK(q.min_angle <= 60.0);
  CHECK(q.max_angle >= 60.0);
  CHECK(q.max_radius_ratio >= 2.0);
}

TEST_CASE("obstacle polygon follows the deformation and detects open chains") {
  GridHierarchy h = generate_benchmark_mesh(benchmark());
  const Polygon p0 = obstacle_polygon(h.finest());
  h.apply_deformation(Eigen::VectorXd::Zero(2 * h.finest().num_nodes()));
  const Polygon p1 = obstacle_polygon(h.finest());
  CHECK(p0.vertices == p1.vertices);
  CHECK(p0.area() > 0.0);

  Mesh broken = h.finest();
  for (auto it = broken.boundary_edges.begin(); it != broken.boundary_edges.end(); ++it) {
    if (it->marker == Marker::Obstacle) {
      broken.boundary_edges.erase(it);
      break;
    }
  }
  try {
    obstacle_polygon(broken);
    FAIL("expected topology error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Topology);
  }
}

TEST_CASE("symmetric difference of squares") {
  const Polygon a = square(0, 0, 1);
  const Polygon b = square(0.5, 0, 1);
  const Polygon c = square(3, 3, 1);
  CHECK(symmetric_difference_area(a, a, 1000) == 0.0);
  CHECK(symmetric_difference_area(a, b, 1000) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(symmetric_difference_area(a, c, 1000) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(symmetric_difference_area(a, b, 1000) == symmetric_difference_area(b, a, 1000));
  CHECK(symmetric_difference_area(a, c, 500) == symmetric_difference_area(c, a, 500));

  Polygon rotated = a;
  std::rotate(rotated.vertices.begin(), rotated.vertices.begin() + 1, rotated.vertices.end());
  CHECK(symmetric_difference_area(a, rotated, 1000) == 0.0);

  const Polygon degenerate{{{0, 0}, {1, 0}, {2, 0}}};
  CHECK_THROWS_AS(symmetric_difference_area(a, degenerate, 1000), Error);
  CHECK_THROWS_AS(symmetric_difference_area(a, b, 10), Error);
}

TEST_CASE("mesh validation catches broken topology") {
  Mesh m = rectangle(0, 1, 0, 1, 2, 2);
  CHECK_NOTHROW(m.validate());
  Mesh missing = m;
  missing.boundary_edges.pop_back();
  CHECK_THROWS_AS(missing.validate(), Error);
  Mesh flipped = m;
  std::swap(flipped.triangles[0][1], flipped.triangles[0][2]);
  CHECK_THROWS_AS(flipped.validate(), Error);
}

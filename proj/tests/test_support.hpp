// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "lipshape/mesh.hpp"

namespace lipshape::testing {

/// Structured nx x ny rectangle split along the (i,j)-(i+1,j+1) diagonals.
inline Mesh rectangle(double x0, double x1, double y0, double y1, int nx, int ny,
                      Marker left = Marker::Wall, Marker right = Marker::Wall,
                      Marker sides = Marker::Wall) {
  Mesh m;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      m.nodes.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny);
    }
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
  return m;
}

/// Channel with a square hole in the middle: outer [-2,2]x[-1,1] on a
/// 8x4 grid with the four cells around the origin removed.
inline Mesh small_channel() {
  Mesh m;
  const int nx = 8, ny = 4;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) m.nodes.emplace_back(-2.0 + 0.5 * i, -1.0 + 0.5 * j);
  }
  auto id = [](int i, int j) { return j * (nx + 1) + i; };
  auto hole = [](int i, int j) { return (i == 3 || i == 4) && (j == 1 || j == 2); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (hole(i, j)) continue;
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  for (int i = 0; i < nx; ++i) {
    m.boundary_edges.push_back({id(i, 0), id(i + 1, 0), Marker::Wall});
    m.boundary_edges.push_back({id(i + 1, ny), id(i, ny), Marker::Wall});
  }
  for (int j = 0; j < ny; ++j) {
    m.boundary_edges.push_back({id(0, j + 1), id(0, j), Marker::Inflow});
    m.boundary_edges.push_back({id(nx, j), id(nx, j + 1), Marker::Outflow});
  }
  // obstacle square [-0.5,0.5]^2, oriented with the fluid on the left
  const int loop[] = {id(3, 1), id(3, 2), id(3, 3), id(4, 3), id(5, 3), id(5, 2), id(5, 1), id(4, 1)};
  for (int k = 0; k < 8; ++k) m.boundary_edges.push_back({loop[k], loop[(k + 1) % 8], Marker::Obstacle});
  // drop the node inside the hole
  const int orphan = id(4, 2);
  m.nodes.erase(m.nodes.begin() + orphan);
  auto shift = [orphan](int& v) { v -= v > orphan ? 1 : 0; };
  for (auto& t : m.triangles) std::for_each(t.begin(), t.end(), shift);
  for (auto& e : m.boundary_edges) {
    shift(e.a);
    shift(e.b);
  }
  return m;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("lipshape_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace lipshape::testing

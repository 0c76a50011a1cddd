// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lipshape/mesh.hpp"

namespace lipshape {

/// Physical tag of MSH line elements -> boundary marker.
struct MarkerTable {
  std::map<int, Marker> by_physical_tag{
      {1, Marker::Inflow}, {2, Marker::Outflow}, {3, Marker::Wall}, {4, Marker::Obstacle}};
};

/// Reads the ASCII MSH 2.2 subset: $MeshFormat, $Nodes, $Elements with element
/// types 1 (boundary line, physical tag -> marker) and 2 (triangle). Other
/// sections are skipped. Clockwise triangles are reordered with a warning.
Mesh read_msh(const std::filesystem::path& path, const MarkerTable& markers = {});

/// One scalar or one 2-vector per node.
struct NodalField {
  std::string name;
  int components = 1;
  std::vector<double> values;
};

/// Legacy VTK ASCII unstructured grid with POINT_DATA, 17 significant digits.
/// The file is written to a temporary name and renamed, so a failure never
/// leaves a partial file behind.
void write_vtk(const Mesh& mesh, std::span<const NodalField> fields,
               const std::filesystem::path& path);

}  // namespace lipshape

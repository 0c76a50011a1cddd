// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iomanip>

#include "lipshape/error.hpp"
#include "lipshape/mesh_io.hpp"

namespace lipshape {

void write_vtk(const Mesh& mesh, std::span<const NodalField> fields,
               const std::filesystem::path& path) {
  const std::size_t n = mesh.nodes.size();
  for (const auto& f : fields) {
    require(f.components == 1 || f.components == 2, ErrorKind::Contract,
            "field '" + f.name + "' must have 1 or 2 components");
    require(f.values.size() == n * f.components, ErrorKind::Contract,
            "field '" + f.name + "' has " + std::to_string(f.values.size()) +
                " values, expected " + std::to_string(n * f.components));
    require(!f.name.empty() && f.name.find_first_of(" \t\n") == std::string::npos,
            ErrorKind::Contract, "field names must be non-empty without whitespace");
  }

  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << std::setprecision(17);
    out << "# vtk DataFile Version 3.0\nlipshape mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << n << " double\n";
    for (const auto& p : mesh.nodes) out << p.x() << ' ' << p.y() << " 0\n";
    out << "CELLS " << mesh.triangles.size() << ' ' << 4 * mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << mesh.triangles.size() << '\n';
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) out << "5\n";
    if (!fields.empty()) {
      out << "POINT_DATA " << n << '\n';
      for (const auto& f : fields) {
        if (f.components == 1) {
          out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
          for (double v : f.values) out << v << '\n';
        } else {
          out << "VECTORS " << f.name << " double\n";
          for (std::size_t i = 0; i < n; ++i) {
            out << f.values[2 * i] << ' ' << f.values[2 * i + 1] << " 0\n";
          }
        }
      }
    }
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw Error(ErrorKind::Io, "failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::Io, "cannot rename to " + path.string() + ": " + ec.message());
  }
}

}  // namespace lipshape

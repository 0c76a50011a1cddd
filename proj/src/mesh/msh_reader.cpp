// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "lipshape/error.hpp"
#include "lipshape/log.hpp"
#include "lipshape/mesh_io.hpp"

namespace lipshape {
namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  std::string expect(const char* what) {
    std::string line;
    if (!next(line)) throw ParseError(std::string("unexpected end of file, expected ") + what, number_);
    return line;
  }

  int number() const { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

long parse_count(const std::string& line, int lineno) {
  std::istringstream ss(line);
  long n = -1;
  if (!(ss >> n) || n < 0) throw ParseError("invalid count '" + trim(line) + "'", lineno);
  return n;
}

}  // namespace

Mesh read_msh(const std::filesystem::path& path, const MarkerTable& markers) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorKind::Io, "cannot open " + path.string());
  LineReader reader(file);

  Mesh mesh;
  std::unordered_map<long, int> node_index;
  bool have_nodes = false;
  bool have_elements = false;
  struct RawEdge {
    long a, b;
    int tag;
    int line;
  };
  std::vector<RawEdge> raw_edges;
  struct RawTri {
    long v[3];
    int line;
  };
  std::vector<RawTri> raw_tris;

  std::string line;
  while (reader.next(line)) {
    const std::string section = trim(line);
    if (section == "$MeshFormat") {
      std::istringstream ss(reader.expect("format line"));
      double version = 0;
      int file_type = -1;
      if (!(ss >> version >> file_type)) throw ParseError("malformed $MeshFormat", reader.number());
      if (version < 2.0 || version >= 3.0 || file_type != 0) {
        throw ParseError("only ASCII MSH 2.x is supported", reader.number());
      }
      if (trim(reader.expect("$EndMeshFormat")) != "$EndMeshFormat") {
        throw ParseError("missing $EndMeshFormat", reader.number());
      }
    } else if (section == "$Nodes") {
      const long n = parse_count(reader.expect("node count"), reader.number());
      mesh.nodes.reserve(n);
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(reader.expect("node"));
        long id;
        double x, y, z;
        if (!(ss >> id >> x >> y >> z)) throw ParseError("malformed node record", reader.number());
        if (!node_index.emplace(id, static_cast<int>(mesh.nodes.size())).second) {
          throw ParseError("duplicate node id " + std::to_string(id), reader.number());
        }
        mesh.nodes.emplace_back(x, y);
      }
      if (trim(reader.expect("$EndNodes")) != "$EndNodes") {
        throw ParseError("missing $EndNodes", reader.number());
      }
      have_nodes = true;
    } else if (section == "$Elements") {
      const long n = parse_count(reader.expect("element count"), reader.number());
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(reader.expect("element"));
        long id;
        int type, ntags;
        if (!(ss >> id >> type >> ntags) || ntags < 0) {
          throw ParseError("malformed element record", reader.number());
        }
        std::vector<int> tags(ntags);
        for (auto& t : tags) {
          if (!(ss >> t)) throw ParseError("malformed element tags", reader.number());
        }
        if (type == 1) {
          RawEdge e{0, 0, ntags > 0 ? tags[0] : 0, reader.number()};
          if (!(ss >> e.a >> e.b)) throw ParseError("malformed line element", reader.number());
          raw_edges.push_back(e);
        } else if (type == 2) {
          RawTri t{{0, 0, 0}, reader.number()};
          if (!(ss >> t.v[0] >> t.v[1] >> t.v[2])) {
            throw ParseError("malformed triangle element", reader.number());
          }
          raw_tris.push_back(t);
        } else {
          throw ParseError("unsupported element type " + std::to_string(type), reader.number());
        }
      }
      if (trim(reader.expect("$EndElements")) != "$EndElements") {
        throw ParseError("missing $EndElements", reader.number());
      }
      have_elements = true;
    } else if (!section.empty() && section[0] == '$') {
      // Unknown section: skip to its end marker.
      const std::string end = "$End" + section.substr(1);
      std::string body;
      do {
        body = trim(reader.expect(end.c_str()));
      } while (body != end);
    } else {
      throw ParseError("unexpected content outside of a section", reader.number());
    }
  }
  if (!have_nodes) throw ParseError("missing $Nodes section", 0);
  if (!have_elements) throw ParseError("missing $Elements section", 0);

  auto resolve = [&](long id, int lineno) {
    auto it = node_index.find(id);
    if (it == node_index.end()) {
      throw ParseError("element references undefined node " + std::to_string(id), lineno);
    }
    return it->second;
  };

  for (const auto& t : raw_tris) {
    std::array<int, 3> tri{resolve(t.v[0], t.line), resolve(t.v[1], t.line), resolve(t.v[2], t.line)};
    if (signed_area(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]) < 0.0) {
      std::swap(tri[1], tri[2]);
      log::warn("msh line " + std::to_string(t.line) +
                ": clockwise triangle reordered to counterclockwise");
    }
    mesh.triangles.push_back(tri);
  }
  for (const auto& e : raw_edges) {
    auto it = markers.by_physical_tag.find(e.tag);
    if (it == markers.by_physical_tag.end()) {
      throw ParseError("physical tag " + std::to_string(e.tag) + " has no marker mapping", e.line);
    }
    mesh.boundary_edges.push_back({resolve(e.a, e.line), resolve(e.b, e.line), it->second});
  }

  mesh.validate();
  return mesh;
}

}  // namespace lipshape

#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "isokit/halfedge_mesh.hpp"

namespace isokit {

enum class MeshFormat { Auto, Obj, Stl, StlAscii, StlBinary, PlyAscii };

namespace io_detail {

inline MeshFormat format_from_path(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".obj") return MeshFormat::Obj;
  if (ext == ".stl") return MeshFormat::Stl;
  if (ext == ".ply") return MeshFormat::PlyAscii;
  throw ParseError("unrecognized mesh extension: " + path);
}

struct RawMesh {
  std::vector<Vec3> points;
  std::vector<std::array<int, 3>> tris;
};

// Merge vertices closer than tol (hash grid with neighbor-cell probe); faces
// collapsed to fewer than three distinct vertices are dropped. First
// occurrence wins, so the result is deterministic in input order.
inline RawMesh weld(const RawMesh& in, double tol) {
  RawMesh out;
  if (in.points.empty()) return out;
  std::vector<int> remap(in.points.size(), -1);
  if (tol <= 0.0) {
    std::unordered_map<std::string, int> seen;
    for (std::size_t i = 0; i < in.points.size(); ++i) {
      std::string key(reinterpret_cast<const char*>(in.points[i].data()), 3 * sizeof(double));
      auto it = seen.find(key);
      if (it == seen.end()) {
        seen.emplace(std::move(key), static_cast<int>(out.points.size()));
        remap[i] = static_cast<int>(out.points.size());
        out.points.push_back(in.points[i]);
      } else {
        remap[i] = it->second;
      }
    }
  } else {
    auto cell_key = [tol](const Vec3& p, int dx, int dy, int dz) {
      const std::int64_t cx = static_cast<std::int64_t>(std::floor(p.x() / tol)) + dx;
      const std::int64_t cy = static_cast<std::int64_t>(std::floor(p.y() / tol)) + dy;
      const std::int64_t cz = static_cast<std::int64_t>(std::floor(p.z() / tol)) + dz;
      return (static_cast<std::uint64_t>(cx) * 73856093u) ^
             (static_cast<std::uint64_t>(cy) * 19349663u) ^
             (static_cast<std::uint64_t>(cz) * 83492791u);
    };
    std::unordered_map<std::uint64_t, std::vector<int>> grid;
    for (std::size_t i = 0; i < in.points.size(); ++i) {
      const Vec3& p = in.points[i];
      int found = -1;
      for (int dx = -1; dx <= 1 && found < 0; ++dx)
        for (int dy = -1; dy <= 1 && found < 0; ++dy)
          for (int dz = -1; dz <= 1 && found < 0; ++dz) {
            auto it = grid.find(cell_key(p, dx, dy, dz));
            if (it == grid.end()) continue;
            for (int j : it->second) {
              if ((out.points[j] - p).norm() <= tol) {
                found = j;
                break;
              }
            }
          }
      if (found < 0) {
        found = static_cast<int>(out.points.size());
        out.points.push_back(p);
        grid[cell_key(p, 0, 0, 0)].push_back(found);
      }
      remap[i] = found;
    }
  }
  for (const auto& t : in.tris) {
    std::array<int, 3> m = {remap[t[0]], remap[t[1]], remap[t[2]]};
    if (m[0] == m[1] || m[1] == m[2] || m[2] == m[0]) continue;  // collapsed by welding
    out.tris.push_back(m);
  }
  return out;
}

inline double bbox_diagonal(const std::vector<Vec3>& pts) {
  if (pts.empty()) return 0.0;
  Vec3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

inline RawMesh read_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  RawMesh raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z))
        throw ParseError(path + ":" + std::to_string(lineno) + ": malformed vertex");
      raw.points.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        const auto slash = tok.find('/');
        if (slash != std::string::npos) tok = tok.substr(0, slash);
        int i = 0;
        try {
          i = std::stoi(tok);
        } catch (const std::exception&) {
          throw ParseError(path + ":" + std::to_string(lineno) + ": malformed face index");
        }
        if (i < 0) i = static_cast<int>(raw.points.size()) + 1 + i;  // negative = relative
        idx.push_back(i - 1);
      }
      if (idx.size() != 3)
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": only triangle faces are supported");
      for (int i : idx)
        if (i < 0 || i >= static_cast<int>(raw.points.size()))
          throw ParseError(path + ":" + std::to_string(lineno) + ": face index out of range");
      raw.tris.push_back({idx[0], idx[1], idx[2]});
    }
  }
  return raw;
}

inline RawMesh read_stl_binary(std::ifstream& in, const std::string& path) {
  in.seekg(80, std::ios::beg);
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), 4);
  if (!in) throw ParseError(path + ": truncated binary STL header");
  RawMesh raw;
  raw.points.reserve(static_cast<std::size_t>(count) * 3);
  raw.tris.reserve(count);
  std::array<char, 50> facet{};
  for (std::uint32_t f = 0; f < count; ++f) {
    in.read(facet.data(), 50);
    if (!in) throw ParseError(path + ": truncated binary STL facet");
    float vals[12];
    std::memcpy(vals, facet.data(), 48);
    const int base = static_cast<int>(raw.points.size());
    for (int v = 0; v < 3; ++v)
      raw.points.emplace_back(vals[3 + 3 * v], vals[4 + 3 * v], vals[5 + 3 * v]);
    raw.tris.push_back({base, base + 1, base + 2});
  }
  return raw;
}

inline RawMesh read_stl_ascii(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  RawMesh raw;
  std::string tok;
  std::vector<Vec3> pending;
  while (in >> tok) {
    if (tok == "vertex") {
      double x, y, z;
      if (!(in >> x >> y >> z)) throw ParseError(path + ": malformed STL vertex");
      pending.emplace_back(x, y, z);
    } else if (tok == "endfacet") {
      if (pending.size() != 3) throw ParseError(path + ": facet without three vertices");
      const int base = static_cast<int>(raw.points.size());
      for (const auto& p : pending) raw.points.push_back(p);
      raw.tris.push_back({base, base + 1, base + 2});
      pending.clear();
    }
  }
  if (!pending.empty()) throw ParseError(path + ": dangling vertices at end of STL");
  return raw;
}

inline RawMesh read_stl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  if (size >= 84) {
    in.seekg(80, std::ios::beg);
    std::uint32_t count = 0;
    in.read(reinterpret_cast<char*>(&count), 4);
    if (size == static_cast<std::streamoff>(84 + 50ull * count)) {
      return read_stl_binary(in, path);
    }
  }
  return read_stl_ascii(path);
}

// Ascii PLY, positions and triangle faces only.
inline RawMesh read_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0)
    throw ParseError(path + ": not a PLY file");
  long n_vertices = -1, n_faces = -1;
  int xi = -1, yi = -1, zi = -1;
  int vertex_props = 0;
  std::string element;
  bool ascii = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "format") {
      std::string fmt;
      ls >> fmt;
      ascii = (fmt == "ascii");
    } else if (tag == "element") {
      std::string name;
      long n;
      ls >> name >> n;
      element = name;
      if (name == "vertex") n_vertices = n;
      if (name == "face") n_faces = n;
    } else if (tag == "property" && element == "vertex") {
      std::string type, name;
      ls >> type >> name;
      if (type == "list") throw ParseError(path + ": list property on vertices unsupported");
      if (name == "x") xi = vertex_props;
      if (name == "y") yi = vertex_props;
      if (name == "z") zi = vertex_props;
      ++vertex_props;
    } else if (tag == "end_header") {
      break;
    }
  }
  if (!ascii) throw ParseError(path + ": only ascii PLY is supported");
  if (n_vertices < 0 || n_faces < 0 || xi < 0 || yi < 0 || zi < 0)
    throw ParseError(path + ": incomplete PLY header");
  RawMesh raw;
  raw.points.reserve(n_vertices);
  for (long v = 0; v < n_vertices; ++v) {
    std::vector<double> vals(vertex_props);
    for (int p = 0; p < vertex_props; ++p)
      if (!(in >> vals[p])) throw ParseError(path + ": truncated PLY vertex data");
    raw.points.emplace_back(vals[xi], vals[yi], vals[zi]);
  }
  for (long f = 0; f < n_faces; ++f) {
    int n;
    if (!(in >> n)) throw ParseError(path + ": truncated PLY face data");
    if (n != 3) throw ParseError(path + ": only triangle faces are supported");
    std::array<int, 3> t{};
    for (int i = 0; i < 3; ++i) {
      if (!(in >> t[i])) throw ParseError(path + ": truncated PLY face data");
      if (t[i] < 0 || t[i] >= n_vertices) throw ParseError(path + ": PLY face index out of range");
    }
    raw.tris.push_back(t);
  }
  return raw;
}

}  // namespace io_detail

// Load and validate a closed manifold triangle mesh. Duplicate vertices
// within weld_tolerance_rel * bbox_diagonal are merged; STL needs this to
// recover connectivity at all.
inline HalfedgeMesh load_mesh(const std::string& path, MeshFormat format = MeshFormat::Auto,
                              double weld_tolerance_rel = 1e-6) {
  using namespace io_detail;
  if (format == MeshFormat::Auto) format = format_from_path(path);
  RawMesh raw;
  switch (format) {
    case MeshFormat::Obj:
      raw = read_obj(path);
      break;
    case MeshFormat::Stl:
    case MeshFormat::StlAscii:
    case MeshFormat::StlBinary:
      raw = read_stl(path);
      break;
    case MeshFormat::PlyAscii:
      raw = read_ply(path);
      break;
    default:
      throw ParseError("unsupported load format");
  }
  if (raw.points.empty() || raw.tris.empty()) throw ParseError(path + ": empty mesh");
  const double tol = weld_tolerance_rel * bbox_diagonal(raw.points);
  RawMesh welded = weld(raw, tol);
  return HalfedgeMesh::build(welded.points, welded.tris);
}

inline void save_obj(const HalfedgeMesh& mesh, const std::string& path) {
  std::vector<Vec3> pts;
  std::vector<std::array<int, 3>> tris;
  mesh.to_indexed(pts, tris);
  std::ofstream out(path, std::ios::binary);  // binary: stable newlines
  if (!out) throw IoError("cannot write " + path);
  for (const auto& p : pts)
    out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' '
        << format_double(p.z()) << '\n';
  for (const auto& t : tris) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) throw IoError("write failed: " + path);
}

inline void save_stl_binary(const HalfedgeMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  char header[80] = {};
  std::snprintf(header, sizeof(header), "isokit binary stl");
  out.write(header, 80);
  std::uint32_t count = 0;
  for (std::size_t f = 0; f < mesh.face_capacity(); ++f)
    if (mesh.face_alive(static_cast<int>(f))) ++count;
  out.write(reinterpret_cast<const char*>(&count), 4);
  for (std::size_t f = 0; f < mesh.face_capacity(); ++f) {
    if (!mesh.face_alive(static_cast<int>(f))) continue;
    const auto p = mesh.face_positions(static_cast<int>(f));
    Vec3 n = (p[1] - p[0]).cross(p[2] - p[0]);
    const double len = n.norm();
    n = len > 0 ? Vec3(n / len) : Vec3::Zero();
    float vals[12] = {
        static_cast<float>(n.x()),    static_cast<float>(n.y()),    static_cast<float>(n.z()),
        static_cast<float>(p[0].x()), static_cast<float>(p[0].y()), static_cast<float>(p[0].z()),
        static_cast<float>(p[1].x()), static_cast<float>(p[1].y()), static_cast<float>(p[1].z()),
        static_cast<float>(p[2].x()), static_cast<float>(p[2].y()), static_cast<float>(p[2].z())};
    out.write(reinterpret_cast<const char*>(vals), 48);
    const std::uint16_t attr = 0;
    out.write(reinterpret_cast<const char*>(&attr), 2);
  }
  if (!out) throw IoError("write failed: " + path);
}

inline void save_stl_ascii(const HalfedgeMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "solid isokit\n";
  for (std::size_t f = 0; f < mesh.face_capacity(); ++f) {
    if (!mesh.face_alive(static_cast<int>(f))) continue;
    const auto p = mesh.face_positions(static_cast<int>(f));
    Vec3 n = (p[1] - p[0]).cross(p[2] - p[0]);
    const double len = n.norm();
    n = len > 0 ? Vec3(n / len) : Vec3::Zero();
    out << "  facet normal " << format_double(n.x(), 9) << ' ' << format_double(n.y(), 9) << ' '
        << format_double(n.z(), 9) << '\n';
    out << "    outer loop\n";
    for (int v = 0; v < 3; ++v)
      out << "      vertex " << format_double(p[v].x(), 9) << ' ' << format_double(p[v].y(), 9)
          << ' ' << format_double(p[v].z(), 9) << '\n';
    out << "    endloop\n  endfacet\n";
  }
  out << "endsolid isokit\n";
  if (!out) throw IoError("write failed: " + path);
}

inline void save_mesh(const HalfedgeMesh& mesh, const std::string& path,
                      MeshFormat format = MeshFormat::Auto) {
  if (format == MeshFormat::Auto) {
    format = io_detail::format_from_path(path);
    if (format == MeshFormat::Stl) format = MeshFormat::StlBinary;
    if (format == MeshFormat::PlyAscii) throw IoError("PLY output is not supported");
  }
  switch (format) {
    case MeshFormat::Obj:
      save_obj(mesh, path);
      break;
    case MeshFormat::Stl:
    case MeshFormat::StlBinary:
      save_stl_binary(mesh, path);
      break;
    case MeshFormat::StlAscii:
      save_stl_ascii(mesh, path);
      break;
    default:
      throw IoError("unsupported save format");
  }
}

}  // namespace isokit

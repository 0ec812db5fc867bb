#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "isokit/halfedge_mesh.hpp"

namespace testutil {

using isokit::HalfedgeMesh;
using isokit::Vec3;

// Regular tetrahedron with unit edges, outward orientation.
inline HalfedgeMesh make_tetrahedron() {
  const double s3 = std::sqrt(3.0);
  std::vector<Vec3> pts = {{0, 0, 0},
                           {1, 0, 0},
                           {0.5, s3 / 2.0, 0},
                           {0.5, s3 / 6.0, std::sqrt(2.0 / 3.0)}};
  std::vector<std::array<int, 3>> tris = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {2, 0, 3}};
  return HalfedgeMesh::build(pts, tris);
}

// Unit cube, 12 triangles, outward orientation.
inline HalfedgeMesh make_cube() {
  std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                           {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  std::vector<std::array<int, 3>> tris = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7},
                                          {0, 1, 5}, {0, 5, 4}, {1, 2, 6}, {1, 6, 5},
                                          {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}};
  return HalfedgeMesh::build(pts, tris);
}

// Square pyramid with a fan-triangulated flat base; apex on the z-axis.
inline HalfedgeMesh make_square_pyramid() {
  std::vector<Vec3> pts = {{0, 0, 1},  {1, 1, 0},  {-1, 1, 0},
                           {-1, -1, 0}, {1, -1, 0}, {0, 0, 0}};
  std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1},
                                          {5, 2, 1}, {5, 3, 2}, {5, 4, 3}, {5, 1, 4}};
  return HalfedgeMesh::build(pts, tris);
}

// Closed slab: a regular equilateral-grid triangle of side n on top (z = h),
// the same grid mirrored on the bottom (z = 0), stitched with side quads.
// Interior top vertices are regular (valence 6) and flat, which makes the
// slab the test bed for planar-region behavior.
struct SlabMesh {
  HalfedgeMesh mesh;
  std::vector<int> top_faces;          // face ids of the top grid, row-major
  std::vector<int> top_interior_vertices;  // valence-6 flat top vertices
  int central_face = -1;               // a top face whose 2-ring is flat regular
};

inline SlabMesh make_slab(int n = 8, double edge = 1.0, double height = 0.6) {
  std::vector<Vec3> pts;
  std::vector<std::array<int, 3>> tris;
  const double s3 = std::sqrt(3.0) / 2.0;
  // Top grid vertices, barycentric lattice (i, j), i + j <= n.
  auto top_id = [&](int i, int j) {
    // row j has (n + 1 - j) vertices
    int id = 0;
    for (int r = 0; r < j; ++r) id += n + 1 - r;
    return id + i;
  };
  const int per_layer = (n + 1) * (n + 2) / 2;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i + j <= n; ++i)
      pts.emplace_back(edge * (i + 0.5 * j), edge * s3 * j, height);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i + j <= n; ++i)
      pts.emplace_back(edge * (i + 0.5 * j), edge * s3 * j, 0.0);
  auto bot_id = [&](int i, int j) { return per_layer + top_id(i, j); };

  SlabMesh out;
  // Top faces, normal +z.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i + j < n; ++i) {
      out.top_faces.push_back(static_cast<int>(tris.size()));
      tris.push_back({top_id(i, j), top_id(i + 1, j), top_id(i, j + 1)});
      if (i + j < n - 1) {
        out.top_faces.push_back(static_cast<int>(tris.size()));
        tris.push_back({top_id(i + 1, j), top_id(i + 1, j + 1), top_id(i, j + 1)});
      }
    }
  // Bottom faces, normal -z (reversed).
  for (int j = 0; j < n; ++j)
    for (int i = 0; i + j < n; ++i) {
      tris.push_back({bot_id(i, j), bot_id(i, j + 1), bot_id(i + 1, j)});
      if (i + j < n - 1)
        tris.push_back({bot_id(i + 1, j), bot_id(i, j + 1), bot_id(i + 1, j + 1)});
    }
  // Side walls along the three boundary edges of the big triangle.
  auto wall = [&](int ta, int tb) {
    // top edge (ta -> tb) with the outside on the right; bottom mirrors it.
    const int ba = ta + per_layer, bb = tb + per_layer;
    tris.push_back({ta, bb, tb});
    tris.push_back({ta, ba, bb});
  };
  // Boundary traversed counterclockwise seen from +z so walls face outward.
  for (int i = 0; i < n; ++i) wall(top_id(i, 0), top_id(i + 1, 0));              // j = 0 edge
  for (int j = 0; j < n; ++j) wall(top_id(n - j, j), top_id(n - j - 1, j + 1));  // diagonal
  for (int j = 0; j < n; ++j) wall(top_id(0, n - j), top_id(0, n - j - 1));      // i = 0 edge

  out.mesh = HalfedgeMesh::build(pts, tris);
  for (int j = 1; j < n; ++j)
    for (int i = 1; i + j < n; ++i) out.top_interior_vertices.push_back(top_id(i, j));
  // A face whose whole 2-ring is interior: the upward face at lattice cell
  // near the middle.
  const int ci = n / 3, cj = n / 3;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& f = tris[t];
    if (f[0] == top_id(ci, cj) && f[1] == top_id(ci + 1, cj) && f[2] == top_id(ci, cj + 1)) {
      out.central_face = static_cast<int>(t);
      break;
    }
  }
  return out;
}

inline std::string temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "isokit_tests";
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline std::string temp_path(const std::string& name) {
  return (std::filesystem::path(temp_dir()) / name).string();
}

}  // namespace testutil

#pragma once

#include "isokit/halfedge_mesh.hpp"

namespace isokit {

// Would moving vertex v to p invert or squash any incident face?
inline bool move_inverts(const HalfedgeMesh& mesh, int v, const Vec3& p, double area_eps) {
  bool bad = false;
  mesh.for_each_outgoing(v, [&](int h) {
    if (bad) return;
    const int f = mesh.face(h);
    auto fv = mesh.face_vertices(f);
    Vec3 q[3];
    for (int i = 0; i < 3; ++i) q[i] = fv[i] == v ? p : mesh.positions[fv[i]];
    const Vec3 before = (mesh.positions[fv[1]] - mesh.positions[fv[0]])
                            .cross(mesh.positions[fv[2]] - mesh.positions[fv[0]]);
    const Vec3 after = (q[1] - q[0]).cross(q[2] - q[0]);
    if (after.norm() <= area_eps || after.dot(before) <= 0.0) bad = true;
  });
  return bad;
}

// Same test for a collapse of h=(a->b) with the merged vertex at p: every
// surviving face around a and b keeps its orientation and a real area.
inline bool collapse_inverts(const HalfedgeMesh& mesh, int h, const Vec3& p, double area_eps) {
  const int a = mesh.origin(h);
  const int b = mesh.dest(h);
  const int f0 = mesh.face(h);
  const int f1 = mesh.face(mesh.twin(h));
  bool bad = false;
  auto check_ring = [&](int v) {
    mesh.for_each_outgoing(v, [&](int he) {
      if (bad) return;
      const int f = mesh.face(he);
      if (f == f0 || f == f1) return;
      auto fv = mesh.face_vertices(f);
      Vec3 q[3];
      for (int i = 0; i < 3; ++i) q[i] = (fv[i] == a || fv[i] == b) ? p : mesh.positions[fv[i]];
      const Vec3 before = (mesh.positions[fv[1]] - mesh.positions[fv[0]])
                              .cross(mesh.positions[fv[2]] - mesh.positions[fv[0]]);
      const Vec3 after = (q[1] - q[0]).cross(q[2] - q[0]);
      if (after.norm() <= area_eps || after.dot(before) <= 0.0) bad = true;
    });
  };
  check_ring(a);
  check_ring(b);
  return bad;
}

// The two triangles a flip of h would create, in the face slots the flip
// reuses: face(h) becomes (c, d, b), face(twin) becomes (d, c, a).
inline void flipped_triangles(const HalfedgeMesh& mesh, int h, std::array<Vec3, 3>& t0,
                              std::array<Vec3, 3>& t1) {
  const int t = mesh.twin(h);
  const Vec3 pa = mesh.positions[mesh.origin(h)];
  const Vec3 pb = mesh.positions[mesh.dest(h)];
  const Vec3 pc = mesh.positions[mesh.dest(mesh.next(h))];
  const Vec3 pd = mesh.positions[mesh.dest(mesh.next(t))];
  t0 = {pc, pd, pb};
  t1 = {pd, pc, pa};
}

// Geometric legality of a flip: both new triangles have real area and their
// normals agree with the mean normal of the quad being re-diagonalized.
inline bool flip_geometry_ok(const HalfedgeMesh& mesh, int h, double area_eps) {
  std::array<Vec3, 3> t0, t1;
  flipped_triangles(mesh, h, t0, t1);
  const Vec3 ref = mesh.face_normal_weighted(mesh.face(h)) +
                   mesh.face_normal_weighted(mesh.face(mesh.twin(h)));
  const Vec3 n0 = (t0[1] - t0[0]).cross(t0[2] - t0[0]);
  const Vec3 n1 = (t1[1] - t1[0]).cross(t1[2] - t1[0]);
  if (n0.norm() <= area_eps || n1.norm() <= area_eps) return false;
  return n0.dot(ref) > 0.0 && n1.dot(ref) > 0.0;
}

}  // namespace isokit

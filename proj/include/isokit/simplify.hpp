#pragma once

#include <queue>
#include <vector>

#include "isokit/aabb_tree.hpp"
#include "isokit/geom_checks.hpp"
#include "isokit/halfedge_mesh.hpp"

namespace isokit {

struct SimplifyConfig {
  int target_vertex_count = 0;
  int lloyd_iterations = 35;
  // When false, targets below the minimum sensible budget raise BudgetError;
  // when true they are clamped to the smallest reachable closed triangulation.
  bool strict_budget = true;
};

// Immutable closest-point view of the reference surface (the raw input mesh).
class SurfaceRef {
 public:
  explicit SurfaceRef(const HalfedgeMesh& mesh)
      : tree_(AabbTree::from_mesh(mesh)), bbox_diag_(mesh.bounding_box().diagonal()) {}

  Vec3 project(const Vec3& p) const { return tree_.closest_point(p).point; }
  double distance(const Vec3& p) const { return tree_.closest_point(p).distance; }
  double bbox_diagonal() const { return bbox_diag_; }

 private:
  AabbTree tree_;
  double bbox_diag_;
};

// One Lloyd relaxation step: every vertex moves toward the area-weighted
// centroid of its incident triangles (barycentric approximation of its
// surface Voronoi cell), reprojected to the reference surface. Targets are
// computed against a snapshot; moves that would invert a face are damped by
// bisection toward the original position.
inline void lloyd_relax_step(HalfedgeMesh& mesh, const SurfaceRef& reference) {
  const double area_eps = 1e-14 * reference.bbox_diagonal() * reference.bbox_diagonal();
  const std::size_t nv = mesh.vertex_capacity();
  std::vector<Vec3> target(nv);
  parallel_for(nv, [&](std::size_t v) {
    if (!mesh.vertex_alive(static_cast<int>(v))) return;
    Vec3 acc = Vec3::Zero();
    double wsum = 0.0;
    mesh.for_each_outgoing(static_cast<int>(v), [&](int h) {
      const int f = mesh.face(h);
      const double w = mesh.face_area(f);
      acc += w * mesh.face_centroid(f);
      wsum += w;
    });
    const Vec3 raw = wsum > 0 ? Vec3(acc / wsum) : mesh.positions[v];
    target[v] = reference.project(raw);
  });
  for (std::size_t v = 0; v < nv; ++v) {
    if (!mesh.vertex_alive(static_cast<int>(v))) continue;
    Vec3 p = target[v];
    const Vec3 orig = mesh.positions[v];
    int tries = 0;
    while (move_inverts(mesh, static_cast<int>(v), p, area_eps) && tries++ < 8)
      p = reference.project(0.5 * (p + orig));
    if (tries <= 8 && !move_inverts(mesh, static_cast<int>(v), p, area_eps))
      mesh.positions[v] = p;
  }
}

// Decimate to the vertex budget by repeatedly collapsing the shortest legal
// edge; the surviving vertex lands at the midpoint reprojected onto the
// reference surface.
inline void decimate_to_budget(HalfedgeMesh& mesh, int target_vertices,
                               const SurfaceRef& reference) {
  const double area_eps = 1e-14 * reference.bbox_diagonal() * reference.bbox_diagonal();

  struct Entry {
    double length;
    int h;
    bool operator>(const Entry& o) const {
      if (length != o.length) return length > o.length;
      return h > o.h;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (int h : mesh.edge_halfedges()) heap.push({mesh.edge_length(h), h});

  int stale_rounds = 0;
  while (mesh.vertex_count() > target_vertices && !heap.empty()) {
    const Entry e = heap.top();
    heap.pop();
    if (!mesh.halfedge_alive(e.h)) continue;
    const int hc = std::min(e.h, mesh.twin(e.h));
    const double len = mesh.edge_length(hc);
    if (len != e.length || hc != e.h) {
      // Lazy invalidation: refresh the key.
      heap.push({len, hc});
      if (++stale_rounds > 8 * static_cast<int>(mesh.halfedge_count())) break;
      continue;
    }
    stale_rounds = 0;
    if (!mesh.can_collapse(hc)) continue;
    const int a = mesh.origin(hc);
    const int b = mesh.dest(hc);
    const Vec3 mid = reference.project(0.5 * (mesh.positions[a] + mesh.positions[b]));
    if (collapse_inverts(mesh, hc, mid, area_eps)) continue;
    mesh.collapse(hc);
    mesh.positions[b] = mid;
    mesh.for_each_outgoing(b, [&](int he) {
      const int canon = std::min(he, mesh.twin(he));
      heap.push({mesh.edge_length(canon), canon});
      const int hn = mesh.next(he);
      const int canon2 = std::min(hn, mesh.twin(hn));
      heap.push({mesh.edge_length(canon2), canon2});
    });
  }
  mesh.compact();
}

// Simplified, regularized mesh: decimation to the vertex budget followed by
// Lloyd relaxation steps with reprojection onto the input surface.
inline HalfedgeMesh simplify(const HalfedgeMesh& input, const SimplifyConfig& cfg) {
  if (cfg.lloyd_iterations < 0) throw ConfigError("lloyd_iterations must be >= 0");
  int target = cfg.target_vertex_count;
  if (target < 12) {
    if (cfg.strict_budget)
      throw BudgetError("target_vertex_count below minimum budget (12)");
    target = std::max(target, 4);
  }
  if (target > input.vertex_count())
    throw BudgetError("target_vertex_count exceeds input vertex count");

  const SurfaceRef reference(input);
  HalfedgeMesh mesh = input;
  if (target < input.vertex_count()) decimate_to_budget(mesh, target, reference);
  for (int i = 0; i < cfg.lloyd_iterations; ++i) lloyd_relax_step(mesh, reference);
  return mesh;
}

}  // namespace isokit

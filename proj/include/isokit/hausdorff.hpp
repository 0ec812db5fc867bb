#pragma once

#include <cmath>
#include <vector>

#include "isokit/aabb_tree.hpp"
#include "isokit/halfedge_mesh.hpp"

namespace isokit {

struct HausdorffResult {
  double mean_distance = 0;  // model units, over all samples both directions
  double max_distance = 0;
  double mean_pct_bb = 0;  // % of the first mesh's bbox diagonal
  double max_pct_bb = 0;
  long sample_count = 0;
};

namespace hausdorff_detail {

// Per-face sample budget: proportional to area with the requested average
// per-triangle density, never below one. Monotone in density so denser
// sampling draws a superset of the same deterministic per-face stream.
inline std::vector<int> sample_budget(const HalfedgeMesh& mesh, double samples_per_triangle) {
  std::vector<int> budget(mesh.face_capacity(), 0);
  double total_area = 0.0;
  int faces = 0;
  for (int f = 0; f < static_cast<int>(mesh.face_capacity()); ++f)
    if (mesh.face_alive(f)) {
      total_area += mesh.face_area(f);
      ++faces;
    }
  if (faces == 0 || total_area <= 0) return budget;
  const double target_total = samples_per_triangle * faces;
  for (int f = 0; f < static_cast<int>(mesh.face_capacity()); ++f)
    if (mesh.face_alive(f)) {
      const double want = target_total * mesh.face_area(f) / total_area;
      budget[f] = std::max(1, static_cast<int>(std::llround(want)));
    }
  return budget;
}

// All mesh vertices plus per-face uniform barycentric samples drawn from a
// fixed per-face RNG stream.
inline std::vector<Vec3> sample_surface(const HalfedgeMesh& mesh, double samples_per_triangle) {
  std::vector<Vec3> samples;
  for (int v = 0; v < static_cast<int>(mesh.vertex_capacity()); ++v)
    if (mesh.vertex_alive(v)) samples.push_back(mesh.positions[v]);
  const auto budget = sample_budget(mesh, samples_per_triangle);
  for (int f = 0; f < static_cast<int>(mesh.face_capacity()); ++f) {
    if (!mesh.face_alive(f) || budget[f] == 0) continue;
    const auto p = mesh.face_positions(f);
    Rng rng(0x9e3779b97f4a7c15ull ^ (static_cast<std::uint64_t>(f) * 0xbf58476d1ce4e5b9ull));
    for (int s = 0; s < budget[f]; ++s) {
      double u = rng.uniform();
      double v = rng.uniform();
      if (u + v > 1.0) {
        u = 1.0 - u;
        v = 1.0 - v;
      }
      samples.push_back(p[0] + u * (p[1] - p[0]) + v * (p[2] - p[0]));
    }
  }
  return samples;
}

}  // namespace hausdorff_detail

// Symmetric sampled Hausdorff distance: exact closest-point distances from
// surface samples of each mesh to the other mesh. Sampled max is a lower
// bound of the true Hausdorff distance; sample_count is reported so the
// resolution can be audited. %bb values use the FIRST argument's bbox
// diagonal.
inline HausdorffResult hausdorff(const HalfedgeMesh& a, const HalfedgeMesh& b,
                                 double samples_per_triangle = 25.0) {
  using namespace hausdorff_detail;
  const AabbTree tree_a = AabbTree::from_mesh(a);
  const AabbTree tree_b = AabbTree::from_mesh(b);
  const std::vector<Vec3> sa = sample_surface(a, samples_per_triangle);
  const std::vector<Vec3> sb = sample_surface(b, samples_per_triangle);

  std::vector<double> da(sa.size()), db(sb.size());
  parallel_for(sa.size(), [&](std::size_t i) { da[i] = tree_b.closest_point(sa[i]).distance; });
  parallel_for(sb.size(), [&](std::size_t i) { db[i] = tree_a.closest_point(sb[i]).distance; });

  HausdorffResult r;
  double sum = 0.0, mx = 0.0;
  for (double d : da) {
    sum += d;
    mx = std::max(mx, d);
  }
  for (double d : db) {
    sum += d;
    mx = std::max(mx, d);
  }
  r.sample_count = static_cast<long>(sa.size() + sb.size());
  r.mean_distance = r.sample_count > 0 ? sum / static_cast<double>(r.sample_count) : 0.0;
  r.max_distance = mx;
  const double diag = a.bounding_box().diagonal();
  if (diag > 0) {
    r.mean_pct_bb = 100.0 * r.mean_distance / diag;
    r.max_pct_bb = 100.0 * r.max_distance / diag;
  }
  return r;
}

}  // namespace isokit

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "isokit/core.hpp"
#include "isokit/halfedge_mesh.hpp"

namespace isokit {

// A triangle's coordinate in the similarity space: its edge lengths sorted
// ascending. Congruent triangles (up to rigid motion and reflection) map to
// the same point.
struct TrianglePoint {
  double x = 0;  // shortest
  double y = 0;  // middle
  double z = 0;  // longest

  bool operator==(const TrianglePoint&) const = default;
};

// 4D point for curved-patch classification: curvature offset w plus the
// sorted edge lengths of the patch's corner triangle.
struct CurvedPatchPoint {
  double w = 0;
  double x = 0;
  double y = 0;
  double z = 0;

  bool operator==(const CurvedPatchPoint&) const = default;
};

inline TrianglePoint embed(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  const double a = (p1 - p0).norm();
  const double b = (p2 - p1).norm();
  const double c = (p0 - p2).norm();
  double e[3] = {a, b, c};
  std::sort(e, e + 3);
  const double area2 = (p1 - p0).cross(p2 - p0).norm();
  if (!(area2 > 1e-14 * e[2] * e[2])) throw DegenerateError("embed: zero-area triangle");
  return {e[0], e[1], e[2]};
}

inline TrianglePoint embed_face(const HalfedgeMesh& mesh, int f) {
  const auto p = mesh.face_positions(f);
  return embed(p[0], p[1], p[2]);
}

inline std::vector<TrianglePoint> embed_all(const HalfedgeMesh& mesh) {
  std::vector<TrianglePoint> pts;
  pts.reserve(mesh.face_count());
  for (int f = 0; f < static_cast<int>(mesh.face_capacity()); ++f)
    if (mesh.face_alive(f)) pts.push_back(embed_face(mesh, f));
  return pts;
}

// Squared Euclidean distance in the embedding space (units^2).
inline double distance(const TrianglePoint& a, const TrianglePoint& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double distance_curved(const CurvedPatchPoint& a, const CurvedPatchPoint& b) {
  const double dw = a.w - b.w, dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dw * dw + dx * dx + dy * dy + dz * dz;
}

// Componentwise mean; re-sorted in case near-tied member orderings broke
// x <= y <= z under averaging.
inline TrianglePoint centroid(std::span<const TrianglePoint> members) {
  if (members.empty()) throw EmptyClusterError("centroid of empty cluster");
  double sx = 0, sy = 0, sz = 0;
  for (const auto& p : members) {
    sx += p.x;
    sy += p.y;
    sz += p.z;
  }
  const double n = static_cast<double>(members.size());
  double e[3] = {sx / n, sy / n, sz / n};
  std::sort(e, e + 3);
  return {e[0], e[1], e[2]};
}

// Point-space policies shared by the K-means engine.
struct PlanarSpace {
  using Point = TrianglePoint;
  static constexpr int dim = 3;
  static double dist(const Point& a, const Point& b) { return distance(a, b); }
  static Point mean(std::span<const Point> members) { return centroid(members); }
};

struct CurvedSpace {
  using Point = CurvedPatchPoint;
  static constexpr int dim = 4;
  static double dist(const Point& a, const Point& b) { return distance_curved(a, b); }
  static Point mean(std::span<const Point> members) {
    if (members.empty()) throw EmptyClusterError("centroid of empty cluster");
    double sw = 0, sx = 0, sy = 0, sz = 0;
    for (const auto& p : members) {
      sw += p.w;
      sx += p.x;
      sy += p.y;
      sz += p.z;
    }
    const double n = static_cast<double>(members.size());
    double e[3] = {sx / n, sy / n, sz / n};
    std::sort(e, e + 3);
    return {sw / n, e[0], e[1], e[2]};
  }
};

// Labels + centroids + bookkeeping for one clustering of n points into k
// classes. energy is the sum of squared distances (the minimized objective);
// error_max / error_mean are in length units (square roots), the form used
// for thresholds and reporting.
template <typename SpaceT>
struct ClusterStateT {
  using Space = SpaceT;
  using Point = typename SpaceT::Point;

  std::vector<int> labels;
  std::vector<Point> centroids;
  std::vector<double> per_point_distance;  // squared, to own centroid
  double energy = 0.0;
  double error_max = 0.0;
  double error_mean = 0.0;

  int k() const { return static_cast<int>(centroids.size()); }
  std::size_t size() const { return labels.size(); }
};

using ClusterState = ClusterStateT<PlanarSpace>;
using CurvedClusterState = ClusterStateT<CurvedSpace>;

// Recompute distances, energy and error aggregates from labels + centroids.
template <typename SpaceT>
void refresh_state(ClusterStateT<SpaceT>& state,
                   std::span<const typename SpaceT::Point> points) {
  const std::size_t n = points.size();
  state.per_point_distance.resize(n);
  double sum = 0.0, err_sum = 0.0, err_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = SpaceT::dist(points[i], state.centroids[state.labels[i]]);
    state.per_point_distance[i] = d;
    sum += d;
    const double e = std::sqrt(d);
    err_sum += e;
    err_max = std::max(err_max, e);
  }
  state.energy = sum;
  state.error_max = err_max;
  state.error_mean = n > 0 ? err_sum / static_cast<double>(n) : 0.0;
}

// Independent from-scratch energy recomputation (Eq. 1 form), used as the
// oracle against incremental bookkeeping.
template <typename SpaceT>
double recompute_energy(std::span<const typename SpaceT::Point> points,
                        std::span<const int> labels,
                        std::span<const typename SpaceT::Point> centroids) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    sum += SpaceT::dist(points[i], centroids[labels[i]]);
  return sum;
}

template <typename SpaceT>
double state_energy(const ClusterStateT<SpaceT>& state) {
  return state.energy;
}

struct ClusterErrors {
  double max_abs = 0;
  double mean_abs = 0;
  double max_pct = 0;   // % of mean edge length
  double mean_pct = 0;
};

template <typename SpaceT>
ClusterErrors cluster_errors(const ClusterStateT<SpaceT>& state, double mean_edge_length) {
  ClusterErrors e;
  e.max_abs = state.error_max;
  e.mean_abs = state.error_mean;
  if (mean_edge_length > 0) {
    e.max_pct = 100.0 * state.error_max / mean_edge_length;
    e.mean_pct = 100.0 * state.error_mean / mean_edge_length;
  }
  return e;
}

}  // namespace isokit

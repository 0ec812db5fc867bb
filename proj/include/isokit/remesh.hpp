#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "isokit/geom_checks.hpp"
#include "isokit/halfedge_mesh.hpp"
#include "isokit/kmeans.hpp"
#include "isokit/metric.hpp"

namespace isokit {

struct RemeshConfig {
  // Vertex translation limit as a fraction of the mean edge length; larger
  // values converge faster at the cost of shape fidelity.
  double displacement_band = 0.25;
  int flip_valence_target = 6;
  bool collapse_enabled = true;
};

// Per-edge length correction toward the rank-matched centroid edge.
struct EdgePressure {
  int edge = -1;               // canonical halfedge id
  double required_length = 0;  // mean of the two incident faces' targets
  double delta = 0;            // required - current
  Vec3 target_a{0, 0, 0};      // new position the edge asks of origin(h)
  Vec3 target_b{0, 0, 0};      // ... and of dest(h)
};

namespace remesh_detail {

// Rank (0 = shortest) of halfedge h among the three edges of its face; ties
// resolved by halfedge id so rank-matching is deterministic.
inline int edge_rank_in_face(const HalfedgeMesh& mesh, int h) {
  const int h1 = mesh.next(h);
  const int h2 = mesh.next(h1);
  const double l0 = mesh.edge_length(h);
  const double l1 = mesh.edge_length(h1);
  const double l2 = mesh.edge_length(h2);
  int rank = 0;
  if (l1 < l0 || (l1 == l0 && h1 < h)) ++rank;
  if (l2 < l0 || (l2 == l0 && h2 < h)) ++rank;
  return rank;
}

inline double centroid_component(const TrianglePoint& c, int rank) {
  return rank == 0 ? c.x : (rank == 1 ? c.y : c.z);
}

// Required length of edge h: each incident face asks for the centroid
// component matching the edge's length rank in that face; the edge gets the
// mean of the two.
inline double required_length(const HalfedgeMesh& mesh, int h,
                              const std::vector<int>& labels,
                              const std::vector<TrianglePoint>& centroids) {
  const int t = mesh.twin(h);
  const double ra =
      centroid_component(centroids[labels[mesh.face(h)]], edge_rank_in_face(mesh, h));
  const double rb =
      centroid_component(centroids[labels[mesh.face(t)]], edge_rank_in_face(mesh, t));
  return 0.5 * (ra + rb);
}

inline double area_eps_for(const HalfedgeMesh& mesh) {
  const double d = mesh.bounding_box().diagonal();
  return 1e-14 * d * d;
}

}  // namespace remesh_detail

// One-time valence regularization: flip every edge whose flip strictly
// reduces the summed squared valence deviation from the target over the four
// affected vertices. Edges are scanned in ascending id order.
inline int optimize_valence(HalfedgeMesh& mesh, int valence_target = 6) {
  const double area_eps = remesh_detail::area_eps_for(mesh);
  int flips = 0;
  for (int h : mesh.edge_halfedges()) {
    if (!mesh.halfedge_alive(h) || !mesh.can_flip(h)) continue;
    if (!flip_geometry_ok(mesh, h, area_eps)) continue;
    const int t = mesh.twin(h);
    const int a = mesh.origin(h);
    const int b = mesh.dest(h);
    const int c = mesh.dest(mesh.next(h));
    const int d = mesh.dest(mesh.next(t));
    auto sqdev = [&](int v, int delta) {
      const double e = mesh.valence(v) + delta - valence_target;
      return e * e;
    };
    const double before = sqdev(a, 0) + sqdev(b, 0) + sqdev(c, 0) + sqdev(d, 0);
    const double after = sqdev(a, -1) + sqdev(b, -1) + sqdev(c, 1) + sqdev(d, 1);
    if (after < before) {
      mesh.flip(h);
      ++flips;
    }
  }
  return flips;
}

// Cluster-aware edge flips: an edge is flipped iff the summed squared
// embedding distances of its two triangles to their nearest centroids
// strictly decreases. Labels, per-point distances and energy are updated
// incrementally; centroids stay fixed for the pass.
inline int improve_by_flip(HalfedgeMesh& mesh, ClusterState& state,
                           std::vector<TrianglePoint>& points) {
  const double area_eps = remesh_detail::area_eps_for(mesh);
  int flips = 0;
  for (int h : mesh.edge_halfedges()) {
    if (!mesh.halfedge_alive(h) || !mesh.can_flip(h)) continue;
    if (!flip_geometry_ok(mesh, h, area_eps)) continue;
    const int f0 = mesh.face(h);
    const int f1 = mesh.face(mesh.twin(h));
    const double pre = state.per_point_distance[f0] + state.per_point_distance[f1];
    std::array<Vec3, 3> t0, t1;
    flipped_triangles(mesh, h, t0, t1);
    TrianglePoint e0, e1;
    try {
      e0 = embed(t0[0], t0[1], t0[2]);
      e1 = embed(t1[0], t1[1], t1[2]);
    } catch (const DegenerateError&) {
      continue;
    }
    const int l0 = kmeans_detail::nearest<PlanarSpace>(e0, state.centroids);
    const int l1 = kmeans_detail::nearest<PlanarSpace>(e1, state.centroids);
    const double post = distance(e0, state.centroids[l0]) + distance(e1, state.centroids[l1]);
    if (post < pre) {
      mesh.flip(h);
      points[f0] = e0;
      points[f1] = e1;
      state.labels[f0] = l0;
      state.labels[f1] = l1;
      state.per_point_distance[f0] = distance(e0, state.centroids[l0]);
      state.per_point_distance[f1] = distance(e1, state.centroids[l1]);
      state.energy += post - pre;
      ++flips;
    }
  }
  return flips;
}

// Cluster-aware edge collapses (single pass, ascending edge id): an edge is
// collapsed iff legal and the summed embedding distances over the merged
// 1-ring strictly decrease, with the surviving vertex at the midpoint and
// ring triangles re-assigned to their nearest centroids. Compacts the mesh
// afterwards and filters state arrays to the new face ids.
inline int improve_by_collapse(HalfedgeMesh& mesh, ClusterState& state,
                               std::vector<TrianglePoint>& points) {
  const double area_eps = remesh_detail::area_eps_for(mesh);
  int collapses = 0;
  for (int h = 0; h < static_cast<int>(mesh.halfedges.size()); ++h) {
    if (!mesh.halfedge_alive(h) || h > mesh.twin(h)) continue;
    if (!mesh.can_collapse(h)) continue;
    const int a = mesh.origin(h);
    const int b = mesh.dest(h);
    const int f0 = mesh.face(h);
    const int f1 = mesh.face(mesh.twin(h));
    const Vec3 mid = 0.5 * (mesh.positions[a] + mesh.positions[b]);
    if (collapse_inverts(mesh, h, mid, area_eps)) continue;

    // Ring faces (a-ring plus b-ring, without the two dying faces).
    std::vector<int> ring;
    mesh.for_each_outgoing(a, [&](int he) { ring.push_back(mesh.face(he)); });
    mesh.for_each_outgoing(b, [&](int he) {
      const int f = mesh.face(he);
      bool seen = false;
      for (int g : ring) seen = seen || g == f;
      if (!seen) ring.push_back(f);
    });

    double pre = 0.0;
    for (int f : ring) pre += state.per_point_distance[f];

    struct Update {
      int face;
      TrianglePoint p;
      int label;
      double dist;
    };
    std::vector<Update> updates;
    double post = 0.0;
    bool degenerate = false;
    for (int f : ring) {
      if (f == f0 || f == f1) continue;
      const auto fv = mesh.face_vertices(f);
      Vec3 q[3];
      for (int i = 0; i < 3; ++i)
        q[i] = (fv[i] == a || fv[i] == b) ? mid : mesh.positions[fv[i]];
      TrianglePoint e;
      try {
        e = embed(q[0], q[1], q[2]);
      } catch (const DegenerateError&) {
        degenerate = true;
        break;
      }
      const int l = kmeans_detail::nearest<PlanarSpace>(e, state.centroids);
      const double d = distance(e, state.centroids[l]);
      updates.push_back({f, e, l, d});
      post += d;
    }
    if (degenerate || !(post < pre)) continue;

    mesh.collapse(h);
    mesh.positions[b] = mid;
    for (const auto& u : updates) {
      points[u.face] = u.p;
      state.labels[u.face] = u.label;
      state.per_point_distance[u.face] = u.dist;
    }
    state.energy += post - pre;
    ++collapses;
  }

  if (collapses > 0) {
    const auto maps = mesh.compact();
    std::vector<TrianglePoint> new_points(mesh.face_count());
    std::vector<int> new_labels(mesh.face_count());
    std::vector<double> new_dist(mesh.face_count());
    for (std::size_t f = 0; f < maps.face_map.size(); ++f) {
      const int nf = maps.face_map[f];
      if (nf < 0) continue;
      new_points[nf] = points[f];
      new_labels[nf] = state.labels[f];
      new_dist[nf] = state.per_point_distance[f];
    }
    points.swap(new_points);
    state.labels.swap(new_labels);
    state.per_point_distance.swap(new_dist);
    double err_sum = 0.0, err_max = 0.0;
    for (double d : state.per_point_distance) {
      const double e = std::sqrt(d);
      err_sum += e;
      err_max = std::max(err_max, e);
    }
    state.error_max = err_max;
    state.error_mean =
        state.per_point_distance.empty()
            ? 0.0
            : err_sum / static_cast<double>(state.per_point_distance.size());
  }
  return collapses;
}

// Pressures for every canonical edge against the rank-matched centroid edge
// lengths; the correction is split evenly between the two endpoints.
inline std::vector<EdgePressure> edge_pressures(const HalfedgeMesh& mesh,
                                                const ClusterState& state) {
  std::vector<EdgePressure> out;
  for (int h : mesh.edge_halfedges()) {
    EdgePressure ep;
    ep.edge = h;
    const Vec3 pa = mesh.positions[mesh.origin(h)];
    const Vec3 pb = mesh.positions[mesh.dest(h)];
    const double len = (pb - pa).norm();
    ep.required_length = remesh_detail::required_length(mesh, h, state.labels, state.centroids);
    ep.delta = ep.required_length - len;
    const Vec3 u = len > 0 ? Vec3((pb - pa) / len) : Vec3::Zero();
    ep.target_a = pa - u * (0.5 * ep.delta);
    ep.target_b = pb + u * (0.5 * ep.delta);
    out.push_back(ep);
  }
  return out;
}

// Pressure-driven vertex translation: each vertex's candidate position is the
// mean of its incident-edge targets (computed against the pre-move snapshot).
// A candidate outside the displacement band is replaced once by the midpoint
// toward the current position; moves that would invert a face fall back the
// same way and are otherwise rejected.
inline int translate_vertices(HalfedgeMesh& mesh, const ClusterState& state,
                              const RemeshConfig& cfg) {
  if (cfg.displacement_band <= 0.0 || cfg.displacement_band > 1.0)
    throw ConfigError("displacement_band must be in (0, 1]");
  const double area_eps = remesh_detail::area_eps_for(mesh);
  const double band = cfg.displacement_band * mesh.mean_edge_length();

  const std::size_t nv = mesh.vertex_capacity();
  std::vector<Vec3> sum(nv, Vec3::Zero());
  std::vector<int> count(nv, 0);
  for (const EdgePressure& ep : edge_pressures(mesh, state)) {
    const int a = mesh.origin(ep.edge);
    const int b = mesh.dest(ep.edge);
    sum[a] += ep.target_a;
    ++count[a];
    sum[b] += ep.target_b;
    ++count[b];
  }

  int moved = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    if (!mesh.vertex_alive(static_cast<int>(v)) || count[v] == 0) continue;
    const Vec3 start = mesh.positions[v];
    Vec3 candidate = sum[v] / static_cast<double>(count[v]);
    if ((candidate - start).norm() > band) candidate = 0.5 * (candidate + start);
    if ((candidate - start).norm() > band) continue;
    if (move_inverts(mesh, static_cast<int>(v), candidate, area_eps)) {
      candidate = 0.5 * (candidate + start);
      if (move_inverts(mesh, static_cast<int>(v), candidate, area_eps)) continue;
    }
    if ((candidate - start).squaredNorm() > 0.0) {
      mesh.positions[v] = candidate;
      ++moved;
    }
  }
  return moved;
}

}  // namespace isokit

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "isokit/core.hpp"

namespace isokit {

struct BoundingBox {
  Vec3 min{0, 0, 0};
  Vec3 max{0, 0, 0};

  double diagonal() const { return (max - min).norm(); }
  Vec3 center() const { return 0.5 * (min + max); }
};

struct Halfedge {
  int origin = -1;
  int twin = -1;
  int next = -1;
  int face = -1;
};

// Index-based halfedge mesh for closed manifold triangle surfaces.
// Elements are addressed by integer ids; mutations (flip, collapse) tombstone
// dead elements and compact() renumbers. Plain value semantics: copying the
// struct snapshots the whole mesh.
class HalfedgeMesh {
 public:
  std::vector<Vec3> positions;
  std::vector<Halfedge> halfedges;
  std::vector<int> vertex_halfedge;  // one outgoing halfedge per vertex
  std::vector<int> face_halfedge;    // one halfedge per face
  std::vector<std::uint8_t> v_alive;
  std::vector<std::uint8_t> h_alive;
  std::vector<std::uint8_t> f_alive;
  int n_vertices = 0;
  int n_halfedges = 0;
  int n_faces = 0;

  static HalfedgeMesh build(const std::vector<Vec3>& points,
                            const std::vector<std::array<int, 3>>& tris) {
    HalfedgeMesh m;
    m.positions = points;
    const int nv = static_cast<int>(points.size());
    const int nf = static_cast<int>(tris.size());
    m.vertex_halfedge.assign(nv, -1);
    m.face_halfedge.assign(nf, -1);
    m.halfedges.assign(static_cast<std::size_t>(nf) * 3, Halfedge{});
    m.v_alive.assign(nv, 1);
    m.h_alive.assign(static_cast<std::size_t>(nf) * 3, 1);
    m.f_alive.assign(nf, 1);
    m.n_vertices = nv;
    m.n_halfedges = nf * 3;
    m.n_faces = nf;

    std::unordered_map<std::uint64_t, int> directed;
    directed.reserve(static_cast<std::size_t>(nf) * 3);
    auto key = [nv](int a, int b) {
      return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(nv) +
             static_cast<std::uint64_t>(b);
    };

    for (int f = 0; f < nf; ++f) {
      const auto& t = tris[f];
      for (int i = 0; i < 3; ++i) {
        if (t[i] < 0 || t[i] >= nv) throw TopologyError("face references invalid vertex");
      }
      if (t[0] == t[1] || t[1] == t[2] || t[2] == t[0])
        throw TopologyError("face with repeated vertex");
      for (int i = 0; i < 3; ++i) {
        const int h = 3 * f + i;
        const int a = t[i];
        const int b = t[(i + 1) % 3];
        m.halfedges[h].origin = a;
        m.halfedges[h].next = 3 * f + (i + 1) % 3;
        m.halfedges[h].face = f;
        m.vertex_halfedge[a] = h;
        if (!directed.emplace(key(a, b), h).second)
          throw TopologyError("non-manifold or inconsistently oriented edge");
      }
      m.face_halfedge[f] = 3 * f;
    }

    for (int h = 0; h < static_cast<int>(m.halfedges.size()); ++h) {
      const int a = m.halfedges[h].origin;
      const int b = m.dest(h);
      auto it = directed.find(key(b, a));
      if (it == directed.end()) throw TopologyError("boundary edge: mesh is not closed");
      m.halfedges[h].twin = it->second;
    }

    // Vertex manifoldness: the twin/next orbit around each vertex must reach
    // every outgoing halfedge (a single cone, not two pinched together).
    std::vector<int> outgoing_count(nv, 0);
    for (const auto& he : m.halfedges) ++outgoing_count[he.origin];
    for (int v = 0; v < nv; ++v) {
      if (m.vertex_halfedge[v] < 0) throw TopologyError("isolated vertex");
      int steps = 0;
      int h = m.vertex_halfedge[v];
      do {
        h = m.halfedges[m.halfedges[h].twin].next;
        if (++steps > outgoing_count[v]) break;
      } while (h != m.vertex_halfedge[v]);
      if (steps != outgoing_count[v]) throw TopologyError("non-manifold vertex");
    }

    // Reject degenerate faces relative to the model scale.
    const double diag2 = m.bounding_box().diagonal() * m.bounding_box().diagonal();
    const double eps = 1e-12 * diag2;
    for (int f = 0; f < nf; ++f) {
      if (m.face_area(f) <= eps) throw TopologyError("degenerate (zero-area) face");
    }
    return m;
  }

  // ---- element access -------------------------------------------------

  int next(int h) const { return halfedges[h].next; }
  int prev(int h) const { return halfedges[halfedges[h].next].next; }
  int twin(int h) const { return halfedges[h].twin; }
  int origin(int h) const { return halfedges[h].origin; }
  int dest(int h) const { return halfedges[halfedges[h].next].origin; }
  int face(int h) const { return halfedges[h].face; }

  bool vertex_alive(int v) const { return v_alive[v] != 0; }
  bool halfedge_alive(int h) const { return h_alive[h] != 0; }
  bool face_alive(int f) const { return f_alive[f] != 0; }

  std::size_t vertex_capacity() const { return positions.size(); }
  std::size_t face_capacity() const { return face_halfedge.size(); }

  int vertex_count() const { return n_vertices; }
  int face_count() const { return n_faces; }
  int halfedge_count() const { return n_halfedges; }
  int edge_count() const { return halfedge_count() / 2; }
  int euler_characteristic() const { return vertex_count() - edge_count() + face_count(); }

  bool is_compact() const {
    for (auto a : v_alive)
      if (!a) return false;
    for (auto a : f_alive)
      if (!a) return false;
    return true;
  }

  std::array<int, 3> face_vertices(int f) const {
    const int h0 = face_halfedge[f];
    const int h1 = halfedges[h0].next;
    const int h2 = halfedges[h1].next;
    return {halfedges[h0].origin, halfedges[h1].origin, halfedges[h2].origin};
  }

  std::array<Vec3, 3> face_positions(int f) const {
    const auto v = face_vertices(f);
    return {positions[v[0]], positions[v[1]], positions[v[2]]};
  }

  Vec3 face_normal(int f) const {
    const auto p = face_positions(f);
    Vec3 n = (p[1] - p[0]).cross(p[2] - p[0]);
    const double len = n.norm();
    if (len <= 0.0) throw DegenerateError("face normal of zero-area face");
    return n / len;
  }

  // Area-weighted face normal (half the edge cross product); never throws.
  Vec3 face_normal_weighted(int f) const {
    const auto p = face_positions(f);
    return 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
  }

  double face_area(int f) const {
    const auto p = face_positions(f);
    return 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
  }

  Vec3 face_centroid(int f) const {
    const auto p = face_positions(f);
    return (p[0] + p[1] + p[2]) / 3.0;
  }

  // Mean of incident face normals, renormalized.
  Vec3 vertex_normal(int v) const {
    Vec3 sum = Vec3::Zero();
    int faces_seen = 0;
    for_each_outgoing(v, [&](int h) {
      const int f = halfedges[h].face;
      const auto p = face_positions(f);
      Vec3 n = (p[1] - p[0]).cross(p[2] - p[0]);
      const double len = n.norm();
      if (len > 0.0) {
        sum += n / len;
        ++faces_seen;
      }
    });
    const double len = sum.norm();
    if (faces_seen == 0 || len <= 1e-300)
      throw DegenerateError("vertex normal undefined: all incident faces degenerate");
    return sum / len;
  }

  int valence(int v) const {
    int n = 0;
    for_each_outgoing(v, [&](int) { ++n; });
    return n;
  }

  template <typename Fn>
  void for_each_outgoing(int v, const Fn& fn) const {
    const int start = vertex_halfedge[v];
    int h = start;
    do {
      fn(h);
      h = halfedges[halfedges[h].twin].next;
    } while (h != start);
  }

  // Vertices adjacent to v, in orbit order.
  std::vector<int> vertex_neighbors(int v) const {
    std::vector<int> out;
    for_each_outgoing(v, [&](int h) { out.push_back(dest(h)); });
    return out;
  }

  std::vector<int> vertex_faces(int v) const {
    std::vector<int> out;
    for_each_outgoing(v, [&](int h) { out.push_back(halfedges[h].face); });
    return out;
  }

  double edge_length(int h) const { return (positions[dest(h)] - positions[origin(h)]).norm(); }

  // Canonical edges: alive halfedges h with h < twin(h), ascending.
  std::vector<int> edge_halfedges() const {
    std::vector<int> out;
    out.reserve(halfedges.size() / 2);
    for (int h = 0; h < static_cast<int>(halfedges.size()); ++h)
      if (h_alive[h] && h < halfedges[h].twin) out.push_back(h);
    return out;
  }

  double mean_edge_length() const {
    double sum = 0.0;
    int n = 0;
    for (int h = 0; h < static_cast<int>(halfedges.size()); ++h) {
      if (h_alive[h] && h < halfedges[h].twin) {
        sum += edge_length(h);
        ++n;
      }
    }
    return n > 0 ? sum / n : 0.0;
  }

  BoundingBox bounding_box() const {
    BoundingBox bb;
    bool first = true;
    for (std::size_t v = 0; v < positions.size(); ++v) {
      if (!v_alive[v]) continue;
      if (first) {
        bb.min = bb.max = positions[v];
        first = false;
      } else {
        bb.min = bb.min.cwiseMin(positions[v]);
        bb.max = bb.max.cwiseMax(positions[v]);
      }
    }
    return bb;
  }

  double total_area() const {
    double a = 0.0;
    for (std::size_t f = 0; f < face_halfedge.size(); ++f)
      if (f_alive[f]) a += face_area(static_cast<int>(f));
    return a;
  }

  double signed_volume() const {
    double vol = 0.0;
    for (std::size_t f = 0; f < face_halfedge.size(); ++f) {
      if (!f_alive[f]) continue;
      const auto p = face_positions(static_cast<int>(f));
      vol += p[0].dot(p[1].cross(p[2])) / 6.0;
    }
    return vol;
  }

  // ---- mutations -------------------------------------------------------

  // Flip of the diagonal a-b of the quad (a, b) with opposite vertices c, d.
  bool can_flip(int h) const {
    if (!h_alive[h]) return false;
    const int t = halfedges[h].twin;
    const int a = halfedges[h].origin;
    const int b = dest(h);
    const int c = dest(halfedges[h].next);
    const int d = dest(halfedges[t].next);
    if (c == d) return false;
    if (valence(a) <= 3 || valence(b) <= 3) return false;
    // Flip would create edge c-d; reject if it already exists.
    bool exists = false;
    for_each_outgoing(c, [&](int he) {
      if (dest(he) == d) exists = true;
    });
    return !exists;
  }

  void flip(int h) {
    const int t = halfedges[h].twin;
    const int hn = halfedges[h].next;   // b -> c
    const int hp = halfedges[hn].next;  // c -> a
    const int tn = halfedges[t].next;   // a -> d
    const int tp = halfedges[tn].next;  // d -> b
    const int a = halfedges[h].origin;
    const int b = halfedges[t].origin;
    const int c = halfedges[hp].origin;
    const int d = halfedges[tp].origin;
    const int f0 = halfedges[h].face;
    const int f1 = halfedges[t].face;

    halfedges[h].origin = c;  // h: c -> d
    halfedges[t].origin = d;  // t: d -> c

    halfedges[h].next = tp;
    halfedges[tp].next = hn;
    halfedges[hn].next = h;
    halfedges[h].face = halfedges[tp].face = halfedges[hn].face = f0;
    face_halfedge[f0] = h;

    halfedges[t].next = hp;
    halfedges[hp].next = tn;
    halfedges[tn].next = t;
    halfedges[t].face = halfedges[hp].face = halfedges[tn].face = f1;
    face_halfedge[f1] = t;

    vertex_halfedge[a] = tn;
    vertex_halfedge[b] = hn;
    vertex_halfedge[c] = hp;
    vertex_halfedge[d] = tp;
  }

  // Halfedge collapse of h = (a -> b): removes vertex a (merged into b), the
  // two incident faces, and three edges. Link condition plus valence guards.
  bool can_collapse(int h) const {
    if (!h_alive[h]) return false;
    if (vertex_count() <= 4) return false;
    const int t = halfedges[h].twin;
    const int a = halfedges[h].origin;
    const int b = dest(h);
    const int c = dest(halfedges[h].next);
    const int d = dest(halfedges[t].next);
    if (c == d) return false;
    if (valence(c) <= 3 || valence(d) <= 3) return false;
    // Link condition: common neighbors of a and b must be exactly {c, d}.
    std::vector<int> na = vertex_neighbors(a);
    std::vector<int> nb = vertex_neighbors(b);
    std::sort(na.begin(), na.end());
    std::sort(nb.begin(), nb.end());
    std::vector<int> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(),
                          std::back_inserter(common));
    if (common.size() != 2) return false;
    return (common[0] == std::min(c, d)) && (common[1] == std::max(c, d));
  }

  // Caller is responsible for setting positions[b] (e.g. to the midpoint)
  // before or after; topology only.
  void collapse(int h) {
    const int t = halfedges[h].twin;
    const int a = halfedges[h].origin;
    const int b = halfedges[t].origin;
    const int hn = halfedges[h].next;   // b -> c
    const int hp = halfedges[hn].next;  // c -> a
    const int tn = halfedges[t].next;   // a -> d
    const int tp = halfedges[tn].next;  // d -> b
    const int f0 = halfedges[h].face;
    const int f1 = halfedges[t].face;
    const int c = halfedges[hp].origin;
    const int d = halfedges[tp].origin;

    // Reroute all halfedges leaving a to leave b.
    std::vector<int> out;
    for_each_outgoing(a, [&](int he) { out.push_back(he); });
    for (int he : out) halfedges[he].origin = b;

    // Stitch the two side gaps.
    const int o_bc = halfedges[hn].twin;  // c -> b
    const int o_ca = halfedges[hp].twin;  // (a -> c), origin now b
    halfedges[o_bc].twin = o_ca;
    halfedges[o_ca].twin = o_bc;
    const int o_ad = halfedges[tn].twin;  // d -> a ... stays d -> (b)
    const int o_db = halfedges[tp].twin;  // b -> d
    halfedges[o_ad].twin = o_db;
    halfedges[o_db].twin = o_ad;

    h_alive[h] = h_alive[t] = h_alive[hn] = h_alive[hp] = h_alive[tn] = h_alive[tp] = 0;
    f_alive[f0] = f_alive[f1] = 0;
    v_alive[a] = 0;
    n_halfedges -= 6;
    n_faces -= 2;
    n_vertices -= 1;

    vertex_halfedge[b] = o_ca;
    vertex_halfedge[c] = o_bc;
    vertex_halfedge[d] = o_ad;
  }

  struct CompactMaps {
    std::vector<int> vertex_map;  // old id -> new id, -1 if dead
    std::vector<int> face_map;
  };

  // Renumber elements dropping tombstones; returns old->new maps.
  CompactMaps compact() {
    CompactMaps maps;
    maps.vertex_map.assign(positions.size(), -1);
    maps.face_map.assign(face_halfedge.size(), -1);
    std::vector<int> hmap(halfedges.size(), -1);

    int nv = 0;
    for (std::size_t v = 0; v < positions.size(); ++v)
      if (v_alive[v]) maps.vertex_map[v] = nv++;
    int nf = 0;
    for (std::size_t f = 0; f < face_halfedge.size(); ++f)
      if (f_alive[f]) maps.face_map[f] = nf++;
    int nh = 0;
    for (std::size_t h = 0; h < halfedges.size(); ++h)
      if (h_alive[h]) hmap[h] = nh++;

    std::vector<Vec3> pos(nv);
    std::vector<int> vh(nv), fh(nf);
    std::vector<Halfedge> hes(nh);
    for (std::size_t v = 0; v < positions.size(); ++v)
      if (v_alive[v]) {
        pos[maps.vertex_map[v]] = positions[v];
        vh[maps.vertex_map[v]] = hmap[vertex_halfedge[v]];
      }
    for (std::size_t f = 0; f < face_halfedge.size(); ++f)
      if (f_alive[f]) fh[maps.face_map[f]] = hmap[face_halfedge[f]];
    for (std::size_t h = 0; h < halfedges.size(); ++h)
      if (h_alive[h]) {
        Halfedge he = halfedges[h];
        he.origin = maps.vertex_map[he.origin];
        he.twin = hmap[he.twin];
        he.next = hmap[he.next];
        he.face = maps.face_map[he.face];
        hes[hmap[h]] = he;
      }

    positions.swap(pos);
    vertex_halfedge.swap(vh);
    face_halfedge.swap(fh);
    halfedges.swap(hes);
    v_alive.assign(nv, 1);
    h_alive.assign(nh, 1);
    f_alive.assign(nf, 1);
    n_vertices = nv;
    n_halfedges = nh;
    n_faces = nf;
    return maps;
  }

  // Exported index form (compact meshes only).
  void to_indexed(std::vector<Vec3>& points, std::vector<std::array<int, 3>>& tris) const {
    points.clear();
    tris.clear();
    std::vector<int> vmap(positions.size(), -1);
    for (std::size_t v = 0; v < positions.size(); ++v) {
      if (!v_alive[v]) continue;
      vmap[v] = static_cast<int>(points.size());
      points.push_back(positions[v]);
    }
    for (std::size_t f = 0; f < face_halfedge.size(); ++f) {
      if (!f_alive[f]) continue;
      const auto fv = face_vertices(static_cast<int>(f));
      tris.push_back({vmap[fv[0]], vmap[fv[1]], vmap[fv[2]]});
    }
  }

  // Structural audit: twin involution, face 3-cycles, orbit closure, no
  // boundary. Throws TopologyError on the first violation.
  void audit() const {
    for (int h = 0; h < static_cast<int>(halfedges.size()); ++h) {
      if (!h_alive[h]) continue;
      const int t = halfedges[h].twin;
      if (t < 0 || !h_alive[t]) throw TopologyError("audit: dead or missing twin");
      if (halfedges[t].twin != h) throw TopologyError("audit: twin not involutive");
      if (halfedges[h].next == h) throw TopologyError("audit: next self-loop");
      if (origin(t) != dest(h)) throw TopologyError("audit: twin origin mismatch");
      const int n3 = halfedges[halfedges[halfedges[h].next].next].next;
      if (n3 != h) throw TopologyError("audit: face not a 3-cycle");
      if (!v_alive[halfedges[h].origin]) throw TopologyError("audit: dead origin vertex");
      if (!f_alive[halfedges[h].face]) throw TopologyError("audit: dead face");
      if (origin(h) == dest(h)) throw TopologyError("audit: degenerate edge");
    }
    for (int f = 0; f < static_cast<int>(face_halfedge.size()); ++f) {
      if (!f_alive[f]) continue;
      const int h = face_halfedge[f];
      if (!h_alive[h] || halfedges[h].face != f) throw TopologyError("audit: face anchor");
    }
    std::vector<int> outgoing(positions.size(), 0);
    for (int h = 0; h < static_cast<int>(halfedges.size()); ++h)
      if (h_alive[h]) ++outgoing[halfedges[h].origin];
    for (int v = 0; v < static_cast<int>(positions.size()); ++v) {
      if (!v_alive[v]) continue;
      const int start = vertex_halfedge[v];
      if (start < 0 || !h_alive[start] || halfedges[start].origin != v)
        throw TopologyError("audit: vertex anchor");
      int steps = 0;
      int h = start;
      do {
        h = halfedges[halfedges[h].twin].next;
        if (++steps > outgoing[v]) throw TopologyError("audit: vertex orbit open");
      } while (h != start);
      if (steps != outgoing[v]) throw TopologyError("audit: non-manifold vertex orbit");
    }
  }
};

}  // namespace isokit

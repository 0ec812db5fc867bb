#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "isokit/halfedge_mesh.hpp"

namespace isokit {

// Closest point on triangle (p0, p1, p2) to q. Ericson, Real-Time Collision
// Detection, 5.1.5.
inline Vec3 closest_point_on_triangle(const Vec3& q, const Vec3& p0, const Vec3& p1,
                                      const Vec3& p2) {
  const Vec3 ab = p1 - p0;
  const Vec3 ac = p2 - p0;
  const Vec3 ap = q - p0;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return p0;

  const Vec3 bp = q - p1;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return p1;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return p0 + v * ab;
  }

  const Vec3 cp = q - p2;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return p2;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return p0 + w * ac;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return p1 + w * (p2 - p1);
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return p0 + ab * v + ac * w;
}

// Static axis-aligned BVH over a triangle soup; median split on the longest
// axis. Supports exact closest-point queries.
class AabbTree {
 public:
  struct Triangle {
    Vec3 p0, p1, p2;
    int id = -1;  // caller's triangle id (face id)
  };

  AabbTree() = default;

  explicit AabbTree(std::vector<Triangle> tris) : tris_(std::move(tris)) {
    if (tris_.empty()) return;
    order_.resize(tris_.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(tris_.size() * 2);
    build_node(0, static_cast<int>(order_.size()));
  }

  static AabbTree from_mesh(const HalfedgeMesh& mesh) {
    std::vector<Triangle> tris;
    tris.reserve(mesh.face_count());
    for (int f = 0; f < static_cast<int>(mesh.face_capacity()); ++f) {
      if (!mesh.face_alive(f)) continue;
      const auto p = mesh.face_positions(f);
      tris.push_back({p[0], p[1], p[2], f});
    }
    return AabbTree(std::move(tris));
  }

  bool empty() const { return nodes_.empty(); }

  struct Hit {
    Vec3 point{0, 0, 0};
    double distance = std::numeric_limits<double>::infinity();
    int triangle = -1;  // caller id
  };

  Hit closest_point(const Vec3& q) const {
    Hit hit;
    if (!nodes_.empty()) search(0, q, hit);
    return hit;
  }

 private:
  struct Node {
    Vec3 lo, hi;
    int left = -1, right = -1;  // internal children
    int begin = 0, end = 0;     // leaf range in order_
    bool leaf() const { return left < 0; }
  };

  double box_distance(const Node& n, const Vec3& q) const {
    const Vec3 d = (n.lo - q).cwiseMax(Vec3::Zero()).cwiseMax(q - n.hi);
    return d.norm();
  }

  int build_node(int begin, int end) {
    Node node;
    node.lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    node.hi = -node.lo;
    for (int i = begin; i < end; ++i) {
      const Triangle& t = tris_[order_[i]];
      node.lo = node.lo.cwiseMin(t.p0).cwiseMin(t.p1).cwiseMin(t.p2);
      node.hi = node.hi.cwiseMax(t.p0).cwiseMax(t.p1).cwiseMax(t.p2);
    }
    const int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= 4) {
      nodes_[idx].begin = begin;
      nodes_[idx].end = end;
      return idx;
    }
    const Vec3 extent = node.hi - node.lo;
    int axis = 0;
    if (extent.y() > extent.x()) axis = 1;
    if (extent.z() > extent[axis]) axis = 2;
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                       const double ca = tris_[a].p0[axis] + tris_[a].p1[axis] + tris_[a].p2[axis];
                       const double cb = tris_[b].p0[axis] + tris_[b].p1[axis] + tris_[b].p2[axis];
                       if (ca != cb) return ca < cb;
                       return a < b;
                     });
    const int l = build_node(begin, mid);
    const int r = build_node(mid, end);
    nodes_[idx].left = l;
    nodes_[idx].right = r;
    return idx;
  }

  void search(int node_idx, const Vec3& q, Hit& hit) const {
    const Node& node = nodes_[node_idx];
    if (box_distance(node, q) >= hit.distance) return;
    if (node.leaf()) {
      for (int i = node.begin; i < node.end; ++i) {
        const Triangle& t = tris_[order_[i]];
        const Vec3 c = closest_point_on_triangle(q, t.p0, t.p1, t.p2);
        const double d = (c - q).norm();
        if (d < hit.distance) {
          hit.distance = d;
          hit.point = c;
          hit.triangle = t.id;
        }
      }
      return;
    }
    const double dl = box_distance(nodes_[node.left], q);
    const double dr = box_distance(nodes_[node.right], q);
    if (dl <= dr) {
      search(node.left, q, hit);
      search(node.right, q, hit);
    } else {
      search(node.right, q, hit);
      search(node.left, q, hit);
    }
  }

  std::vector<Triangle> tris_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

}  // namespace isokit

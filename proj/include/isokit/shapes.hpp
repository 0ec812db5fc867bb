#pragma once

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "isokit/halfedge_mesh.hpp"

namespace isokit {

// Canonical icosahedron, unit circumradius, fixed vertex order.
inline void icosahedron_data(std::vector<Vec3>& pts, std::vector<std::array<int, 3>>& tris) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double s = 1.0 / std::sqrt(1.0 + phi * phi);
  const double a = s, b = phi * s;
  pts = {{-a, b, 0},  {a, b, 0},  {-a, -b, 0}, {a, -b, 0}, {0, -a, b},  {0, a, b},
         {0, -a, -b}, {0, a, -b}, {b, 0, -a},  {b, 0, a},  {-b, 0, -a}, {-b, 0, a}};
  tris = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
          {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
          {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
}

inline HalfedgeMesh make_icosahedron(double radius = 1.0) {
  std::vector<Vec3> pts;
  std::vector<std::array<int, 3>> tris;
  icosahedron_data(pts, tris);
  for (auto& p : pts) p *= radius;
  return HalfedgeMesh::build(pts, tris);
}

// Icosphere by midpoint subdivision + projection to the sphere.
// V = 10 * 4^level + 2, F = 20 * 4^level.
inline HalfedgeMesh make_icosphere(int level, double radius = 1.0) {
  std::vector<Vec3> pts;
  std::vector<std::array<int, 3>> tris;
  icosahedron_data(pts, tris);
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int id = static_cast<int>(pts.size());
      pts.push_back(((pts[a] + pts[b]) * 0.5).normalized());
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      const int m01 = mid(t[0], t[1]);
      const int m12 = mid(t[1], t[2]);
      const int m20 = mid(t[2], t[0]);
      next.push_back({t[0], m01, m20});
      next.push_back({t[1], m12, m01});
      next.push_back({t[2], m20, m12});
      next.push_back({m01, m12, m20});
    }
    tris.swap(next);
  }
  for (auto& p : pts) p *= radius;
  return HalfedgeMesh::build(pts, tris);
}

inline HalfedgeMesh make_ellipsoid(int level, double ax, double ay, double az) {
  HalfedgeMesh m = make_icosphere(level, 1.0);
  for (auto& p : m.positions) {
    p.x() *= ax;
    p.y() *= ay;
    p.z() *= az;
  }
  return m;
}

// Smooth closed genus-0 blob: unit icosphere with a low-frequency radial
// perturbation from three directional cosine lobes. Total amplitude is capped
// so the surface stays smooth and potato-like.
inline HalfedgeMesh make_potato(int level, std::uint64_t seed, double amplitude = 0.12) {
  if (amplitude < 0.0 || amplitude > 0.15) throw ConfigError("potato amplitude must be in [0, 0.15]");
  HalfedgeMesh m = make_icosphere(level, 1.0);
  Rng rng(seed);
  struct Lobe {
    Vec3 dir;
    double amp, freq, phase;
  };
  std::array<Lobe, 3> lobes;
  double total = 0.0;
  for (auto& l : lobes) {
    l.dir = rng.unit_vector();
    l.amp = rng.uniform(0.2, 1.0);
    l.freq = 1.0 + std::floor(rng.uniform() * 3.0);  // 1..3
    l.phase = rng.uniform(0.0, 6.283185307179586);
    total += l.amp;
  }
  const double scale = total > 0 ? amplitude / total : 0.0;
  for (auto& p : m.positions) {
    const Vec3 u = p.normalized();
    double r = 1.0;
    for (const auto& l : lobes) r += scale * l.amp * std::cos(l.freq * u.dot(l.dir) * 3.141592653589793 + l.phase);
    p = u * r;
  }
  return m;
}

enum class TestShapeKind { Icosphere, Ellipsoid, Potato };

struct TestShapeParams {
  int level = 3;
  double radius = 1.0;
  double ax = 1.3, ay = 1.0, az = 0.8;  // ellipsoid semi-axes
  double amplitude = 0.12;              // potato perturbation
};

inline HalfedgeMesh gen_testshape(TestShapeKind kind, const TestShapeParams& params,
                                  std::uint64_t seed) {
  if (params.level < 0 || params.level > 7) throw ConfigError("subdivision level out of range");
  switch (kind) {
    case TestShapeKind::Icosphere:
      return make_icosphere(params.level, params.radius);
    case TestShapeKind::Ellipsoid:
      return make_ellipsoid(params.level, params.ax, params.ay, params.az);
    case TestShapeKind::Potato:
      return make_potato(params.level, seed, params.amplitude);
  }
  throw ConfigError("unknown test shape kind");
}

}  // namespace isokit

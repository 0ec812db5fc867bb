#include <catch2/catch_amalgamated.hpp>

#include "isokit/kmeans.hpp"

using namespace isokit;

namespace {

std::vector<TrianglePoint> random_points(Rng& rng, int n, double lo = 0.0, double hi = 1.0) {
  std::vector<TrianglePoint> pts;
  for (int i = 0; i < n; ++i) {
    double e[3] = {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
    std::sort(e, e + 3);
    pts.push_back({e[0], e[1], e[2]});
  }
  return pts;
}

// Independent reference Lloyd iteration, run to the label fixpoint from given
// centroids. Flags if an empty cluster ever appears (the reference has no
// repair policy, so comparisons are only meaningful without empties).
struct RefLloyd {
  std::vector<int> labels;
  bool empty_seen = false;
};

RefLloyd reference_lloyd(const std::vector<TrianglePoint>& pts,
                         std::vector<TrianglePoint> centroids, int max_iters = 500) {
  RefLloyd r;
  const int k = static_cast<int>(centroids.size());
  r.labels.assign(pts.size(), 0);
  for (int it = 0; it < max_iters; ++it) {
    std::vector<int> labels(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      int best = 0;
      double bd = distance(pts[i], centroids[0]);
      for (int c = 1; c < k; ++c) {
        const double d = distance(pts[i], centroids[c]);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      labels[i] = best;
    }
    std::vector<double> sx(k, 0), sy(k, 0), sz(k, 0);
    std::vector<int> cnt(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      sx[labels[i]] += pts[i].x;
      sy[labels[i]] += pts[i].y;
      sz[labels[i]] += pts[i].z;
      ++cnt[labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (cnt[c] == 0) {
        r.empty_seen = true;
        continue;
      }
      centroids[c] = {sx[c] / cnt[c], sy[c] / cnt[c], sz[c] / cnt[c]};
    }
    if (labels == r.labels && it > 0) break;
    r.labels = labels;
  }
  return r;
}

}  // namespace

TEST_CASE("perfectly separated points split cleanly") {
  std::vector<TrianglePoint> pts;
  for (int i = 0; i < 5; ++i) pts.push_back({1, 1, 1});
  for (int i = 0; i < 5; ++i) pts.push_back({9, 9, 9});
  KMeansConfig cfg;
  cfg.k = 2;
  cfg.seed = 3;
  const auto state = cluster<PlanarSpace>(pts, cfg);
  CHECK(state.energy == 0.0);
  for (int i = 0; i < 5; ++i) CHECK(state.labels[i] == state.labels[0]);
  for (int i = 5; i < 10; ++i) CHECK(state.labels[i] == state.labels[5]);
  CHECK(state.labels[0] != state.labels[5]);
}

TEST_CASE("identical points, any k: zero energy and no empty cluster") {
  const std::vector<TrianglePoint> pts(8, TrianglePoint{2, 3, 4});
  KMeansConfig cfg;
  cfg.k = 3;
  cfg.seed = 5;
  const auto state = cluster<PlanarSpace>(pts, cfg);
  CHECK(state.energy == 0.0);
  std::vector<int> counts(3, 0);
  for (int l : state.labels) ++counts[l];
  for (int c = 0; c < 3; ++c) CHECK(counts[c] >= 1);
}

TEST_CASE("assign_labels tie-breaking") {
  const std::vector<TrianglePoint> centroids = {{0, 0, 0}, {2, 2, 2}};
  SECTION("equidistant point goes to the lower index") {
    const std::vector<TrianglePoint> pts = {{1, 1, 1}};
    const auto labels = assign_labels<PlanarSpace>(pts, centroids);
    CHECK(labels[0] == 0);
  }
  SECTION("point equal to a centroid takes that label") {
    const std::vector<TrianglePoint> pts = {{2, 2, 2}};
    const auto labels = assign_labels<PlanarSpace>(pts, centroids);
    CHECK(labels[0] == 1);
  }
  SECTION("empty input gives empty labels") {
    const std::vector<TrianglePoint> pts;
    CHECK(assign_labels<PlanarSpace>(pts, centroids).empty());
  }
}

TEST_CASE("config validation") {
  const auto pts = std::vector<TrianglePoint>(4, TrianglePoint{1, 2, 3});
  KMeansConfig cfg;
  cfg.k = 5;
  CHECK_THROWS_AS(cluster<PlanarSpace>(pts, cfg), ConfigError);
  cfg.k = 0;
  CHECK_THROWS_AS(cluster<PlanarSpace>(pts, cfg), ConfigError);
}

TEST_CASE("fixpoint labels match an independent Lloyd reference") {
  Rng rng(99);
  int compared = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const auto pts = random_points(rng, 30);
    // Shared deterministic start: three distinct points.
    std::vector<TrianglePoint> init = {pts[0], pts[10], pts[20]};
    KMeansConfig cfg;
    cfg.k = 3;
    KMeansReport rep;
    const auto state = cluster_from<PlanarSpace>(pts, init, cfg, &rep);
    const auto ref = reference_lloyd(pts, init);
    if (ref.empty_seen || rep.empty_repairs > 0) continue;  // different repair semantics
    REQUIRE(rep.hit_fixpoint);
    CHECK(state.labels == ref.labels);
    ++compared;
  }
  CHECK(compared >= 15);
}

TEST_CASE("deterministic for a fixed seed") {
  Rng rng(2024);
  const auto pts = random_points(rng, 100);
  KMeansConfig cfg;
  cfg.k = 7;
  cfg.seed = 42;
  const auto a = cluster<PlanarSpace>(pts, cfg);
  const auto b = cluster<PlanarSpace>(pts, cfg);
  CHECK(a.labels == b.labels);
  REQUIRE(a.centroids.size() == b.centroids.size());
  for (std::size_t c = 0; c < a.centroids.size(); ++c) {
    CHECK(a.centroids[c].x == b.centroids[c].x);
    CHECK(a.centroids[c].y == b.centroids[c].y);
    CHECK(a.centroids[c].z == b.centroids[c].z);
  }
  CHECK(a.energy == b.energy);
}

TEST_CASE("energy is non-increasing within a solve") {
  Rng rng(5150);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto pts = random_points(rng, 200);
    KMeansConfig cfg;
    cfg.k = 6;
    cfg.seed = seed;
    KMeansReport rep;
    cluster<PlanarSpace>(pts, cfg, &rep);
    REQUIRE(rep.energy_trace.size() >= 2);
    for (std::size_t i = 1; i < rep.energy_trace.size(); ++i)
      CHECK(rep.energy_trace[i] <= rep.energy_trace[i - 1] * (1 + 1e-9) + 1e-15);
  }
}

TEST_CASE("farthest point initialization works and is deterministic") {
  Rng rng(31);
  const auto pts = random_points(rng, 50);
  KMeansConfig cfg;
  cfg.k = 4;
  cfg.init = KMeansInit::FarthestPoint;
  const auto a = cluster<PlanarSpace>(pts, cfg);
  const auto b = cluster<PlanarSpace>(pts, cfg);
  CHECK(a.labels == b.labels);
  std::vector<int> counts(4, 0);
  for (int l : a.labels) ++counts[l];
  for (int c = 0; c < 4; ++c) CHECK(counts[c] >= 1);
}

TEST_CASE("empty cluster repair keeps k honored") {
  // Nine coincident points and one outlier, k = 3: the outlier and duplicates
  // must still fill all three clusters.
  std::vector<TrianglePoint> pts(9, TrianglePoint{1, 1, 1});
  pts.push_back({5, 6, 7});
  KMeansConfig cfg;
  cfg.k = 3;
  cfg.seed = 1;
  const auto state = cluster<PlanarSpace>(pts, cfg);
  std::vector<int> counts(3, 0);
  for (int l : state.labels) ++counts[l];
  for (int c = 0; c < 3; ++c) CHECK(counts[c] >= 1);
  CHECK(state.energy == Catch::Approx(0.0).margin(1e-20));
}

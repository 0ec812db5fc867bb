#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "isokit/metric.hpp"

namespace isokit {

enum class KMeansInit { GreedyKMeansPP, FarthestPoint };

struct KMeansConfig {
  int k = 1;
  int max_iters = 200;
  std::uint64_t seed = 0;
  KMeansInit init = KMeansInit::GreedyKMeansPP;
};

struct KMeansReport {
  int iterations = 0;
  bool hit_fixpoint = false;
  int empty_repairs = 0;
  // Energy after every assignment and update phase, in order. Non-increasing
  // within a solve by construction.
  std::vector<double> energy_trace;
};

namespace kmeans_detail {

// Nearest centroid, ties broken toward the lowest index.
template <typename Space>
int nearest(const typename Space::Point& p, std::span<const typename Space::Point> centroids) {
  int best = 0;
  double best_d = Space::dist(p, centroids[0]);
  for (int c = 1; c < static_cast<int>(centroids.size()); ++c) {
    const double d = Space::dist(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

template <typename Space>
std::vector<typename Space::Point> init_greedy_pp(std::span<const typename Space::Point> points,
                                                  int k, Rng& rng) {
  using Point = typename Space::Point;
  const std::size_t n = points.size();
  std::vector<Point> centroids;
  centroids.reserve(k);
  centroids.push_back(points[rng.index(n)]);

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = Space::dist(points[i], centroids[0]);

  const int candidates = 2 + static_cast<int>(std::ceil(std::log2(std::max(2, k))));
  std::vector<double> cand_d2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : d2) total += d;
    int best_idx = -1;
    double best_potential = std::numeric_limits<double>::infinity();
    for (int t = 0; t < candidates; ++t) {
      std::size_t pick;
      if (total <= 0.0) {
        pick = rng.index(n);
      } else {
        double r = rng.uniform() * total;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          r -= d2[i];
          if (r <= 0.0) {
            pick = i;
            break;
          }
        }
      }
      double potential = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        potential += std::min(d2[i], Space::dist(points[i], points[pick]));
      if (potential < best_potential) {
        best_potential = potential;
        best_idx = static_cast<int>(pick);
      }
    }
    centroids.push_back(points[best_idx]);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], Space::dist(points[i], centroids.back()));
  }
  return centroids;
}

template <typename Space>
std::vector<typename Space::Point> init_farthest(std::span<const typename Space::Point> points,
                                                 int k) {
  using Point = typename Space::Point;
  const std::size_t n = points.size();
  // Start from the point farthest from the global mean (lowest index wins
  // ties), then repeat farthest-from-chosen-set.
  const Point gmean = Space::mean(points);
  std::size_t first = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = Space::dist(points[i], gmean);
    if (d > best) {
      best = d;
      first = i;
    }
  }
  std::vector<Point> centroids{points[first]};
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = Space::dist(points[i], centroids[0]);
  while (static_cast<int>(centroids.size()) < k) {
    std::size_t far = 0;
    double fd = -1.0;
    for (std::size_t i = 0; i < n; ++i)
      if (d2[i] > fd) {
        fd = d2[i];
        far = i;
      }
    centroids.push_back(points[far]);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], Space::dist(points[i], centroids.back()));
  }
  return centroids;
}

}  // namespace kmeans_detail

// Nearest-centroid assignment; deterministic tie-break by lowest index.
template <typename Space>
std::vector<int> assign_labels(std::span<const typename Space::Point> points,
                               std::span<const typename Space::Point> centroids) {
  std::vector<int> labels(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    labels[i] = kmeans_detail::nearest<Space>(points[i], centroids);
  });
  return labels;
}

// Lloyd iterations from the given starting centroids: assignment to the
// nearest centroid, empty-cluster repair (reseed with the point farthest from
// its own centroid), then the mean update. Stops at the assignment fixpoint.
// Energy is non-increasing across every recorded phase.
template <typename Space>
ClusterStateT<Space> cluster_from(std::span<const typename Space::Point> points,
                                  std::vector<typename Space::Point> centroids,
                                  const KMeansConfig& cfg, KMeansReport* report = nullptr) {
  using State = ClusterStateT<Space>;
  const std::size_t n = points.size();
  const int k = static_cast<int>(centroids.size());
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw ConfigError("k-means requires 1 <= k <= point count");

  State state;
  state.centroids = std::move(centroids);
  state.labels.assign(n, 0);
  state.per_point_distance.assign(n, 0.0);
  KMeansReport local;
  KMeansReport& rep = report ? *report : local;
  rep = KMeansReport{};

  std::vector<int> prev_labels;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    // Assignment.
    parallel_for(n, [&](std::size_t i) {
      const int c = kmeans_detail::nearest<Space>(points[i], state.centroids);
      state.labels[i] = c;
      state.per_point_distance[i] = Space::dist(points[i], state.centroids[c]);
    });

    // Empty-cluster repair: move the globally farthest point into each empty
    // cluster (never drains a singleton cluster). Strictly decreases energy.
    std::vector<int> counts(k, 0);
    for (int l : state.labels) ++counts[l];
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int far = -1;
      double fd = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[state.labels[i]] <= 1) continue;
        if (state.per_point_distance[i] > fd) {
          fd = state.per_point_distance[i];
          far = static_cast<int>(i);
        }
      }
      if (far < 0) break;  // fewer distinct points than clusters
      --counts[state.labels[far]];
      state.labels[far] = c;
      ++counts[c];
      state.centroids[c] = points[far];
      state.per_point_distance[far] = 0.0;
      ++rep.empty_repairs;
    }

    refresh_state(state, points);
    rep.energy_trace.push_back(state.energy);
    ++rep.iterations;

    if (!prev_labels.empty() && prev_labels == state.labels) {
      rep.hit_fixpoint = true;
      break;
    }
    prev_labels = state.labels;

    // Update phase: centroids to member means.
    std::vector<std::vector<typename Space::Point>> buckets(k);
    for (std::size_t i = 0; i < n; ++i) buckets[state.labels[i]].push_back(points[i]);
    for (int c = 0; c < k; ++c)
      if (!buckets[c].empty()) state.centroids[c] = Space::mean(buckets[c]);

    refresh_state(state, points);
    rep.energy_trace.push_back(state.energy);
  }

  refresh_state(state, points);
  return state;
}

// Full solve with deterministic initialization from the seed.
template <typename Space>
ClusterStateT<Space> cluster(std::span<const typename Space::Point> points,
                             const KMeansConfig& cfg, KMeansReport* report = nullptr) {
  const std::size_t n = points.size();
  if (cfg.k < 1 || static_cast<std::size_t>(cfg.k) > n)
    throw ConfigError("k-means requires 1 <= k <= point count");
  Rng rng(cfg.seed);
  std::vector<typename Space::Point> init;
  switch (cfg.init) {
    case KMeansInit::GreedyKMeansPP:
      init = kmeans_detail::init_greedy_pp<Space>(points, cfg.k, rng);
      break;
    case KMeansInit::FarthestPoint:
      init = kmeans_detail::init_farthest<Space>(points, cfg.k);
      break;
  }
  return cluster_from<Space>(points, std::move(init), cfg, report);
}

}  // namespace isokit

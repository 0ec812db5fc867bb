#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "isokit/halfedge_mesh.hpp"
#include "isokit/hausdorff.hpp"
#include "isokit/kmeans.hpp"
#include "isokit/metric.hpp"
#include "isokit/remesh.hpp"

namespace isokit {

struct DecomposeConfig {
  int k = 1;
  double threshold_pct = 1.0;  // convergence threshold, % of mean edge length
  int max_iterations = 10000;
  KMeansConfig kmeans;
  RemeshConfig remesh;
  bool cold_restart = false;  // re-initialize K-means every iteration
  int audit_every = 50;       // from-scratch energy check cadence (0 = off)
};

struct IterationRecord {
  int iteration = 0;
  double energy = 0;
  double error_max = 0;   // length units
  double error_mean = 0;  // length units
  int triangle_count = 0;
  int below_threshold = 0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
  double threshold_abs = 0;  // model units, fixed at start
  double max_energy_audit_error = 0;  // worst |incremental - recomputed| / max(1, E)

  int iterations() const { return static_cast<int>(records.size()); }
};

// Optional instrumentation for the outer loop.
struct DecomposeObserver {
  std::function<void(int iteration, const KMeansReport&)> on_cluster;
  std::function<void(const char* op, double energy_before, double energy_after)> on_pass;
  std::function<void(int iteration, double incremental, double recomputed)> on_audit;
};

struct DecomposeResult {
  HalfedgeMesh mesh;
  ClusterState state;
  IterationTrace trace;
};

// Outer decomposition loop: K-means over the triangle embeddings, then local
// remeshing, repeated until the worst per-triangle error drops below the
// threshold. The threshold given as a percentage is converted once against
// the input mesh's mean edge length. Flip/collapse operators run on the first
// iteration only; vertex translation runs every iteration.
inline DecomposeResult decompose(const HalfedgeMesh& mesh_s, const DecomposeConfig& cfg,
                                 const DecomposeObserver* observer = nullptr) {
  if (cfg.k < 1) throw ConfigError("k must be >= 1");
  if (cfg.threshold_pct <= 0) throw ConfigError("threshold must be > 0");
  if (cfg.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (cfg.k > mesh_s.face_count()) throw ConfigError("k exceeds triangle count");

  DecomposeResult res;
  res.mesh = mesh_s;
  if (!res.mesh.is_compact()) res.mesh.compact();

  const double t_abs = cfg.threshold_pct / 100.0 * res.mesh.mean_edge_length();
  res.trace.threshold_abs = t_abs;

  KMeansConfig kcfg = cfg.kmeans;
  kcfg.k = cfg.k;

  std::vector<TrianglePoint> points = embed_all(res.mesh);
  KMeansReport kreport;
  res.state = cluster<PlanarSpace>(points, kcfg, &kreport);
  if (observer && observer->on_cluster) observer->on_cluster(1, kreport);

  auto record = [&](int iteration) {
    IterationRecord rec;
    rec.iteration = iteration;
    rec.energy = res.state.energy;
    rec.error_max = res.state.error_max;
    rec.error_mean = res.state.error_mean;
    rec.triangle_count = static_cast<int>(points.size());
    for (double d : res.state.per_point_distance)
      if (std::sqrt(d) <= t_abs) ++rec.below_threshold;
    res.trace.records.push_back(rec);
  };

  int iteration = 1;
  record(iteration);

  while (true) {
    if (res.state.error_max <= t_abs) {
      res.trace.converged = true;
      break;
    }
    if (iteration >= cfg.max_iterations) break;

    if (iteration == 1) {
      optimize_valence(res.mesh, cfg.remesh.flip_valence_target);
      // Valence flips ignore clusters; re-embed and re-assign before the
      // cluster-aware passes.
      points = embed_all(res.mesh);
      res.state.labels = assign_labels<PlanarSpace>(points, res.state.centroids);
      refresh_state(res.state, points);

      if (cfg.remesh.collapse_enabled) {
        const double before = res.state.energy;
        improve_by_collapse(res.mesh, res.state, points);
        if (observer && observer->on_pass)
          observer->on_pass("collapse", before, res.state.energy);
      }
      {
        const double before = res.state.energy;
        improve_by_flip(res.mesh, res.state, points);
        if (observer && observer->on_pass) observer->on_pass("flip", before, res.state.energy);
      }
    }

    translate_vertices(res.mesh, res.state, cfg.remesh);

    points = embed_all(res.mesh);
    KMeansReport rep;
    if (cfg.cold_restart) {
      res.state = cluster<PlanarSpace>(points, kcfg, &rep);
    } else {
      res.state = cluster_from<PlanarSpace>(points, res.state.centroids, kcfg, &rep);
    }
    ++iteration;
    if (observer && observer->on_cluster) observer->on_cluster(iteration, rep);

    if (cfg.audit_every > 0 && iteration % cfg.audit_every == 0) {
      const double scratch =
          recompute_energy<PlanarSpace>(points, res.state.labels, res.state.centroids);
      const double err =
          std::abs(res.state.energy - scratch) / std::max(1.0, std::abs(scratch));
      res.trace.max_energy_audit_error = std::max(res.trace.max_energy_audit_error, err);
      if (observer && observer->on_audit)
        observer->on_audit(iteration, res.state.energy, scratch);
    }

    record(iteration);
  }

  return res;
}

// The Table-1 style report row.
struct StatsRow {
  long faces_i = 0, faces_s = 0, faces_f = 0;
  long verts_i = 0, verts_s = 0, verts_f = 0;
  int k = 0;
  double T_abs = 0, T_pct = 0;
  double mean_edge = 0;
  double err_mean_abs = 0, err_mean_pct = 0;
  double dH_is_mean = 0, dH_is_max = 0;
  double dH_sf_mean = 0, dH_sf_max = 0;
  double dH_if_mean = 0, dH_if_max = 0;
  double time_s = 0;
  int iterations = 0;
};

inline const char* stats_header() {
  return "faces_i,faces_s,faces_f,verts_i,verts_s,verts_f,k,T_abs,T_pct,mean_edge,"
         "err_mean_abs,err_mean_pct,dH_is_mean,dH_is_max,dH_sf_mean,dH_sf_max,"
         "dH_if_mean,dH_if_max,time_s,iterations";
}

// Assemble the full report row for a completed run: element counts, the
// threshold in both units, clustering error, and the three Hausdorff pairs.
inline StatsRow report_stats(const IterationTrace& trace, const ClusterState& state,
                             const HalfedgeMesh& mesh_i, const HalfedgeMesh& mesh_s,
                             const HalfedgeMesh& mesh_f, double time_s,
                             double hausdorff_samples = 25.0) {
  StatsRow r;
  r.faces_i = mesh_i.face_count();
  r.faces_s = mesh_s.face_count();
  r.faces_f = mesh_f.face_count();
  r.verts_i = mesh_i.vertex_count();
  r.verts_s = mesh_s.vertex_count();
  r.verts_f = mesh_f.vertex_count();
  r.k = state.k();
  r.mean_edge = mesh_f.mean_edge_length();
  r.T_abs = trace.threshold_abs;
  r.T_pct = r.mean_edge > 0 ? 100.0 * r.T_abs / r.mean_edge : 0.0;
  r.err_mean_abs = state.error_mean;
  r.err_mean_pct = r.mean_edge > 0 ? 100.0 * state.error_mean / r.mean_edge : 0.0;
  const HausdorffResult is = hausdorff(mesh_i, mesh_s, hausdorff_samples);
  const HausdorffResult sf = hausdorff(mesh_s, mesh_f, hausdorff_samples);
  const HausdorffResult iff = hausdorff(mesh_i, mesh_f, hausdorff_samples);
  r.dH_is_mean = is.mean_pct_bb;
  r.dH_is_max = is.max_pct_bb;
  r.dH_sf_mean = sf.mean_pct_bb;
  r.dH_sf_max = sf.max_pct_bb;
  r.dH_if_mean = iff.mean_pct_bb;
  r.dH_if_max = iff.max_pct_bb;
  r.time_s = time_s;
  r.iterations = trace.iterations();
  return r;
}

inline std::string stats_csv_row(const StatsRow& r) {
  auto g = [](double v) { return format_double(v, 9); };
  std::string s;
  s += std::to_string(r.faces_i) + ',' + std::to_string(r.faces_s) + ',' +
       std::to_string(r.faces_f) + ',';
  s += std::to_string(r.verts_i) + ',' + std::to_string(r.verts_s) + ',' +
       std::to_string(r.verts_f) + ',';
  s += std::to_string(r.k) + ',';
  s += g(r.T_abs) + ',' + g(r.T_pct) + ',' + g(r.mean_edge) + ',';
  s += g(r.err_mean_abs) + ',' + g(r.err_mean_pct) + ',';
  s += g(r.dH_is_mean) + ',' + g(r.dH_is_max) + ',';
  s += g(r.dH_sf_mean) + ',' + g(r.dH_sf_max) + ',';
  s += g(r.dH_if_mean) + ',' + g(r.dH_if_max) + ',';
  s += g(r.time_s) + ',' + std::to_string(r.iterations);
  return s;
}

}  // namespace isokit

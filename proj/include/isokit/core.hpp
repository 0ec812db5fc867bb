#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace isokit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Base for all library errors; concrete types follow the failure taxonomy
// used throughout the pipeline (I/O, topology, configuration, geometry).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ISOKIT_DEFINE_ERROR(Name)     \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

ISOKIT_DEFINE_ERROR(ParseError);
ISOKIT_DEFINE_ERROR(IoError);
ISOKIT_DEFINE_ERROR(TopologyError);
ISOKIT_DEFINE_ERROR(DegenerateError);
ISOKIT_DEFINE_ERROR(BudgetError);
ISOKIT_DEFINE_ERROR(ConfigError);
ISOKIT_DEFINE_ERROR(EmptyClusterError);
ISOKIT_DEFINE_ERROR(OverlapError);
ISOKIT_DEFINE_ERROR(ProjectionError);
ISOKIT_DEFINE_ERROR(LevelError);
ISOKIT_DEFINE_ERROR(DegenerateNormalError);

#undef ISOKIT_DEFINE_ERROR

// Deterministic RNG wrapper. std::uniform_*_distribution is implementation
// defined, so all draws go through fixed bit manipulation of mt19937_64
// output; identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

  Vec3 unit_vector() {
    // Marsaglia: z uniform, azimuth uniform.
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 6.283185307179586476925286766559);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3(r * std::cos(phi), r * std::sin(phi), z);
  }

 private:
  std::mt19937_64 gen_;
};

// Floats in ascii outputs are printed with fixed significant digits so that
// identical runs produce identical bytes.
inline std::string format_double(double v, int significant = 17) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
  return buf;
}

inline int worker_count(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ISOKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// Chunked parallel map. Callers write results into pre-sized slots indexed by
// i, so the output is identical for any worker count; reductions stay serial.
template <typename Fn>
void parallel_for(std::size_t n, const Fn& fn, int threads = 0) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count(threads)), n == 0 ? 1 : n);
  if (workers <= 1 || n < 2048) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace isokit

#ifndef ARC_DATAGEN_HPP
#define ARC_DATAGEN_HPP

// Deterministic dataset generation. We use splitmix64 rather than <random>
// engines + distributions so that generated bytes are identical across
// compilers and standard libraries.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "arc/grid.hpp"

namespace arc {

struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, bound) without modulo bias worth caring about at our sizes
  uint64_t below(uint64_t bound) { return bound ? next() % bound : 0; }
  double unit() { return (next() >> 11) * 0x1.0p-53; }
};

constexpr Raw kUniverse = Raw{1} << 32;

inline RawPointSet gen_uniform(int dim, Coord n, uint64_t seed) {
  SplitMix64 rng(seed);
  RawPointSet s;
  s.dim = dim;
  s.pts.resize(static_cast<size_t>(n));
  for (auto& p : s.pts)
    for (int a = 0; a < dim; ++a) p[a] = static_cast<Raw>(rng.below(kUniverse));
  return s;
}

// Gaussian-ish clusters around random centers; duplicates and collisions are
// welcome, they exercise tie-breaking in the rank reduction.
inline RawPointSet gen_clustered(int dim, Coord n, uint64_t seed) {
  SplitMix64 rng(seed);
  RawPointSet s;
  s.dim = dim;
  s.pts.resize(static_cast<size_t>(n));
  const int nclusters = 8;
  RawPoint centers[nclusters];
  for (auto& c : centers)
    for (int a = 0; a < dim; ++a) c[a] = static_cast<Raw>(rng.below(kUniverse));
  const Raw spread = kUniverse / 64;
  for (auto& p : s.pts) {
    const RawPoint& c = centers[rng.below(nclusters)];
    for (int a = 0; a < dim; ++a) {
      // sum of 4 uniforms, centered: cheap bell shape
      Raw off = 0;
      for (int t = 0; t < 4; ++t) off += static_cast<Raw>(rng.below(2 * spread + 1)) - spread;
      off /= 4;
      Raw v = c[a] + off;
      if (v < 0) v = 0;
      if (v >= kUniverse) v = kUniverse - 1;
      p[a] = v;
    }
  }
  return s;
}

// A random permutation grid: axis i holds a random permutation of 1..n, so
// the set is already in rank space (useful for auditing structures directly).
inline RawPointSet gen_permutation_grid(int dim, Coord n, uint64_t seed) {
  SplitMix64 rng(seed);
  RawPointSet s;
  s.dim = dim;
  s.pts.resize(static_cast<size_t>(n));
  std::vector<Raw> perm(static_cast<size_t>(n));
  for (int a = 0; a < dim; ++a) {
    for (Coord i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i + 1;
    for (Coord i = n - 1; i > 0; --i)
      std::swap(perm[static_cast<size_t>(i)], perm[rng.below(static_cast<uint64_t>(i) + 1)]);
    for (Coord i = 0; i < n; ++i) s.pts[static_cast<size_t>(i)][a] = perm[static_cast<size_t>(i)];
  }
  return s;
}

inline RawPointSet generate(const std::string& dist, int dim, Coord n, uint64_t seed) {
  if (dist == "uniform") return gen_uniform(dim, n, seed);
  if (dist == "clustered") return gen_clustered(dim, n, seed);
  if (dist == "permutation-grid") return gen_permutation_grid(dim, n, seed);
  throw std::invalid_argument("unknown distribution: " + dist);
}

}  // namespace arc

#endif

#ifndef ARC_GRID_HPP
#define ARC_GRID_HPP

// Rank-space point sets, query rectangles, and axis reflections.
// All counting structures in this library operate on points whose
// coordinates are ranks 1..n per axis; 0 and n+1 act as sentinels.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace arc {

using Coord = int32_t;  // rank-space coordinate, 0..n+1
using Raw = int64_t;    // universe coordinate
using Count = int64_t;

struct GridPoint {
  std::array<Coord, 3> c{1, 1, 1};

  GridPoint() = default;
  GridPoint(Coord x) : c{x, 1, 1} {}
  GridPoint(Coord x, Coord y) : c{x, y, 1} {}
  GridPoint(Coord x, Coord y, Coord z) : c{x, y, z} {}

  Coord x() const { return c[0]; }
  Coord y() const { return c[1]; }
  Coord z() const { return c[2]; }
  Coord& operator[](int i) { return c[i]; }
  Coord operator[](int i) const { return c[i]; }
  bool operator==(const GridPoint& o) const { return c == o.c; }
};

// p >= q componentwise on the first `dim` axes.
inline bool dominates(const GridPoint& p, const GridPoint& q, int dim) {
  for (int i = 0; i < dim; ++i)
    if (p[i] < q[i]) return false;
  return true;
}

struct PointSet {
  int dim = 2;
  Coord n = 0;  // number of points; grid side length after rank reduction
  std::vector<GridPoint> pts;
};

struct RawPoint {
  std::array<Raw, 3> c{0, 0, 0};
  Raw operator[](int i) const { return c[i]; }
  Raw& operator[](int i) { return c[i]; }
};

struct RawPointSet {
  int dim = 2;
  std::vector<RawPoint> pts;
};

// Closed rectangle in rank space. Sides may use the sentinels 0 and n+1
// to express unbounded constraints. lo > hi on any axis means empty.
struct QueryRect {
  int dim = 2;
  GridPoint lo{1, 1, 1};
  GridPoint hi{1, 1, 1};

  bool empty() const {
    for (int i = 0; i < dim; ++i)
      if (lo[i] > hi[i]) return true;
    return false;
  }
  bool contains(const GridPoint& p) const {
    for (int i = 0; i < dim; ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
};

struct RawRect {
  int dim = 2;
  std::array<Raw, 3> lo{0, 0, 0};
  std::array<Raw, 3> hi{0, 0, 0};
};

// Sorted per-axis original coordinates; position of a rank r (1-based) in
// axis a is sorted[a][r-1]. Duplicates permitted in the raw data are kept,
// so the arrays are nondecreasing rather than strictly increasing.
struct RankMap {
  int dim = 2;
  Coord n = 0;
  std::array<std::vector<Raw>, 3> sorted;
};

struct Reduced {
  PointSet set;
  RankMap map;
};

// Stable rank reduction: per axis, points are ranked by (coordinate, input
// index), so duplicate coordinates get distinct consecutive ranks in input
// order and every axis becomes a permutation of 1..n.
inline Reduced reduce_to_rank_space(const RawPointSet& raw) {
  Reduced out;
  out.set.dim = raw.dim;
  out.map.dim = raw.dim;
  const size_t n = raw.pts.size();
  out.set.n = static_cast<Coord>(n);
  out.map.n = static_cast<Coord>(n);
  out.set.pts.resize(n);
  std::vector<size_t> order(n);
  for (int a = 0; a < raw.dim; ++a) {
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t i, size_t j) {
      return raw.pts[i][a] < raw.pts[j][a];
    });
    out.map.sorted[a].resize(n);
    for (size_t r = 0; r < n; ++r) {
      out.map.sorted[a][r] = raw.pts[order[r]][a];
      out.set.pts[order[r]][a] = static_cast<Coord>(r + 1);
    }
  }
  return out;
}

// Snap a raw closed rectangle onto the rank grid. Each low endpoint maps to
// the first rank at or above it, each high endpoint to the last rank at or
// below it; an empty mapped side comes out inverted (lo > hi).
inline QueryRect map_query(const RawRect& r, const RankMap& m) {
  QueryRect q;
  q.dim = r.dim;
  for (int a = 0; a < r.dim; ++a) {
    const auto& v = m.sorted[a];
    Raw lo = r.lo[a], hi = r.hi[a];
    if (lo > hi) std::swap(lo, hi);  // canonicalize inverted input
    q.lo[a] = static_cast<Coord>(std::lower_bound(v.begin(), v.end(), lo) - v.begin() + 1);
    q.hi[a] = static_cast<Coord>(std::upper_bound(v.begin(), v.end(), hi) - v.begin());
  }
  return q;
}

struct Orientation {
  std::array<bool, 3> flip{false, false, false};
};

inline GridPoint reflect_point(const GridPoint& p, Coord n, const Orientation& o, int dim) {
  GridPoint r = p;
  for (int a = 0; a < dim; ++a)
    if (o.flip[a]) r[a] = n + 1 - p[a];
  return r;
}

inline PointSet reflect(const PointSet& s, const Orientation& o) {
  PointSet r;
  r.dim = s.dim;
  r.n = s.n;
  r.pts.reserve(s.pts.size());
  for (const auto& p : s.pts) r.pts.push_back(reflect_point(p, s.n, o, s.dim));
  return r;
}

// Reflecting a closed rectangle swaps and mirrors the bounds on flipped axes.
inline QueryRect reflect_rect(const QueryRect& q, Coord n, const Orientation& o) {
  QueryRect r = q;
  for (int a = 0; a < q.dim; ++a) {
    if (o.flip[a]) {
      r.lo[a] = n + 1 - q.hi[a];
      r.hi[a] = n + 1 - q.lo[a];
    }
  }
  return r;
}

}  // namespace arc

#endif

#ifndef ARC_ORACLE_HPP
#define ARC_ORACLE_HPP

// Brute-force exact reference implementations. Every approximate structure
// in the library is tested against these; they must stay dead simple.

#include "arc/grid.hpp"

namespace arc {

inline Count exact_count(const PointSet& s, const QueryRect& r) {
  if (r.empty()) return 0;
  Count k = 0;
  for (const auto& p : s.pts)
    if (r.contains(p)) ++k;
  return k;
}

// |{p in P : p >= q componentwise}|
inline Count dominators(const PointSet& s, const GridPoint& q) {
  Count k = 0;
  for (const auto& p : s.pts)
    if (dominates(p, q, s.dim)) ++k;
  return k;
}

// |{p in P : p <= q componentwise}|
inline Count dominated_count(const PointSet& s, const GridPoint& q) {
  Count k = 0;
  for (const auto& p : s.pts)
    if (dominates(q, p, s.dim)) ++k;
  return k;
}

inline Count exact_count_raw(const RawPointSet& s, const RawRect& r) {
  Count k = 0;
  for (const auto& p : s.pts) {
    bool in = true;
    for (int a = 0; a < s.dim; ++a)
      if (p[a] < r.lo[a] || p[a] > r.hi[a]) in = false;
    if (in) ++k;
  }
  return k;
}

}  // namespace arc

#endif

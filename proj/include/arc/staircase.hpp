#ifndef ARC_STAIRCASE_HPP
#define ARC_STAIRCASE_HPP

// Approximate staircase boundaries for 2-D dominator counting.
//
// A boundary for threshold t is traced by a walk that keeps the number of
// dominators between t and alpha*t: climb in +y while more than t points
// dominate, retreat in -x until alpha*t points dominate. The inward
// corners of the walk, listed by increasing x (so decreasing y), are an
// antichain; sentinels at x=0 and y=0 close the staircase at the grid
// edges so that every grid point with at most t dominators dominates some
// list entry. A stack of these boundaries for t = alpha^j localizes the
// dominator count of any point within a factor alpha^2 by finding the
// minimal j whose boundary has a dominated corner.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "arc/detail/fenwick.hpp"
#include "arc/grid.hpp"

namespace arc {

struct StaircaseBoundary {
  int64_t t = 1;
  int alpha = 2;
  bool degenerate = false;       // t exceeds the point count: nothing reaches t
  std::vector<GridPoint> corners;  // ascending x, descending y, sentinels at ends
};

inline StaircaseBoundary build_boundary(const PointSet& s, int64_t t, int alpha = 2) {
  if (s.dim != 2) throw std::invalid_argument("build_boundary: 2-D point set required");
  if (t < 1) throw std::invalid_argument("build_boundary: t must be >= 1");
  if (alpha < 2) throw std::invalid_argument("build_boundary: alpha must be >= 2");
  const int64_t npts = static_cast<int64_t>(s.pts.size());
  StaircaseBoundary b;
  b.t = t;
  b.alpha = alpha;
  if (t > npts) {
    b.degenerate = true;
    b.corners = {GridPoint(0, 0)};
    return b;
  }
  const int64_t at = static_cast<int64_t>(alpha) * t;
  if (npts <= at) {  // the walk starts at the y-axis: one origin corner
    b.corners = {GridPoint(0, 0)};
    return b;
  }

  std::vector<GridPoint> pts = s.pts;
  std::sort(pts.begin(), pts.end(),
            [](const GridPoint& a, const GridPoint& c) { return a.x() > c.x(); });
  // smallest x whose closed right half-plane holds at most alpha*t points
  const Coord x_start = pts[static_cast<size_t>(at)].x() + 1;

  detail::Fenwick1D fen(s.n);
  int64_t inserted = 0;
  size_t ptr = 0;
  auto insert_from = [&](Coord x) {  // absorb all columns with coordinate >= x
    while (ptr < pts.size() && pts[ptr].x() >= x) {
      fen.add(pts[ptr].y(), 1);
      ++inserted;
      ++ptr;
    }
  };

  Coord x = x_start;
  Coord y = 0;
  insert_from(x);
  std::vector<GridPoint> walk;  // inner corners in walk order (x decreasing)
  while (x > 0) {
    // climb: smallest y' > y with at most t dominators at (x, y')
    const int64_t need = inserted - t;  // prefix below y' must reach this
    y = static_cast<Coord>(fen.max_prefix_le(need - 1)) + 2;
    // retreat: largest x' < x where dominators reach alpha*t; empty columns
    // cannot change the count, so hop column to column
    while (true) {
      if (ptr >= pts.size()) {
        x = 0;
        break;
      }
      x = pts[ptr].x();
      insert_from(x);
      if (inserted - fen.prefix(y - 1) >= at) break;
    }
    if (x > 0) walk.push_back(GridPoint(x, y));
  }

  b.corners.reserve(walk.size() + 2);
  b.corners.push_back(GridPoint(0, y));  // end sentinel at the y-axis
  for (auto it = walk.rbegin(); it != walk.rend(); ++it) b.corners.push_back(*it);
  b.corners.push_back(GridPoint(x_start, 0));  // start sentinel at the x-axis
  return b;
}

// Brute-force dominator table over the full grid; rows are contiguous so a
// verification pass over all n^2 cells stays cheap.
struct DominatorGrid {
  Coord n = 0;
  std::vector<int32_t> d;  // (n+2) x (n+2), index (x, y) with 0 <= x,y <= n+1
  int32_t at(Coord x, Coord y) const {
    return d[static_cast<size_t>(x) * (static_cast<size_t>(n) + 2) +
             static_cast<size_t>(y)];
  }
};

inline DominatorGrid build_dominator_grid(const PointSet& s) {
  DominatorGrid g;
  g.n = s.n;
  const size_t side = static_cast<size_t>(s.n) + 2;
  g.d.assign(side * side, 0);
  for (const auto& p : s.pts)
    g.d[static_cast<size_t>(p.x()) * side + static_cast<size_t>(p.y())] += 1;
  for (size_t ix = side; ix-- > 0;)
    for (size_t iy = side; iy-- > 0;) {
      int64_t v = g.d[ix * side + iy];
      if (ix + 1 < side) v += g.d[(ix + 1) * side + iy];
      if (iy + 1 < side) v += g.d[ix * side + iy + 1];
      if (ix + 1 < side && iy + 1 < side) v -= g.d[(ix + 1) * side + iy + 1];
      g.d[ix * side + iy] = static_cast<int32_t>(v);
    }
  return g;
}

// Independent checker; the grid argument lets a caller amortize the
// dominator table across several thresholds of the same point set.
inline bool verify_boundary(const DominatorGrid& g, int64_t npts,
                            const StaircaseBoundary& b, int64_t t, int alpha) {
  if (t < 1 || alpha < 2) return false;
  if (b.t != t || b.alpha != alpha) return false;
  if (t > npts) {
    return b.degenerate && b.corners.size() == 1 && b.corners[0] == GridPoint(0, 0);
  }
  if (b.degenerate || b.corners.empty()) return false;

  // antichain shape with sentinels at both ends
  if (b.corners.front().x() != 0 || b.corners.back().y() != 0) return false;
  for (size_t i = 0; i < b.corners.size(); ++i) {
    if (i > 0) {
      if (b.corners[i].x() <= b.corners[i - 1].x()) return false;
      if (b.corners[i].y() >= b.corners[i - 1].y()) return false;
    }
    const GridPoint& c = b.corners[i];
    if (c.x() > g.n + 1 || c.y() > g.n + 1 || c.x() < 0 || c.y() < 0) return false;
    const int64_t k = (c.x() > g.n || c.y() > g.n) ? 0 : g.at(c.x(), c.y());
    if (k < t || k > static_cast<int64_t>(alpha) * t) return false;
  }

  // coverage: any grid point with at most t dominators dominates an entry;
  // pred_y[x] = y of the staircase entry preceding x, precomputed linearly
  std::vector<Coord> pred_y(static_cast<size_t>(g.n) + 1, 0);
  {
    size_t idx = 0;
    for (Coord x = 1; x <= g.n; ++x) {
      while (idx + 1 < b.corners.size() && b.corners[idx + 1].x() <= x) ++idx;
      pred_y[static_cast<size_t>(x)] = b.corners[idx].y();
    }
  }
  for (Coord qx = 1; qx <= g.n; ++qx) {
    const Coord py = pred_y[static_cast<size_t>(qx)];
    for (Coord qy = 1; qy <= g.n; ++qy) {
      if (g.at(qx, qy) <= t && py > qy) return false;
    }
  }
  return true;
}

inline bool verify_boundary(const PointSet& s, const StaircaseBoundary& b, int64_t t,
                            int alpha) {
  if (s.dim != 2) return false;
  return verify_boundary(build_dominator_grid(s), static_cast<int64_t>(s.pts.size()), b,
                         t, alpha);
}

class BoundarySet {
 public:
  struct Hit {
    int j = 0;
    GridPoint corner;
  };

  static BoundarySet build(const PointSet& s, int alpha = 2) {
    if (s.dim != 2) throw std::invalid_argument("BoundarySet: 2-D point set required");
    if (alpha < 2) throw std::invalid_argument("BoundarySet: alpha must be >= 2");
    BoundarySet bs;
    bs.alpha_ = alpha;
    bs.n_ = s.n;
    const int64_t npts = static_cast<int64_t>(s.pts.size());
    int levels = 1;
    for (int64_t t = 1; t < npts; t *= alpha) ++levels;
    bs.first_degenerate_ = levels;
    int64_t t = 1;
    for (int j = 0; j < levels; ++j, t *= alpha) {
      bs.bs_.push_back(build_boundary(s, t, alpha));
      if (bs.bs_.back().degenerate && bs.first_degenerate_ > j) bs.first_degenerate_ = j;
    }
    bs.build_interval_index();
    return bs;
  }

  int levels() const { return static_cast<int>(bs_.size()); }
  const StaircaseBoundary& boundary(int j) const { return bs_.at(static_cast<size_t>(j)); }
  int interval_width() const { return w_; }

  // minimal j such that q dominates an entry of boundary j
  std::optional<Hit> min_dominated_index(GridPoint q) const {
    std::optional<Hit> best;
    if (first_degenerate_ < levels())
      best = Hit{first_degenerate_, bs_[static_cast<size_t>(first_degenerate_)].corners[0]};
    if (!envy_.empty() && n_ > 0) {
      const size_t s = interval_of(std::clamp<Coord>(q.x(), 1, n_));
      // envelope of pred-corner y values is non-increasing, so the minimal
      // feasible level is a partition point
      const auto& env = envy_[s];
      const size_t ja = static_cast<size_t>(
          std::partition_point(env.begin(), env.end(),
                               [&](Coord y) { return y > q.y(); }) -
          env.begin());
      if (ja < env.size() && (!best || static_cast<int>(ja) < best->j)) {
        const auto& cand = bs_[ja].corners[acorner_[s][ja]];
        if (q.x() >= cand.x() && q.y() >= cand.y()) best = Hit{static_cast<int>(ja), cand};
      }
      for (const Slice& sl : ls_[s]) {  // ascending level, first hit is minimal
        if (best && sl.j >= best->j) break;
        const auto& corners = bs_[static_cast<size_t>(sl.j)].corners;
        size_t lo = sl.lo, hi = sl.hi + 1;  // corner range inside this interval
        const size_t idx = static_cast<size_t>(
            std::partition_point(corners.begin() + static_cast<ptrdiff_t>(lo),
                                 corners.begin() + static_cast<ptrdiff_t>(hi),
                                 [&](const GridPoint& c) { return c.x() <= q.x(); }) -
            corners.begin());
        if (idx == lo) continue;
        const GridPoint& cand = corners[idx - 1];
        if (cand.y() <= q.y()) {
          best = Hit{sl.j, cand};
          break;
        }
      }
    }
    return best;
  }

  // straightforward scan over every boundary, used as the reference answer
  std::optional<Hit> min_dominated_naive(GridPoint q) const {
    for (int j = 0; j < levels(); ++j) {
      const auto& b = bs_[static_cast<size_t>(j)];
      const auto& corners = b.corners;
      const size_t idx = static_cast<size_t>(
          std::partition_point(corners.begin(), corners.end(),
                               [&](const GridPoint& c) { return c.x() <= q.x(); }) -
          corners.begin());
      if (idx == 0) continue;
      if (corners[idx - 1].y() <= q.y()) return Hit{j, corners[idx - 1]};
    }
    return std::nullopt;
  }

  // line format: per boundary a "j t" header, then one "x y" line per corner
  void dump(std::ostream& os) const {
    for (int j = 0; j < levels(); ++j) {
      const auto& b = bs_[static_cast<size_t>(j)];
      os << j << ' ' << b.t << '\n';
      for (const auto& c : b.corners) os << c.x() << ' ' << c.y() << '\n';
    }
  }

 private:
  struct Slice {
    int j;
    int32_t lo, hi;  // inclusive corner-index range inside the interval
  };

  size_t interval_of(Coord x) const {
    return static_cast<size_t>((x - 1) / w_);
  }

  void build_interval_index() {
    if (n_ <= 0) return;
    int w = 2;
    while ((1 << w) < n_) ++w;  // ceil(log2 n), floored at 2
    w_ = std::max(2, w);
    const size_t nint = static_cast<size_t>((n_ + w_ - 1) / w_);
    ls_.assign(nint, {});
    envy_.assign(nint, {});
    acorner_.assign(nint, {});
    const int ndeg = std::min(first_degenerate_, levels());
    for (int j = 0; j < ndeg; ++j) {
      const auto& corners = bs_[static_cast<size_t>(j)].corners;
      size_t i = 0;
      while (i < corners.size()) {
        const size_t s = std::min(
            nint - 1, corners[i].x() == 0 ? 0 : interval_of(corners[i].x()));
        size_t e = i;
        while (e + 1 < corners.size() && corners[e + 1].x() >= 1 &&
               std::min(nint - 1, interval_of(corners[e + 1].x())) == s)
          ++e;
        ls_[s].push_back(Slice{j, static_cast<int32_t>(i), static_cast<int32_t>(e)});
        i = e + 1;
      }
    }
    for (size_t s = 0; s < nint; ++s) {
      const Coord a_s = static_cast<Coord>(s) * w_ + 1;
      envy_[s].resize(static_cast<size_t>(ndeg));
      acorner_[s].resize(static_cast<size_t>(ndeg));
      for (int j = 0; j < ndeg; ++j) {
        const auto& corners = bs_[static_cast<size_t>(j)].corners;
        const size_t idx = static_cast<size_t>(
            std::partition_point(corners.begin(), corners.end(),
                                 [&](const GridPoint& c) { return c.x() <= a_s; }) -
            corners.begin());
        // an x=0 sentinel guarantees idx >= 1
        acorner_[s][static_cast<size_t>(j)] = static_cast<int32_t>(idx - 1);
        Coord y = corners[idx - 1].y();
        if (j > 0) y = std::min(y, envy_[s][static_cast<size_t>(j - 1)]);
        envy_[s][static_cast<size_t>(j)] = y;
      }
    }
  }

  int alpha_ = 2;
  Coord n_ = 0;
  int w_ = 2;
  int first_degenerate_ = 0;
  std::vector<StaircaseBoundary> bs_;
  std::vector<std::vector<Slice>> ls_;
  std::vector<std::vector<Coord>> envy_;      // prefix-min pred-corner y per level
  std::vector<std::vector<int32_t>> acorner_;  // pred corner index per level
};

}  // namespace arc

#endif

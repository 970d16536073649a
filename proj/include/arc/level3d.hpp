#ifndef ARC_LEVEL3D_HPP
#define ARC_LEVEL3D_HPP

// 3-D counting in the dominated-by orientation: k = |{p <= q}|.
//
// A level for threshold t is the set of grid positions that are maximal
// under "dominated-count <= alpha*t". That gives the two properties the
// query side needs with no further work: any q with count <= t lies below
// some apex (the region is downward closed, so its maximal elements cover
// it), and every apex sits over at most alpha*t points. Stacking levels for
// t = 2^j nests the covered regions, so the minimal covering level brackets
// k within a factor alpha^2, and a slab-count tree over each apex's
// dominated set refines the estimate. Apex sets are whatever the maximality
// rule yields; their size is reported by callers, not guaranteed here.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "arc/detail/fenwick.hpp"
#include "arc/grid.hpp"
#include "arc/slab_tree.hpp"

namespace arc {

struct ApproxLevel {
  int64_t t = 1;
  int alpha = 2;
  std::vector<GridPoint> apexes;  // antichain; sorted by x once indexed

  // Rebuilds the membership index; call after changing apexes.
  void build_index() {
    std::sort(apexes.begin(), apexes.end(), [](const GridPoint& a, const GridPoint& b) {
      if (a.x() != b.x()) return a.x() < b.x();
      if (a.y() != b.y()) return a.y() < b.y();
      return a.z() < b.z();
    });
    const size_t a = apexes.size();
    base_ = 1;
    while (base_ < std::max<size_t>(a, 1)) base_ <<= 1;
    nodes_.assign(2 * base_, {});
    for (size_t i = 0; i < a; ++i)
      nodes_[base_ + i] = {{apexes[i].y(), apexes[i].z(), i}};
    for (size_t v = base_; v-- > 1;) {
      const auto& l = nodes_[2 * v];
      const auto& r = nodes_[2 * v + 1];
      std::vector<Entry> merged(l.size() + r.size());
      std::merge(l.begin(), l.end(), r.begin(), r.end(), merged.begin(),
                 [](const Entry& a2, const Entry& b2) { return a2.y < b2.y; });
      // keep only (y, z) maxima: scan from largest y, keep strictly rising z
      std::vector<Entry>& out = nodes_[v];
      Coord best = -1;
      for (size_t i = merged.size(); i-- > 0;)
        if (merged[i].z > best) {
          best = merged[i].z;
          out.push_back(merged[i]);
        }
      std::reverse(out.begin(), out.end());
    }
  }

  // any apex dominating q, as an index into apexes
  std::optional<size_t> find_dominating(GridPoint q) const {
    if (apexes.empty()) return std::nullopt;
    size_t lo = static_cast<size_t>(
        std::partition_point(apexes.begin(), apexes.end(),
                             [&](const GridPoint& a) { return a.x() < q.x(); }) -
        apexes.begin());
    if (lo == apexes.size()) return std::nullopt;
    auto probe = [&](const std::vector<Entry>& node) -> std::optional<size_t> {
      // entries are y-ascending with z descending; the best z among
      // entries with y >= q.y sits at the first of them
      auto it = std::partition_point(node.begin(), node.end(),
                                     [&](const Entry& e) { return e.y < q.y(); });
      if (it != node.end() && it->z >= q.z()) return it->idx;
      return std::nullopt;
    };
    size_t l = lo + base_, r = apexes.size() + base_;
    while (l < r) {
      if (l & 1) {
        if (auto hit = probe(nodes_[l])) return hit;
        ++l;
      }
      if (r & 1) {
        --r;
        if (auto hit = probe(nodes_[r])) return hit;
      }
      l >>= 1;
      r >>= 1;
    }
    return std::nullopt;
  }

 private:
  struct Entry {
    Coord y, z;
    size_t idx;
  };
  size_t base_ = 0;
  std::vector<std::vector<Entry>> nodes_;
};

inline std::optional<GridPoint> dominated_by_level(const ApproxLevel& l, GridPoint q) {
  if (auto i = l.find_dominating(q)) return l.apexes[*i];
  return std::nullopt;
}

namespace detail {

// Drop every element dominated by another; ties on all coordinates keep one.
inline std::vector<GridPoint> antichain_filter3(std::vector<GridPoint> v) {
  std::sort(v.begin(), v.end(), [](const GridPoint& a, const GridPoint& b) {
    if (a.z() != b.z()) return a.z() > b.z();
    if (a.x() != b.x()) return a.x() > b.x();
    return a.y() > b.y();
  });
  std::map<Coord, Coord> stairs;  // x -> y maxima of already-kept points
  auto dominated = [&](Coord x, Coord y) {
    auto it = stairs.lower_bound(x);
    return it != stairs.end() && it->second >= y;
  };
  auto insert = [&](Coord x, Coord y) {
    if (dominated(x, y)) return;
    auto it = stairs.lower_bound(x);
    while (it != stairs.begin()) {
      auto prev = std::prev(it);
      if (prev->second > y) break;
      it = stairs.erase(prev);
    }
    stairs[x] = y;
  };
  std::vector<GridPoint> kept;
  size_t i = 0;
  while (i < v.size()) {
    size_t j = i;
    while (j < v.size() && v[j].z() == v[i].z()) ++j;
    // same-z group: query in x-descending order so in-group dominance counts
    for (size_t k = i; k < j; ++k)
      if (!dominated(v[k].x(), v[k].y())) {
        kept.push_back(v[k]);
        insert(v[k].x(), v[k].y());
      }
    i = j;
  }
  return kept;
}

inline bool is_antichain3(const std::vector<GridPoint>& a) {
  return antichain_filter3(a).size() == a.size();
}

}  // namespace detail

// Sparse approximate level, built by sweeping z downward band by band (a
// band is the z-range between consecutive distinct point z's, over which
// dominated-counts are constant). Two staircases are read off a running
// order statistic per band: the frontier of {count <= t} and the frontier
// of {count <= alpha*t}. Whenever a corner of the t-frontier is not yet
// below an emitted apex, the alpha*t-frontier corner above it is emitted
// with the band's top z. That covers every position with count <= t by an
// apex whose own count is at most alpha*t, and spends apexes only where
// the t-level actually escaped the cover, which keeps the set far smaller
// than the full corner set of the capped region.
inline ApproxLevel build_level(const PointSet& s, int64_t t, int alpha = 2) {
  if (s.dim != 3) throw std::invalid_argument("build_level: 3-D point set required");
  if (t < 1) throw std::invalid_argument("build_level: t must be >= 1");
  if (alpha < 2) throw std::invalid_argument("build_level: alpha must be >= 2");
  ApproxLevel level;
  level.t = t;
  level.alpha = alpha;
  const Coord n = s.n;
  if (n <= 0) {
    level.build_index();
    return level;
  }
  const int64_t cap = static_cast<int64_t>(alpha) * t;

  std::vector<size_t> by_z(s.pts.size()), by_x(s.pts.size());
  for (size_t i = 0; i < s.pts.size(); ++i) by_z[i] = by_x[i] = i;
  std::sort(by_z.begin(), by_z.end(),
            [&](size_t a, size_t b) { return s.pts[a].z() > s.pts[b].z(); });
  std::sort(by_x.begin(), by_x.end(),
            [&](size_t a, size_t b) { return s.pts[a].x() < s.pts[b].x(); });
  std::vector<char> active(s.pts.size(), 1);

  std::map<Coord, Coord> cover;  // x -> y maxima of emitted apex projections
  auto is_covered = [&](Coord x, Coord y) {
    auto it = cover.lower_bound(x);
    return it != cover.end() && it->second >= y;
  };
  auto cover_insert = [&](Coord x, Coord y) {
    auto it = cover.lower_bound(x);
    while (it != cover.begin()) {
      auto prev = std::prev(it);
      if (prev->second > y) break;
      it = cover.erase(prev);
    }
    cover[x] = y;
  };
  // max-heap holding the `limit` smallest values seen so far
  auto push_capped = [](std::vector<Coord>& h, Coord y, int64_t limit) {
    if (static_cast<int64_t>(h.size()) < limit) {
      h.push_back(y);
      std::push_heap(h.begin(), h.end());
    } else if (y < h.front()) {
      std::pop_heap(h.begin(), h.end());
      h.back() = y;
      std::push_heap(h.begin(), h.end());
    }
  };

  struct Corner {
    Coord x, y;
  };
  std::vector<GridPoint> out;
  std::vector<Coord> heap_t, heap_c;
  size_t zi = 0;
  Coord band_top = n;

  while (true) {
    heap_t.clear();
    heap_c.clear();
    std::vector<Corner> tc, cc;  // corners of the t- and alpha*t-frontiers
    {
      int64_t seen = 0;
      size_t xp = 0;
      Coord pty = 0, pcy = 0;
      for (Coord x = 1; x <= n; ++x) {
        while (xp < by_x.size() && s.pts[by_x[xp]].x() == x) {
          const size_t i = by_x[xp];
          ++xp;
          if (!active[i]) continue;
          ++seen;
          push_capped(heap_t, s.pts[i].y(), t + 1);
          push_capped(heap_c, s.pts[i].y(), cap + 1);
        }
        const Coord ty = seen <= t ? n : heap_t.front() - 1;
        const Coord cy = seen <= cap ? n : heap_c.front() - 1;
        if (x > 1) {
          if (pty > ty) tc.push_back({x - 1, pty});
          if (pcy > cy) cc.push_back({x - 1, pcy});
        }
        pty = ty;
        pcy = cy;
        if (cy == 0) break;  // both frontiers stay at zero further right
      }
      if (pty >= 1) tc.push_back({n, pty});
      if (pcy >= 1) cc.push_back({n, pcy});
    }

    size_t ci = 0;
    for (const auto& c : tc) {
      if (is_covered(c.x, c.y)) continue;
      while (ci < cc.size() && cc[ci].x < c.x) ++ci;
      if (ci >= cc.size()) break;  // cannot happen: the wider frontier extends past tc
      out.push_back(GridPoint(cc[ci].x, cc[ci].y, band_top));
      cover_insert(cc[ci].x, cc[ci].y);
    }

    if (zi >= by_z.size()) break;
    const Coord zv = s.pts[by_z[zi]].z();
    while (zi < by_z.size() && s.pts[by_z[zi]].z() == zv) {
      active[by_z[zi]] = 0;
      ++zi;
    }
    band_top = zv - 1;
    if (band_top < 1) break;
  }

  level.apexes = detail::antichain_filter3(std::move(out));
  level.build_index();
  return level;
}

// Exhaustive checker: prefix-sum grids over the whole cube. Meant for small
// instances and corruption tests; quadratic-plus memory in n is fine there.
inline bool verify_level_exhaustive(const PointSet& s, const ApproxLevel& l, int64_t t,
                                    int alpha) {
  if (s.dim != 3 || t < 1 || alpha < 2) return false;
  if (l.t != t || l.alpha != alpha) return false;
  const Coord n = s.n;
  for (const auto& a : l.apexes)
    for (int ax = 0; ax < 3; ++ax)
      if (a[ax] < 1 || a[ax] > n) return false;
  if (!detail::is_antichain3(l.apexes)) return false;
  if (n <= 0) return l.apexes.empty();

  const size_t side = static_cast<size_t>(n) + 1;
  auto id = [&](Coord x, Coord y, Coord z) {
    return (static_cast<size_t>(x) * side + static_cast<size_t>(y)) * side +
           static_cast<size_t>(z);
  };
  std::vector<int32_t> cnt(side * side * side, 0);
  for (const auto& p : s.pts) ++cnt[id(p.x(), p.y(), p.z())];
  for (Coord x = 1; x <= n; ++x)
    for (Coord y = 0; y <= n; ++y)
      for (Coord z = 0; z <= n; ++z) cnt[id(x, y, z)] += cnt[id(x - 1, y, z)];
  for (Coord x = 0; x <= n; ++x)
    for (Coord y = 1; y <= n; ++y)
      for (Coord z = 0; z <= n; ++z) cnt[id(x, y, z)] += cnt[id(x, y - 1, z)];
  for (Coord x = 0; x <= n; ++x)
    for (Coord y = 0; y <= n; ++y)
      for (Coord z = 1; z <= n; ++z) cnt[id(x, y, z)] += cnt[id(x, y, z - 1)];

  const int64_t cap = static_cast<int64_t>(alpha) * t;
  for (const auto& a : l.apexes)
    if (cnt[id(a.x(), a.y(), a.z())] > cap) return false;

  std::vector<char> covered(side * side * side, 0);
  for (const auto& a : l.apexes) covered[id(a.x(), a.y(), a.z())] = 1;
  for (Coord x = n; x >= 1; --x)
    for (Coord y = n; y >= 1; --y)
      for (Coord z = n; z >= 1; --z) {
        char c = covered[id(x, y, z)];
        if (x < n) c |= covered[id(x + 1, y, z)];
        if (y < n) c |= covered[id(x, y + 1, z)];
        if (z < n) c |= covered[id(x, y, z + 1)];
        covered[id(x, y, z)] = c;
      }
  for (Coord x = 1; x <= n; ++x)
    for (Coord y = 1; y <= n; ++y)
      for (Coord z = 1; z <= n; ++z)
        if (cnt[id(x, y, z)] <= t && !covered[id(x, y, z)]) return false;
  return true;
}

// Large-instance checker. Coverage holds iff every minimal uncovered grid
// position has dominated-count > t; those positions are the inner corners
// of the complement of the apex union, enumerated per run of x between
// consecutive distinct apex x's. Counts for them and for the apex windows
// come from one offline sweep.
inline bool verify_level_structured(const PointSet& s, const ApproxLevel& l, int64_t t,
                                    int alpha) {
  if (s.dim != 3 || t < 1 || alpha < 2) return false;
  if (l.t != t || l.alpha != alpha) return false;
  const Coord n = s.n;
  for (const auto& a : l.apexes)
    for (int ax = 0; ax < 3; ++ax)
      if (a[ax] < 1 || a[ax] > n) return false;
  if (!detail::is_antichain3(l.apexes)) return false;
  if (n <= 0) return l.apexes.empty();

  struct Job {
    GridPoint at;
    bool is_window;  // window: count <= alpha*t; corner: count > t
  };
  std::vector<Job> jobs;
  jobs.reserve(l.apexes.size() * 2 + 4);
  for (const auto& a : l.apexes) jobs.push_back({a, true});

  // sweep apexes by descending x, maintaining (y, z) maxima of those seen
  std::vector<GridPoint> by_x = l.apexes;
  std::sort(by_x.begin(), by_x.end(),
            [](const GridPoint& a, const GridPoint& b) { return a.x() > b.x(); });
  std::map<Coord, Coord> stairs;  // y -> z, maxima, z decreasing in y
  auto add_corner_jobs = [&](Coord xlo) {
    if (stairs.empty()) {
      jobs.push_back({GridPoint(xlo, 1, 1), false});
      return;
    }
    // walk y ascending (z descending): the gap above each step starts one
    // past the previous y and one past the z of the step that ends it
    auto it = stairs.begin();
    if (it->second < n) jobs.push_back({GridPoint(xlo, 1, it->second + 1), false});
    Coord prev_y = it->first;
    for (++it; it != stairs.end(); ++it) {
      jobs.push_back({GridPoint(xlo, prev_y + 1, it->second + 1), false});
      prev_y = it->first;
    }
    if (prev_y < n) jobs.push_back({GridPoint(xlo, prev_y + 1, 1), false});
  };
  auto insert_stairs = [&](Coord y, Coord z) {
    auto it = stairs.lower_bound(y);
    if (it != stairs.end() && it->second >= z) return;  // dominated
    while (it != stairs.begin()) {
      auto prev = std::prev(it);
      if (prev->second > z) break;
      it = stairs.erase(prev);
    }
    stairs[y] = z;
  };
  size_t i = 0;
  if (!by_x.empty() && by_x.front().x() < n) add_corner_jobs(by_x.front().x() + 1);
  while (i < by_x.size()) {
    const Coord xv = by_x[i].x();
    while (i < by_x.size() && by_x[i].x() == xv) {
      insert_stairs(by_x[i].y(), by_x[i].z());
      ++i;
    }
    const Coord xlo = i < by_x.size() ? by_x[i].x() + 1 : 1;
    add_corner_jobs(xlo);
  }
  if (by_x.empty()) add_corner_jobs(1);

  std::sort(jobs.begin(), jobs.end(),
            [](const Job& a, const Job& b) { return a.at.z() < b.at.z(); });
  std::vector<GridPoint> pts = s.pts;
  std::sort(pts.begin(), pts.end(),
            [](const GridPoint& a, const GridPoint& b) { return a.z() < b.z(); });
  detail::Fenwick2D fw(n, n);
  const int64_t cap = static_cast<int64_t>(alpha) * t;
  size_t pi = 0;
  for (const auto& job : jobs) {
    while (pi < pts.size() && pts[pi].z() <= job.at.z()) {
      fw.add(pts[pi].x(), pts[pi].y(), 1);
      ++pi;
    }
    const Count c = fw.prefix(job.at.x(), job.at.y());
    if (job.is_window ? c > cap : c <= t) return false;
  }
  return true;
}

inline bool verify_level(const PointSet& s, const ApproxLevel& l, int64_t t, int alpha) {
  if (s.n <= 256 && s.pts.size() <= 256) return verify_level_exhaustive(s, l, t, alpha);
  return verify_level_structured(s, l, t, alpha);
}

// Level stack plus per-apex refinement trees; answers "how many points does
// q dominate" with an additive bound.
class LevelSet3D {
 public:
  static LevelSet3D build(const PointSet& s, const Regime& regime = Adaptive{}) {
    if (s.dim != 3) throw std::invalid_argument("LevelSet3D: 3-D point set required");
    LevelSet3D ls;
    ls.regime_ = regime;
    ls.n_ = s.n;
    ls.npts_ = static_cast<int64_t>(s.pts.size());
    int j_top = 0;
    while ((int64_t{1} << j_top) < ls.npts_) ++j_top;
    ls.levels_.reserve(static_cast<size_t>(j_top) + 1);
    ls.ds_.resize(static_cast<size_t>(j_top) + 1);
    for (int j = 0; j <= j_top; ++j)
      ls.levels_.push_back(build_level(s, int64_t{1} << j, kAlpha));
    // Nest coverage across levels so binary search is sound: an apex of
    // level j not below any apex of level j+1 is lifted up a level (its
    // count fits the wider window, so validity is preserved).
    for (int j = 0; j < j_top; ++j) {
      auto& up = ls.levels_[static_cast<size_t>(j) + 1];
      bool changed = false;
      for (const auto& a : ls.levels_[static_cast<size_t>(j)].apexes)
        if (!up.find_dominating(a)) {
          up.apexes.push_back(a);
          changed = true;
        }
      if (changed) {
        up.apexes = detail::antichain_filter3(std::move(up.apexes));
        up.build_index();
      }
    }
    std::vector<GridPoint> by_x = s.pts;
    std::sort(by_x.begin(), by_x.end(),
              [](const GridPoint& a, const GridPoint& b) { return a.x() < b.x(); });
    for (int j = 0; j <= j_top; ++j) {
      auto& row = ls.ds_[static_cast<size_t>(j)];
      const auto& apexes = ls.levels_[static_cast<size_t>(j)].apexes;
      row.reserve(apexes.size());
      for (const auto& a : apexes) {
        std::vector<GridPoint> members;
        auto end = std::partition_point(
            by_x.begin(), by_x.end(),
            [&](const GridPoint& p) { return p.x() <= a.x(); });
        for (auto it = by_x.begin(); it != end; ++it)
          if (it->y() <= a.y() && it->z() <= a.z()) members.push_back(*it);
        row.push_back(make_struct(std::move(members), s.n, regime));
      }
    }
    std::vector<GridPoint> all = s.pts;
    ls.global_ = make_struct(std::move(all), s.n, regime);
    return ls;
  }

  struct CountDetail {
    Estimate est;
    int level = -1;    // covering level index, -1 for the global fallback
    Count d_size = 0;  // points stored in the structure that answered
    bool global = false;
    bool scanned = false;  // level-0 direct scan, exact by construction
  };

  CountDetail count3_detail(GridPoint q, double rho) const {
    if (std::holds_alternative<Adaptive>(regime_)) {
      if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("count3: rho must be in (0,1)");
    }
    CountDetail out;
    if (npts_ == 0) return out;
    const int j_top = static_cast<int>(levels_.size()) - 1;
    if (!levels_[static_cast<size_t>(j_top)].find_dominating(q)) {
      out.global = true;
      out.d_size = static_cast<Count>(global_.members.size());
      out.est = query_struct(global_, q, rho);
      return out;
    }
    // coverage is nested across levels, so binary search the minimal one
    int lo = 0, hi = j_top;
    std::optional<size_t> apex;
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (auto hit = levels_[static_cast<size_t>(mid)].find_dominating(q))
        hi = mid, apex = hit;
      else
        lo = mid + 1;
    }
    if (!apex) apex = levels_[static_cast<size_t>(lo)].find_dominating(q);
    const auto& ds = ds_[static_cast<size_t>(lo)][*apex];
    out.level = lo;
    out.d_size = static_cast<Count>(ds.members.size());
    if (lo == 0) {  // at most alpha members: count them outright
      out.scanned = true;
      Count k = 0;
      for (const auto& p : ds.members)
        if (dominates(q, p, 3)) ++k;
      out.est = {k, 0};
      return out;
    }
    out.est = query_struct(ds, q, rho);
    return out;
  }

  Estimate count3(GridPoint q, double rho) const { return count3_detail(q, rho).est; }

  int levels() const { return static_cast<int>(levels_.size()); }
  const ApproxLevel& level(int j) const { return levels_.at(static_cast<size_t>(j)); }

  struct Space {
    int64_t stored_points = 0;
    int64_t map_entries = 0;
    SpaceStats tree_stats;
    std::vector<int64_t> apexes_per_level;
  };
  Space space() const {
    Space sp;
    for (const auto& lv : levels_)
      sp.apexes_per_level.push_back(static_cast<int64_t>(lv.apexes.size()));
    for (const auto& row : ds_)
      for (const auto& ds : row) account(ds, sp);
    account(global_, sp);
    return sp;
  }

  // recheck every apex structure against brute-force dominated sets
  bool audit(const PointSet& s) const {
    if (ds_.size() != levels_.size()) return false;
    for (size_t j = 0; j < levels_.size(); ++j) {
      const auto& apexes = levels_[j].apexes;
      const auto& row = ds_[j];
      if (row.size() != apexes.size()) return false;
      const int64_t cap = (int64_t{1} << j) * kAlpha;
      for (size_t i = 0; i < apexes.size(); ++i) {
        std::vector<GridPoint> expect;
        for (const auto& p : s.pts)
          if (dominates(apexes[i], p, 3)) expect.push_back(p);
        if (static_cast<int64_t>(expect.size()) > cap) return false;
        auto got = row[i].members;
        std::sort(expect.begin(), expect.end(), by_xyz);
        std::sort(got.begin(), got.end(), by_xyz);
        if (expect != got) return false;
        if (!row[i].tree.audit(reflected_ranks(row[i].members, n_))) return false;
      }
    }
    auto got = global_.members;
    auto expect = s.pts;
    std::sort(expect.begin(), expect.end(), by_xyz);
    std::sort(got.begin(), got.end(), by_xyz);
    if (expect != got) return false;
    return global_.tree.audit(reflected_ranks(global_.members, n_));
  }

 private:
  static constexpr int kAlpha = 2;

  struct DStruct {
    std::vector<GridPoint> members;               // original orientation
    std::array<std::vector<Coord>, 3> reflected;  // sorted reflected coords
    SlabTree3 tree;                               // over reflected ranks
  };

  static bool by_xyz(const GridPoint& a, const GridPoint& b) {
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return a.z() < b.z();
  }

  static Orientation flip_all() {
    Orientation o;
    o.flip = {true, true, true};
    return o;
  }

  // stable rank assignment of the reflected members, duplicates allowed
  static std::vector<GridPoint> reflected_ranks(const std::vector<GridPoint>& members,
                                                Coord n) {
    const size_t m = members.size();
    std::vector<GridPoint> refl(m);
    for (size_t i = 0; i < m; ++i) refl[i] = reflect_point(members[i], n, flip_all(), 3);
    std::vector<GridPoint> out(m, GridPoint(1, 1, 1));
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<std::pair<Coord, size_t>> order(m);
      for (size_t i = 0; i < m; ++i) order[i] = {refl[i][axis], i};
      std::stable_sort(order.begin(), order.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (size_t r = 0; r < m; ++r) out[order[r].second][axis] = static_cast<Coord>(r + 1);
    }
    return out;
  }

  static DStruct make_struct(std::vector<GridPoint>&& members, Coord n,
                             const Regime& regime) {
    DStruct ds;
    ds.members = std::move(members);
    for (int a = 0; a < 3; ++a) {
      ds.reflected[static_cast<size_t>(a)].reserve(ds.members.size());
      for (const auto& p : ds.members)
        ds.reflected[static_cast<size_t>(a)].push_back(n + 1 - p[a]);
      std::sort(ds.reflected[static_cast<size_t>(a)].begin(),
                ds.reflected[static_cast<size_t>(a)].end());
    }
    ds.tree = SlabTree3::build(reflected_ranks(ds.members, n), regime);
    return ds;
  }

  Estimate query_struct(const DStruct& ds, GridPoint q, double rho) const {
    const GridPoint qr = reflect_point(q, n_, flip_all(), 3);
    GridPoint mapped(1, 1, 1);
    for (int a = 0; a < 3; ++a) {
      const auto& v = ds.reflected[static_cast<size_t>(a)];
      mapped[a] = static_cast<Coord>(std::lower_bound(v.begin(), v.end(), qr[a]) -
                                     v.begin() + 1);
    }
    if (std::holds_alternative<FixedError>(regime_)) return ds.tree.query(mapped, 0);
    return ds.tree.query_rho(mapped, rho);
  }

  static void account(const DStruct& ds, Space& sp) {
    sp.stored_points += static_cast<int64_t>(ds.members.size());
    for (const auto& v : ds.reflected) sp.map_entries += static_cast<int64_t>(v.size());
    const SpaceStats st = ds.tree.space();
    sp.tree_stats.corner_entries += st.corner_entries;
    sp.tree_stats.map_entries += st.map_entries;
    sp.tree_stats.base_points += st.base_points;
    sp.tree_stats.nodes += st.nodes;
  }

  Regime regime_ = Adaptive{};
  Coord n_ = 0;
  int64_t npts_ = 0;
  std::vector<ApproxLevel> levels_;
  std::vector<std::vector<DStruct>> ds_;
  DStruct global_;
};

inline Estimate count3(const LevelSet3D& ls, GridPoint q, double rho) {
  return ls.count3(q, rho);
}

}  // namespace arc

#endif

#ifndef ARC_DOMINANCE2D_HPP
#define ARC_DOMINANCE2D_HPP

// Composed 2-D dominance counting.
//
// A stack of staircase boundaries localizes k = |{p >= q}| within a factor
// alpha^2. Every boundary corner c carries a slab-count tree over just the
// points dominating c; since the corner found for q satisfies
// 2^(j-1) < k and |D| <= 2^(j+1), that tree holds at most 4k points, so
// its additive bound expressed in |D| is also a bound in k (up to the
// documented factor 4). Level 0 is answered by scanning its at-most-two
// members, which also makes the empty case exactly zero. Queries landing
// on a degenerate level (k within a factor alpha of n) use one global tree
// over the whole set.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arc/grid.hpp"
#include "arc/slab_tree.hpp"
#include "arc/staircase.hpp"

namespace arc {

class Dominance2D {
 public:
  static Dominance2D build(const PointSet& s, const Regime& regime = Adaptive{}) {
    if (s.dim != 2) throw std::invalid_argument("Dominance2D: 2-D point set required");
    Dominance2D d;
    d.regime_ = regime;
    d.npts_ = static_cast<int64_t>(s.pts.size());
    d.bs_ = BoundarySet::build(s, kAlpha);
    d.ds_.resize(static_cast<size_t>(d.bs_.levels()));
    for (int j = 0; j < d.bs_.levels(); ++j) {
      const auto& b = d.bs_.boundary(j);
      if (b.degenerate) continue;
      auto& row = d.ds_[static_cast<size_t>(j)];
      row.reserve(b.corners.size());
      for (const auto& c : b.corners) {
        std::vector<GridPoint> members;
        for (const auto& p : s.pts)
          if (dominates(p, c, 2)) members.push_back(p);
        row.push_back(make_struct(std::move(members), regime));
      }
    }
    std::vector<GridPoint> all = s.pts;
    d.global_ = make_struct(std::move(all), regime);
    return d;
  }

  // which path answered a query, and how large the structure it used was
  struct CountDetail {
    Estimate est;
    int level = 0;      // boundary index of the corner that was used
    Count d_size = 0;   // points stored in the structure that answered
    bool global = false;  // fell through to the whole-set tree
    bool scanned = false;  // level-0 direct scan, exact by construction
  };

  CountDetail count_detail(GridPoint q, double rho) const {
    if (std::holds_alternative<Adaptive>(regime_)) {
      if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("count: rho must be in (0,1)");
    }
    CountDetail out;
    const auto hit = bs_.min_dominated_index(q);
    if (!hit) return out;  // unreachable with a full boundary stack
    out.level = hit->j;
    if (bs_.boundary(hit->j).degenerate) {
      out.global = true;
      out.d_size = static_cast<Count>(global_.members.size());
      out.est = query_struct(global_, q, rho);
      return out;
    }
    const DStruct& ds = lookup(hit->j, hit->corner);
    out.d_size = static_cast<Count>(ds.members.size());
    if (hit->j == 0) {  // at most alpha members: count them outright
      out.scanned = true;
      Count k = 0;
      for (const auto& p : ds.members)
        if (dominates(p, q, 2)) ++k;
      out.est = {k, 0};
      return out;
    }
    out.est = query_struct(ds, q, rho);
    return out;
  }

  // additive-error estimate of the number of points dominating q;
  // |estimate - k| <= bound always, bound = 0 when k = 0
  Estimate count(GridPoint q, double rho) const { return count_detail(q, rho).est; }

  // brackets lo <= k <= hi with hi <= alpha^2 * max(lo, 1); exact at level 0
  std::pair<Count, Count> count_constant_factor(GridPoint q) const {
    const auto hit = bs_.min_dominated_index(q);
    if (!hit) return {0, 0};
    const int j = hit->j;
    if (!bs_.boundary(j).degenerate && j == 0) {
      const DStruct& ds = lookup(0, hit->corner);
      Count k = 0;
      for (const auto& p : ds.members)
        if (dominates(p, q, 2)) ++k;
      return {k, k};
    }
    int64_t lo = 0;
    if (j >= 1) {
      lo = 1;
      for (int i = 1; i < j; ++i) lo *= kAlpha;  // alpha^(j-1)
    }
    int64_t hi = bs_.boundary(j).degenerate
                     ? npts_
                     : std::min<int64_t>(npts_, std::max<int64_t>(lo, 1) * kAlpha * kAlpha);
    return {lo, hi};
  }

  const BoundarySet& boundaries() const { return bs_; }

  struct Space {
    int64_t stored_points = 0;  // members across all corner structures
    int64_t map_entries = 0;    // sorted coordinate arrays for rank mapping
    SpaceStats tree_stats;      // aggregated slab-tree internals
  };
  Space space() const {
    Space sp;
    for (const auto& row : ds_)
      for (const auto& ds : row) account(ds, sp);
    account(global_, sp);
    return sp;
  }

  // recheck every corner structure against brute-force dominator sets
  bool audit(const PointSet& s) const {
    if (ds_.size() != static_cast<size_t>(bs_.levels())) return false;
    for (int j = 0; j < bs_.levels(); ++j) {
      const auto& b = bs_.boundary(j);
      if (b.degenerate) {
        if (!ds_[static_cast<size_t>(j)].empty()) return false;
        continue;
      }
      const auto& row = ds_[static_cast<size_t>(j)];
      if (row.size() != b.corners.size()) return false;
      for (size_t i = 0; i < b.corners.size(); ++i) {
        std::vector<GridPoint> expect;
        for (const auto& p : s.pts)
          if (dominates(p, b.corners[i], 2)) expect.push_back(p);
        auto got = row[i].members;
        auto by_xy = [](const GridPoint& a, const GridPoint& c) {
          return a.x() != c.x() ? a.x() < c.x() : a.y() < c.y();
        };
        std::sort(expect.begin(), expect.end(), by_xy);
        std::sort(got.begin(), got.end(), by_xy);
        if (expect != got) return false;
        if (!row[i].tree.audit(rank_reduce(row[i].members))) return false;
      }
    }
    return global_.tree.audit(rank_reduce(global_.members));
  }

 private:
  static constexpr int kAlpha = 2;

  struct DStruct {
    std::vector<GridPoint> members;
    std::vector<Coord> xs, ys;  // sorted member coordinates for query mapping
    SlabTree2 tree;
  };

  // stable rank assignment; works for duplicate coordinates too
  static std::vector<GridPoint> rank_reduce(const std::vector<GridPoint>& members) {
    const size_t m = members.size();
    std::vector<GridPoint> out(m, GridPoint(1, 1));
    for (int axis = 0; axis < 2; ++axis) {
      std::vector<std::pair<Coord, size_t>> order(m);
      for (size_t i = 0; i < m; ++i) order[i] = {members[i][axis], i};
      std::stable_sort(order.begin(), order.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (size_t r = 0; r < m; ++r) out[order[r].second][axis] = static_cast<Coord>(r + 1);
    }
    return out;
  }

  static DStruct make_struct(std::vector<GridPoint>&& members, const Regime& regime) {
    DStruct ds;
    ds.members = std::move(members);
    ds.xs.reserve(ds.members.size());
    ds.ys.reserve(ds.members.size());
    for (const auto& p : ds.members) {
      ds.xs.push_back(p.x());
      ds.ys.push_back(p.y());
    }
    std::sort(ds.xs.begin(), ds.xs.end());
    std::sort(ds.ys.begin(), ds.ys.end());
    ds.tree = SlabTree2::build(rank_reduce(ds.members), regime);
    return ds;
  }

  Estimate query_struct(const DStruct& ds, GridPoint q, double rho) const {
    GridPoint qr(
        static_cast<Coord>(std::lower_bound(ds.xs.begin(), ds.xs.end(), q.x()) -
                           ds.xs.begin() + 1),
        static_cast<Coord>(std::lower_bound(ds.ys.begin(), ds.ys.end(), q.y()) -
                           ds.ys.begin() + 1));
    if (std::holds_alternative<FixedError>(regime_)) return ds.tree.query(qr, 0);
    return ds.tree.query_rho(qr, rho);
  }

  const DStruct& lookup(int j, GridPoint corner) const {
    const auto& corners = bs_.boundary(j).corners;
    const size_t idx = static_cast<size_t>(
        std::partition_point(corners.begin(), corners.end(),
                             [&](const GridPoint& c) { return c.x() < corner.x(); }) -
        corners.begin());
    return ds_[static_cast<size_t>(j)][idx];
  }

  static void account(const DStruct& ds, Space& sp) {
    sp.stored_points += static_cast<int64_t>(ds.members.size());
    sp.map_entries += static_cast<int64_t>(ds.xs.size() + ds.ys.size());
    const SpaceStats st = ds.tree.space();
    sp.tree_stats.corner_entries += st.corner_entries;
    sp.tree_stats.map_entries += st.map_entries;
    sp.tree_stats.base_points += st.base_points;
    sp.tree_stats.nodes += st.nodes;
  }

  Regime regime_ = Adaptive{};
  int64_t npts_ = 0;
  BoundarySet bs_;
  std::vector<std::vector<DStruct>> ds_;
  DStruct global_;
};

}  // namespace arc

#endif

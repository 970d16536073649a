#ifndef ARC_SLAB_TREE_HPP
#define ARC_SLAB_TREE_HPP

// Recursive slab-count grids for approximate dominance counting in 2-D and
// 3-D. A node splits its points into occupancy-quantile slabs per axis,
// stores exact dominator counts at all slab-corner grid vertices, and keeps
// one recursive child per slab. A query charges the corner table for the
// fully-beyond region and recurses into the one slab per axis that the
// query point cuts; stopping early leaves a one-sided undercount whose size
// is bounded by the occupancies of the cut slabs.
//
// Two regimes:
//  - Adaptive: slabs hold ~m^(1/2) (2-D) / m^(2/3) (3-D) points, recursion
//    to a small verbatim base case; the query chooses its depth v, with
//    guaranteed error <= 2^v * m^(1/2^v)  /  3^v * m^((2/3)^v).
//  - FixedError{c}: slabs hold ~m^(1/2+eps) / m^(2/3+eps) points, recursion
//    only into slabs with more than m_root^f points (f = c/4 resp. c/16)
//    and only through g levels; no point lists are stored anywhere, which
//    keeps the structure sublinear. Queries always use the full built
//    depth; the depth argument is ignored in this regime.
//
// Inputs must be in rank space: every axis a permutation of 1..m.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "arc/grid.hpp"

namespace arc {

// |estimate - exact| <= bound always; this implementation never overcounts,
// so exact - bound <= estimate <= exact.
struct Estimate {
  Count estimate = 0;
  Count bound = 0;
  bool operator==(const Estimate&) const = default;
};

struct Adaptive {
  int base_size = 16;  // store point lists verbatim at or below this size
};

struct FixedError {
  double c = 0.5;    // target error exponent, 0 < c < 1
  double eps = 0.1;  // slab-size slack
};

using Regime = std::variant<Adaptive, FixedError>;

struct SpaceStats {
  int64_t corner_entries = 0;
  int64_t map_entries = 0;
  int64_t base_points = 0;
  int64_t nodes = 0;
  int64_t total() const { return corner_entries + map_entries + base_points; }
};

inline int depth_for_rho_2d(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0,1)");
  return static_cast<int>(std::ceil(std::log2(1.0 / rho))) + 2;
}

inline int depth_for_rho_3d(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0,1)");
  return static_cast<int>(std::ceil(std::log2(1.0 / rho) / std::log2(1.5))) + 2;
}

inline double formula_bound_2d(Count m, int v) {
  return std::pow(2.0, v) * std::pow(static_cast<double>(m), 1.0 / std::pow(2.0, v));
}

inline double formula_bound_3d(Count m, int v) {
  return std::pow(3.0, v) * std::pow(static_cast<double>(m), std::pow(2.0 / 3.0, v));
}

template <int DIM>
class SlabTree {
  static_assert(DIM == 2 || DIM == 3);

 public:
  SlabTree() = default;

  static SlabTree build(const std::vector<GridPoint>& pts, Regime regime = Adaptive{}) {
    SlabTree t;
    t.m_ = static_cast<Count>(pts.size());
    if (const auto* a = std::get_if<Adaptive>(&regime)) {
      t.fixed_ = false;
      t.base_size_ = std::max(1, a->base_size);
    } else {
      const auto& fe = std::get<FixedError>(regime);
      if (!(fe.c > 0.0 && fe.c < 1.0)) throw std::invalid_argument("FixedError c must lie in (0,1)");
      const double axis_exp = DIM == 2 ? 0.5 : 1.0 / 3.0;
      if (!(fe.eps > 0.0 && fe.eps < axis_exp))
        throw std::invalid_argument("FixedError eps out of range");
      t.fixed_ = true;
      t.eps_ = fe.eps;
      t.f_ = DIM == 2 ? fe.c / 4.0 : fe.c / 16.0;
      const double shrink = DIM == 2 ? 2.0 / (1.0 + 2.0 * fe.eps) : 3.0 / (2.0 + 3.0 * fe.eps);
      t.g_ = static_cast<int>(std::ceil(std::log(1.0 / t.f_) / std::log(shrink)));
      t.drop_threshold_ = std::pow(static_cast<double>(std::max<Count>(t.m_, 1)), t.f_);
      // In 3-D, f = c/16 makes m^f barely exceed 1 at practical sizes, so the
      // raw rule recurses into constant-size slabs through all g levels and
      // the node count explodes multiplicatively (each node fans out into
      // 3r children shrinking only as m^(2/3+eps)). Dropping small slabs
      // instead is always sound: queries charge every dropped slab's real
      // occupancy to the returned bound.
      if (DIM == 3) t.drop_threshold_ = std::max(t.drop_threshold_, 32.0);
    }
    check_rank_space(pts);
    t.root_ = std::make_unique<Node>();
    t.build_node(*t.root_, pts, 0);
    return t;
  }

  // Approximate |{p : p >= q componentwise}| over this tree's point set.
  // v bounds the recursion depth in the adaptive regime and is ignored in
  // the fixed-error regime. Coordinates outside [1..m] are clamped (above m
  // the answer is exactly 0).
  Estimate query(const GridPoint& q, int v) const {
    if (v < 0) throw std::invalid_argument("query depth must be >= 0");
    if (!root_) return {0, 0};
    return query_node(*root_, q, fixed_ ? kUnbounded : v);
  }

  Estimate query_rho(const GridPoint& q, double rho) const {
    return query(q, DIM == 2 ? depth_for_rho_2d(rho) : depth_for_rho_3d(rho));
  }

  Count size() const { return m_; }
  bool fixed_regime() const { return fixed_; }
  double f() const { return f_; }
  int g() const { return g_; }

  SpaceStats space() const {
    SpaceStats s;
    if (root_) space_node(*root_, s);
    return s;
  }

  // Recomputes every stored corner count, slab occupancy and child map by
  // brute force and checks them. Pass the exact point list the tree was
  // built from. Expensive; meant for tests and the CLI audit command.
  bool audit(const std::vector<GridPoint>& pts) const {
    if (!root_) return pts.empty();
    return audit_node(*root_, pts, 0);
  }

 private:
  static constexpr int kUnbounded = 1 << 28;

  struct Node {
    int32_t m = 0;
    int32_t r = 0;
    bool leaf = false;
    std::vector<GridPoint> pts;                                // leaf only
    std::vector<int32_t> corner;                               // (r+1)^DIM suffix counts
    std::array<std::vector<std::unique_ptr<Node>>, DIM> kids;  // kids[axis][slab]
    std::array<std::vector<Coord>, DIM> snap;  // sorted parent coords per non-offset axis

    // Occupancy-quantile cut positions: slab s covers coords (cut(s), cut(s+1)].
    Coord cut(int s) const {
      const int32_t base = m / r, ext = m % r;
      return static_cast<Coord>(s * base + std::min(s, ext));
    }
    Coord occupancy(int s) const { return cut(s + 1) - cut(s); }
    int slab_of(Coord x) const {
      const int32_t base = m / r, ext = m % r;
      const Coord first = static_cast<Coord>(ext) * (base + 1);
      if (x <= first) return static_cast<int>((x - 1) / (base + 1));
      return static_cast<int>(ext + (x - first - 1) / base);
    }
  };

  static void check_rank_space(const std::vector<GridPoint>& pts) {
    const Coord m = static_cast<Coord>(pts.size());
    std::vector<Coord> seen;
    for (int a = 0; a < DIM; ++a) {
      seen.assign(static_cast<size_t>(m) + 1, 0);
      for (const auto& p : pts) {
        if (p[a] < 1 || p[a] > m || seen[static_cast<size_t>(p[a])]++)
          throw std::invalid_argument("slab tree input must be a rank-space permutation");
      }
    }
  }

  int pick_r(int32_t m) const {
    if (m <= 1) return 1;
    int r;
    if (!fixed_) {
      // occupancy-first: guarantees slab size <= floor(m^(1/2)) resp.
      // floor(m^(2/3)), which the error formula needs at every m
      const double target =
          DIM == 2 ? std::sqrt(static_cast<double>(m)) : std::pow(static_cast<double>(m), 2.0 / 3.0);
      r = static_cast<int>((m + static_cast<int64_t>(target) - 1) / static_cast<int64_t>(target));
    } else {
      const double e = (DIM == 2 ? 0.5 : 1.0 / 3.0) - eps_;
      r = static_cast<int>(std::ceil(std::pow(static_cast<double>(m), e) - 1e-9));
    }
    return std::clamp(r, 2, static_cast<int>(m));
  }

  bool is_base(int32_t m, int depth) const {
    if (m == 0) return true;
    if (!fixed_) return m <= base_size_;
    (void)depth;
    return false;  // fixed regime never stores point lists
  }

  void build_node(Node& node, const std::vector<GridPoint>& pts, int depth) const {
    node.m = static_cast<int32_t>(pts.size());
    if (!fixed_ && is_base(node.m, depth)) {
      node.leaf = true;
      node.pts = pts;
      return;
    }
    node.r = pick_r(node.m);
    build_corner_table(node, pts);

    const bool depth_allows = !fixed_ || depth < g_;
    if (!depth_allows) return;
    for (int a = 0; a < DIM; ++a) {
      node.kids[a].resize(static_cast<size_t>(node.r));
      std::vector<std::vector<GridPoint>> buckets(static_cast<size_t>(node.r));
      for (const auto& p : pts) buckets[static_cast<size_t>(node.slab_of(p[a]))].push_back(p);
      for (int s = 0; s < node.r; ++s) {
        auto& sub = buckets[static_cast<size_t>(s)];
        if (fixed_ && static_cast<double>(sub.size()) <= drop_threshold_ + 1e-9) continue;
        auto child = std::make_unique<Node>();
        localize(*child, sub, a, node.cut(s));
        build_node(*child, sub, depth + 1);
        node.kids[a][static_cast<size_t>(s)] = std::move(child);
      }
    }
  }

  // Rewrite `sub` into the child's rank space: the slab axis shifts down by
  // the cut, the other axes compress to ranks; the child records the sorted
  // parent coordinates per compressed axis for query translation.
  static void localize(Node& child, std::vector<GridPoint>& sub, int axis, Coord cut) {
    const size_t mc = sub.size();
    std::vector<std::pair<Coord, size_t>> order(mc);
    for (int b = 0; b < DIM; ++b) {
      if (b == axis) {
        for (auto& p : sub) p[b] = p[b] - cut;
        continue;
      }
      for (size_t i = 0; i < mc; ++i) order[i] = {sub[i][b], i};
      std::sort(order.begin(), order.end());
      auto& sn = child.snap[b];
      sn.resize(mc);
      for (size_t rk = 0; rk < mc; ++rk) {
        sn[rk] = order[rk].first;
        sub[order[rk].second][b] = static_cast<Coord>(rk + 1);
      }
    }
  }

  void build_corner_table(Node& node, const std::vector<GridPoint>& pts) const {
    const int w = node.r + 1;
    int64_t cells = 1;
    for (int a = 0; a < DIM; ++a) cells *= w;
    node.corner.assign(static_cast<size_t>(cells), 0);
    for (const auto& p : pts) {
      size_t idx = 0;
      for (int a = 0; a < DIM; ++a) idx = idx * static_cast<size_t>(w) + static_cast<size_t>(node.slab_of(p[a]));
      node.corner[idx] += 1;
    }
    // suffix-sum each axis so corner[(i,j,..)] counts points beyond cut i, j, ..
    size_t stride = 1;
    for (int a = DIM - 1; a >= 0; --a) {
      for (int i = node.r - 1; i >= 0; --i) {
        // walk all cells whose axis-a index == i
        const size_t block = stride * static_cast<size_t>(w);
        for (size_t hi = 0; hi < static_cast<size_t>(cells); hi += block) {
          for (size_t lo = 0; lo < stride; ++lo) {
            const size_t here = hi + static_cast<size_t>(i) * stride + lo;
            node.corner[here] += node.corner[here + stride];
          }
        }
      }
      stride *= static_cast<size_t>(w);
    }
  }

  int32_t corner_at(const Node& node, const std::array<int, DIM>& idx) const {
    const size_t w = static_cast<size_t>(node.r) + 1;
    size_t flat = 0;
    for (int a = 0; a < DIM; ++a) flat = flat * w + static_cast<size_t>(idx[static_cast<size_t>(a)]);
    return node.corner[flat];
  }

  static Coord snap_coord(const std::vector<Coord>& sorted_parent, Coord threshold) {
    return static_cast<Coord>(
        std::lower_bound(sorted_parent.begin(), sorted_parent.end(), threshold) -
        sorted_parent.begin() + 1);
  }

  Estimate query_node(const Node& node, GridPoint q, int v) const {
    for (int a = 0; a < DIM; ++a) {
      if (q[a] > node.m) return {0, 0};
      if (q[a] < 1) q[a] = 1;
    }
    if (node.leaf) {
      Count k = 0;
      for (const auto& p : node.pts)
        if (dominates(p, q, DIM)) ++k;
      return {k, 0};
    }

    std::array<int, DIM> slab{};
    bool on_vertex = true;
    for (int a = 0; a < DIM; ++a) {
      slab[static_cast<size_t>(a)] = node.slab_of(q[a]);
      if (q[a] != node.cut(slab[static_cast<size_t>(a)]) + 1) on_vertex = false;
    }
    if (on_vertex) return {corner_at(node, slab), 0};

    std::array<int, DIM> beyond{};
    for (int a = 0; a < DIM; ++a) beyond[static_cast<size_t>(a)] = slab[static_cast<size_t>(a)] + 1;
    Count est = corner_at(node, beyond);
    Count bnd = 0;

    const bool can_recurse = v > 0 && !node.kids[0].empty();
    if (!can_recurse) {
      for (int a = 0; a < DIM; ++a) bnd += node.occupancy(slab[static_cast<size_t>(a)]);
    } else {
      for (int a = 0; a < DIM; ++a) {
        const int s = slab[static_cast<size_t>(a)];
        const Node* child = node.kids[static_cast<size_t>(a)][static_cast<size_t>(s)].get();
        if (!child) {  // dropped slab (fixed regime): unknown part, full occupancy bound
          bnd += node.occupancy(s);
          continue;
        }
        GridPoint cq;
        for (int b = 0; b < DIM; ++b) {
          Coord threshold = b < a ? node.cut(slab[static_cast<size_t>(b)] + 1) + 1 : q[b];
          cq[b] = b == a ? q[b] - node.cut(s) : snap_coord(child->snap[b], threshold);
        }
        Estimate ce = query_node(*child, cq, v - 1);
        est += ce.estimate;
        bnd += ce.bound;
      }
    }
    return {est, std::min(bnd, static_cast<Count>(node.m) - est)};
  }

  void space_node(const Node& node, SpaceStats& s) const {
    s.nodes += 1;
    s.corner_entries += static_cast<int64_t>(node.corner.size());
    s.base_points += static_cast<int64_t>(node.pts.size());
    for (int a = 0; a < DIM; ++a) s.map_entries += static_cast<int64_t>(node.snap[a].size());
    for (int a = 0; a < DIM; ++a)
      for (const auto& k : node.kids[a])
        if (k) space_node(*k, s);
  }

  bool audit_node(const Node& node, const std::vector<GridPoint>& pts, int depth) const {
    if (node.m != static_cast<int32_t>(pts.size())) return false;
    if (node.leaf) {
      auto sorted_in = pts, sorted_here = node.pts;
      auto by_all = [](const GridPoint& a, const GridPoint& b) { return a.c < b.c; };
      std::sort(sorted_in.begin(), sorted_in.end(), by_all);
      std::sort(sorted_here.begin(), sorted_here.end(), by_all);
      return sorted_in == sorted_here;
    }
    // slab occupancies differ by at most one by construction; check bounds
    for (int s = 0; s < node.r; ++s) {
      const Coord occ = node.occupancy(s);
      if (occ < node.m / node.r || occ > (node.m + node.r - 1) / node.r) return false;
    }
    // every corner entry equals the brute-force dominator count at its vertex
    const int w = node.r + 1;
    std::array<int, DIM> idx{};
    for (size_t flat = 0; flat < node.corner.size(); ++flat) {
      size_t rest = flat;
      for (int a = DIM - 1; a >= 0; --a) {
        idx[static_cast<size_t>(a)] = static_cast<int>(rest % static_cast<size_t>(w));
        rest /= static_cast<size_t>(w);
      }
      GridPoint vertex;
      for (int a = 0; a < DIM; ++a) vertex[a] = node.cut(idx[static_cast<size_t>(a)]) + 1;
      Count want = 0;
      for (const auto& p : pts)
        if (dominates(p, vertex, DIM)) ++want;
      if (node.corner[flat] != want) return false;
    }
    // children: rebuild the localization and compare maps, then recurse
    for (int a = 0; a < DIM; ++a) {
      if (node.kids[static_cast<size_t>(a)].empty()) continue;
      std::vector<std::vector<GridPoint>> buckets(static_cast<size_t>(node.r));
      for (const auto& p : pts) buckets[static_cast<size_t>(node.slab_of(p[a]))].push_back(p);
      for (int s = 0; s < node.r; ++s) {
        const Node* child = node.kids[static_cast<size_t>(a)][static_cast<size_t>(s)].get();
        auto& sub = buckets[static_cast<size_t>(s)];
        if (!child) {
          if (!fixed_ || static_cast<double>(sub.size()) > drop_threshold_ + 1e-9) return false;
          continue;
        }
        Node probe;
        localize(probe, sub, a, node.cut(s));
        for (int b = 0; b < DIM; ++b)
          if (probe.snap[b] != child->snap[b]) return false;
        if (!audit_node(*child, sub, depth + 1)) return false;
      }
    }
    return true;
  }

  std::unique_ptr<Node> root_;
  Count m_ = 0;
  bool fixed_ = false;
  int base_size_ = 16;
  double eps_ = 0.1;
  double f_ = 0.0;
  int g_ = 0;
  double drop_threshold_ = 0.0;
};

using SlabTree2 = SlabTree<2>;
using SlabTree3 = SlabTree<3>;

}  // namespace arc

#endif

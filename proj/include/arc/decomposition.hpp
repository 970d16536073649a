#ifndef ARC_DECOMPOSITION_HPP
#define ARC_DECOMPOSITION_HPP

// Lifts one-orientation dominance counters to general orthogonal range
// counting. A balanced hierarchy on x splits any query interval at its LCA
// into two one-sided pieces; a nested hierarchy on y (and on z in 3-D) does
// the same inside each node, so a closed rectangle decomposes into at most
// 2^d dominance quadrants over canonical subsets. Every canonical subset
// carries one structure per orientation, built by a caller-supplied factory
// from a rank-reduced reflected copy of the subset; piece estimates add up
// and so do their error bounds. Subsets smaller than eight points are
// scanned directly instead of carrying structures.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arc/dominance2d.hpp"
#include "arc/grid.hpp"
#include "arc/level3d.hpp"
#include "arc/slab_tree.hpp"

namespace arc {

struct DecompositionSpace {
  int64_t replicated_points = 0;  // points stored across all hierarchy arrays
  int64_t canonical_points = 0;   // sum of |P_i| over structure-equipped subsets
  int64_t oriented_points = 0;    // canonical points times their orientations
  int64_t structures = 0;
  int64_t nodes = 0;
};

template <typename Factory>
class DecompositionTree {
 public:
  using Structure =
      std::decay_t<decltype(std::declval<const Factory&>()(std::declval<const PointSet&>()))>;

  static DecompositionTree build(const PointSet& s, Factory factory) {
    if (s.dim != 2 && s.dim != 3)
      throw std::invalid_argument("DecompositionTree: dimension must be 2 or 3");
    DecompositionTree t;
    t.dim_ = s.dim;
    t.n_ = s.n;
    t.factory_ = std::move(factory);
    t.root_ = t.build_tree(s.pts, 0);
    return t;
  }

  struct Detail {
    Estimate est;
    int pieces = 0;  // dominance quadrants and leaf scans actually evaluated
  };

  Detail query_detail(const QueryRect& r, double rho) const {
    if (r.dim != dim_)
      throw std::invalid_argument("query_general: rectangle dimension mismatch");
    Detail d;
    if (r.empty()) return d;
    query_axis(*root_, r, rho, GridPoint(1, 1, 1), 0, d);
    return d;
  }

  Estimate query(const QueryRect& r, double rho) const { return query_detail(r, rho).est; }

  int dim() const { return dim_; }

  using Space = DecompositionSpace;

  Space space() const {
    Space sp;
    if (root_) accumulate(*root_, sp);
    return sp;
  }

 private:
  static constexpr size_t kScanCutoff = 8;  // subsets below this are scanned

  struct AxisTree;

  struct Canonical {
    struct Oriented {
      std::array<std::vector<Coord>, 3> sorted;  // reflected coords per axis
      Structure st;
    };
    std::vector<Oriented> orient;  // 2^d entries; bit a set = axis a reflected
  };

  struct Node {
    size_t lo = 0, hi = 0;  // index range in the owning tree's pts
    int left = -1, right = -1;
    std::unique_ptr<AxisTree> sub;    // next-axis hierarchy (inner axes only)
    std::unique_ptr<Canonical> canon;  // dominance structures (last axis only)
  };

  struct AxisTree {
    int axis = 0;
    std::vector<GridPoint> pts;  // sorted by `axis`
    std::vector<Node> nodes;     // nodes[0] is the root
  };

  std::unique_ptr<AxisTree> build_tree(std::vector<GridPoint> pts, int axis) {
    auto tr = std::make_unique<AxisTree>();
    tr->axis = axis;
    std::stable_sort(pts.begin(), pts.end(),
                     [axis](const GridPoint& a, const GridPoint& b) { return a[axis] < b[axis]; });
    tr->pts = std::move(pts);
    build_node(*tr, 0, tr->pts.size(), true);
    return tr;
  }

  int build_node(AxisTree& tr, size_t lo, size_t hi, bool is_root) {
    const int idx = static_cast<int>(tr.nodes.size());
    tr.nodes.push_back({});
    tr.nodes[static_cast<size_t>(idx)].lo = lo;
    tr.nodes[static_cast<size_t>(idx)].hi = hi;
    if (hi - lo < kScanCutoff) return idx;  // leaf: queried by direct scan
    const size_t mid = lo + (hi - lo) / 2;
    const int l = build_node(tr, lo, mid, false);
    const int r = build_node(tr, mid, hi, false);
    Node& nd = tr.nodes[static_cast<size_t>(idx)];
    nd.left = l;
    nd.right = r;
    if (is_root) return idx;  // the root is never a piece of any query
    std::vector<GridPoint> subset(tr.pts.begin() + static_cast<ptrdiff_t>(lo),
                                  tr.pts.begin() + static_cast<ptrdiff_t>(hi));
    if (tr.axis + 1 < dim_)
      nd.sub = build_tree(std::move(subset), tr.axis + 1);
    else
      nd.canon = build_canonical(subset);
    return idx;
  }

  std::unique_ptr<Canonical> build_canonical(const std::vector<GridPoint>& subset) {
    auto c = std::make_unique<Canonical>();
    c->orient.reserve(size_t{1} << dim_);
    for (int mask = 0; mask < (1 << dim_); ++mask) {
      typename Canonical::Oriented o;
      RawPointSet raw;
      raw.dim = dim_;
      raw.pts.reserve(subset.size());
      for (const auto& p : subset) {
        RawPoint rp;
        for (int a = 0; a < dim_; ++a)
          rp[a] = (mask >> a & 1) ? static_cast<Raw>(n_) + 1 - p[a] : static_cast<Raw>(p[a]);
        raw.pts.push_back(rp);
      }
      for (int a = 0; a < dim_; ++a) {
        auto& v = o.sorted[static_cast<size_t>(a)];
        v.reserve(raw.pts.size());
        for (const auto& rp : raw.pts) v.push_back(static_cast<Coord>(rp[a]));
        std::sort(v.begin(), v.end());
      }
      o.st = factory_(reduce_to_rank_space(raw).set);
      c->orient.push_back(std::move(o));
    }
    return c;
  }

  void query_axis(const AxisTree& tr, const QueryRect& r, double rho, GridPoint corner,
                  int mask, Detail& d) const {
    const int axis = tr.axis;
    const auto first = std::partition_point(
        tr.pts.begin(), tr.pts.end(),
        [&](const GridPoint& p) { return p[axis] < r.lo[axis]; });
    const auto last = std::partition_point(
        first, tr.pts.end(), [&](const GridPoint& p) { return p[axis] <= r.hi[axis]; });
    size_t i1 = static_cast<size_t>(first - tr.pts.begin());
    size_t i2 = static_cast<size_t>(last - tr.pts.begin());
    if (i1 >= i2) return;  // no point in range: exactly zero, no pieces
    int u = 0;
    while (true) {
      const Node& nd = tr.nodes[static_cast<size_t>(u)];
      if (nd.left < 0) {
        scan_piece(tr, nd, r, d);
        return;
      }
      const size_t mid = tr.nodes[static_cast<size_t>(nd.left)].hi;
      if (i2 <= mid)
        u = nd.left;
      else if (i1 >= mid)
        u = nd.right;
      else
        break;  // the interval splits here
    }
    const Node& lca = tr.nodes[static_cast<size_t>(u)];
    GridPoint cl = corner;
    cl[axis] = r.lo[axis];  // left child keeps the lower bound on this axis
    enter_child(tr, tr.nodes[static_cast<size_t>(lca.left)], r, rho, cl, mask, d);
    GridPoint cr = corner;
    cr[axis] = r.hi[axis];  // right child keeps the upper bound, reflected
    enter_child(tr, tr.nodes[static_cast<size_t>(lca.right)], r, rho, cr, mask | (1 << axis), d);
  }

  void enter_child(const AxisTree& tr, const Node& child, const QueryRect& r, double rho,
                   GridPoint corner, int mask, Detail& d) const {
    if (child.left < 0) {
      scan_piece(tr, child, r, d);
      return;
    }
    if (tr.axis + 1 < dim_) {
      query_axis(*child.sub, r, rho, corner, mask, d);
      return;
    }
    eval_canonical(*child.canon, corner, mask, rho, d);
  }

  void scan_piece(const AxisTree& tr, const Node& nd, const QueryRect& r, Detail& d) const {
    ++d.pieces;
    Count k = 0;
    for (size_t i = nd.lo; i < nd.hi; ++i)
      if (r.contains(tr.pts[i])) ++k;
    d.est.estimate += k;
  }

  void eval_canonical(const Canonical& c, GridPoint corner, int mask, double rho,
                      Detail& d) const {
    ++d.pieces;
    const auto& o = c.orient[static_cast<size_t>(mask)];
    const size_t m = o.sorted[0].size();
    GridPoint q(1, 1, 1);
    for (int a = 0; a < dim_; ++a) {
      const Coord qa = (mask >> a & 1) ? static_cast<Coord>(n_ + 1 - corner[a]) : corner[a];
      const auto& v = o.sorted[static_cast<size_t>(a)];
      const size_t rank =
          static_cast<size_t>(std::lower_bound(v.begin(), v.end(), qa) - v.begin()) + 1;
      if (rank > m) return;  // no subset point passes this axis: exactly zero
      q[a] = static_cast<Coord>(rank);
    }
    const Estimate e = o.st.count(q, rho);
    d.est.estimate += e.estimate;
    d.est.bound += e.bound;
  }

  void accumulate(const AxisTree& tr, Space& sp) const {
    sp.replicated_points += static_cast<int64_t>(tr.pts.size());
    sp.nodes += static_cast<int64_t>(tr.nodes.size());
    for (const auto& nd : tr.nodes) {
      if (nd.sub) accumulate(*nd.sub, sp);
      if (nd.canon) {
        sp.canonical_points += static_cast<int64_t>(nd.hi - nd.lo);
        sp.oriented_points +=
            static_cast<int64_t>(nd.hi - nd.lo) * static_cast<int64_t>(nd.canon->orient.size());
        sp.structures += static_cast<int64_t>(nd.canon->orient.size());
      }
    }
  }

  int dim_ = 2;
  Coord n_ = 0;
  Factory factory_{};
  std::unique_ptr<AxisTree> root_;
};

template <typename Factory>
DecompositionTree<Factory> build_general(const PointSet& s, Factory factory) {
  return DecompositionTree<Factory>::build(s, std::move(factory));
}

template <typename Factory>
Estimate query_general(const DecompositionTree<Factory>& t, const QueryRect& r, double rho) {
  return t.query(r, rho);
}

// Canonical-subset counters the factories below hand to the decomposition.
// All count dominators: approximately |{p in subset : p >= q}| over the
// subset's rank space.

struct ExactCounter {
  int dim = 2;
  std::vector<GridPoint> pts;

  Estimate count(const GridPoint& q, double) const {
    Count k = 0;
    for (const auto& p : pts)
      if (dominates(p, q, dim)) ++k;
    return {k, 0};
  }
};

struct ExactFactory {
  ExactCounter operator()(const PointSet& s) const { return {s.dim, s.pts}; }
};

struct Dominance2DCounter {
  Dominance2D d;
  Estimate count(const GridPoint& q, double rho) const { return d.count(q, rho); }
};

struct Dominance2DFactory {
  Regime regime = Adaptive{};
  Dominance2DCounter operator()(const PointSet& s) const {
    return {Dominance2D::build(s, regime)};
  }
};

// The 3-D structure natively counts points dominated by q, so the factory
// feeds it the subset reflected through its own grid and flips queries.
struct LevelSet3DCounter {
  LevelSet3D ls;
  Coord m = 0;

  Estimate count(const GridPoint& q, double rho) const {
    return ls.count3(GridPoint(m + 1 - q.x(), m + 1 - q.y(), m + 1 - q.z()), rho);
  }
};

struct LevelSet3DFactory {
  Regime regime = Adaptive{};
  LevelSet3DCounter operator()(const PointSet& s) const {
    Orientation o;
    o.flip = {true, true, true};
    return {LevelSet3D::build(reflect(s, o), regime), s.n};
  }
};

}  // namespace arc

#endif

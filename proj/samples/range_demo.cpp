// End-to-end tour of the range-counting structures: generate a point set,
// reduce it to rank space, and compare approximate counts against the
// brute-force oracle at a few accuracy settings.

#include <cmath>
#include <cstdint>
#include <iostream>

#include "arc/datagen.hpp"
#include "arc/decomposition.hpp"
#include "arc/dominance2d.hpp"
#include "arc/exponential_tree.hpp"
#include "arc/grid.hpp"
#include "arc/oracle.hpp"
#include "arc/slab_tree.hpp"

using namespace arc;

int main() {
  const Coord n = 2000;
  const RawPointSet raw = gen_uniform(2, n, 42);
  const PointSet pts = reduce_to_rank_space(raw).set;

  // dominance counting on a slab tree: deeper recursion, tighter bound
  const auto tree = SlabTree2::build(pts.pts, Adaptive{});
  const GridPoint q(n / 3, n / 4);
  const Count k_dom = dominators(pts, q);
  std::cout << "dominance query at (" << q.x() << "," << q.y() << "), exact k=" << k_dom
            << "\n";
  for (int v = 0; v <= 4; ++v) {
    const Estimate e = tree.query(q, v);
    std::cout << "  depth " << v << ": estimate=" << e.estimate << " bound=" << e.bound
              << "\n";
  }

  // composed planar counter: constant-factor brackets and additive error k^rho
  const auto dom = Dominance2D::build(pts);
  const auto [lo, hi] = dom.count_constant_factor(q);
  std::cout << "constant-factor bracket: [" << lo << ", " << hi << "]\n";
  for (double rho : {0.3, 0.5, 0.8}) {
    const Estimate e = dom.count(q, rho);
    std::cout << "  rho=" << rho << ": estimate=" << e.estimate << " bound=" << e.bound
              << " (k^rho=" << std::pow(static_cast<double>(k_dom), rho) << ")\n";
  }

  // general axis-aligned rectangles via the dominance decomposition
  const auto rect_tree = build_general(pts, Dominance2DFactory{});
  QueryRect r;
  r.dim = 2;
  r.lo = GridPoint(n / 8, n / 8);
  r.hi = GridPoint(n / 2, (3 * n) / 4);
  const auto det = rect_tree.query_detail(r, 0.5);
  std::cout << "rectangle [" << r.lo.x() << "," << r.hi.x() << "]x[" << r.lo.y() << ","
            << r.hi.y() << "]: exact k=" << exact_count(pts, r)
            << " estimate=" << det.est.estimate << " bound=" << det.est.bound
            << " pieces=" << det.pieces << "\n";

  // dynamic 1-d counting: insertions interleaved with interval queries
  ExponentialTree dyn(2.0, 1000);
  SplitMix64 rng(7);
  for (int i = 0; i < 1000; ++i) dyn.insert(static_cast<Raw>(rng.below(1000000)));
  Raw a = 250000, b = 750000;
  const ExponentialTree::CountInfo info = dyn.count_info(a, b);
  std::cout << "dynamic interval [" << a << "," << b << "]: count=" << info.count
            << (info.exact ? " (exact)" : " (approximate)")
            << ", error tolerance k^(1/2)\n";
  return 0;
}

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "arc/datagen.hpp"
#include "arc/grid.hpp"
#include "arc/level3d.hpp"
#include "arc/oracle.hpp"

using arc::Coord;
using arc::Count;
using arc::GridPoint;
using arc::PointSet;

namespace {

PointSet random_permutation(Coord n, uint64_t seed) {
  auto raw = arc::gen_permutation_grid(3, n, seed);
  return arc::reduce_to_rank_space(raw).set;
}

GridPoint random_query(arc::SplitMix64& rng, Coord n) {
  return GridPoint(static_cast<Coord>(rng.next() % static_cast<uint64_t>(n)) + 1,
                   static_cast<Coord>(rng.next() % static_cast<uint64_t>(n)) + 1,
                   static_cast<Coord>(rng.next() % static_cast<uint64_t>(n)) + 1);
}

bool by_xyz(const GridPoint& a, const GridPoint& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

// dominated-count over the whole cube, as a plain prefix-sum grid
struct CountGrid {
  Coord n = 0;
  std::vector<int32_t> c;

  explicit CountGrid(const PointSet& s) : n(s.n) {
    const size_t side = static_cast<size_t>(n) + 1;
    c.assign(side * side * side, 0);
    for (const auto& p : s.pts) ++at(p.x(), p.y(), p.z());
    for (Coord x = 1; x <= n; ++x)
      for (Coord y = 0; y <= n; ++y)
        for (Coord z = 0; z <= n; ++z) at(x, y, z) += at(x - 1, y, z);
    for (Coord x = 0; x <= n; ++x)
      for (Coord y = 1; y <= n; ++y)
        for (Coord z = 0; z <= n; ++z) at(x, y, z) += at(x, y - 1, z);
    for (Coord x = 0; x <= n; ++x)
      for (Coord y = 0; y <= n; ++y)
        for (Coord z = 1; z <= n; ++z) at(x, y, z) += at(x, y, z - 1);
  }

  int32_t& at(Coord x, Coord y, Coord z) {
    const size_t side = static_cast<size_t>(n) + 1;
    return c[(static_cast<size_t>(x) * side + static_cast<size_t>(y)) * side +
             static_cast<size_t>(z)];
  }
  int32_t get(Coord x, Coord y, Coord z) const {
    const size_t side = static_cast<size_t>(n) + 1;
    return c[(static_cast<size_t>(x) * side + static_cast<size_t>(y)) * side +
             static_cast<size_t>(z)];
  }
};

// every in-grid position with count <= cap whose axis successors all exceed it
std::vector<GridPoint> brute_maximal(const CountGrid& g, int64_t cap) {
  std::vector<GridPoint> out;
  for (Coord x = 1; x <= g.n; ++x)
    for (Coord y = 1; y <= g.n; ++y)
      for (Coord z = 1; z <= g.n; ++z) {
        if (g.get(x, y, z) > cap) continue;
        if (x < g.n && g.get(x + 1, y, z) <= cap) continue;
        if (y < g.n && g.get(x, y + 1, z) <= cap) continue;
        if (z < g.n && g.get(x, y, z + 1) <= cap) continue;
        out.push_back(GridPoint(x, y, z));
      }
  std::sort(out.begin(), out.end(), by_xyz);
  return out;
}

// does any grid position have count <= t yet no surviving apex above it?
bool coverage_broken(const CountGrid& g, const std::vector<GridPoint>& apexes, int64_t t) {
  const Coord n = g.n;
  const size_t side = static_cast<size_t>(n) + 1;
  std::vector<char> cov(side * side * side, 0);
  auto id = [&](Coord x, Coord y, Coord z) {
    return (static_cast<size_t>(x) * side + static_cast<size_t>(y)) * side +
           static_cast<size_t>(z);
  };
  for (const auto& a : apexes) cov[id(a.x(), a.y(), a.z())] = 1;
  for (Coord x = n; x >= 1; --x)
    for (Coord y = n; y >= 1; --y)
      for (Coord z = n; z >= 1; --z) {
        char v = cov[id(x, y, z)];
        if (x < n) v |= cov[id(x + 1, y, z)];
        if (y < n) v |= cov[id(x, y + 1, z)];
        if (z < n) v |= cov[id(x, y, z + 1)];
        cov[id(x, y, z)] = v;
      }
  for (Coord x = 1; x <= n; ++x)
    for (Coord y = 1; y <= n; ++y)
      for (Coord z = 1; z <= n; ++z)
        if (g.get(x, y, z) <= t && !cov[id(x, y, z)]) return true;
  return false;
}

}  // namespace

TEST_CASE("level3d: hand-built instances") {
  SECTION("single point") {
    PointSet s;
    s.dim = 3;
    s.n = 1;
    s.pts = {GridPoint(1, 1, 1)};
    auto l = arc::build_level(s, 1);
    REQUIRE(l.apexes == std::vector<GridPoint>{GridPoint(1, 1, 1)});
    REQUIRE(arc::dominated_by_level(l, GridPoint(1, 1, 1)).has_value());
    REQUIRE(arc::verify_level(s, l, 1, 2));
  }
  SECTION("threshold at least n collapses to the far corner") {
    PointSet s = random_permutation(16, 7);
    auto l = arc::build_level(s, 16);
    REQUIRE(l.apexes == std::vector<GridPoint>{GridPoint(16, 16, 16)});
    REQUIRE(arc::verify_level(s, l, 16, 2));
  }
  SECTION("empty set still covers the grid") {
    PointSet s;
    s.dim = 3;
    s.n = 8;
    auto l = arc::build_level(s, 1);
    REQUIRE(l.apexes == std::vector<GridPoint>{GridPoint(8, 8, 8)});
    REQUIRE(arc::verify_level(s, l, 1, 2));
  }
  SECTION("bad arguments throw") {
    PointSet s2;
    s2.dim = 2;
    s2.n = 4;
    REQUIRE_THROWS_AS(arc::build_level(s2, 1), std::invalid_argument);
    PointSet s3 = random_permutation(4, 1);
    REQUIRE_THROWS_AS(arc::build_level(s3, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(arc::build_level(s3, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("level3d: built levels are valid and sparser than the full corner set") {
  for (Coord n : {16, 48}) {
    PointSet s = random_permutation(n, 0x3d00 + static_cast<uint64_t>(n));
    CountGrid g(s);
    for (int64_t t : {1, 2, 5}) {
      auto l = arc::build_level(s, t);
      REQUIRE(arc::verify_level_exhaustive(s, l, t, 2));
      REQUIRE(!l.apexes.empty());
      // every maximal position of the capped region would also be a valid
      // apex set; the cover-driven sweep must never need more than that
      REQUIRE(l.apexes.size() <= brute_maximal(g, 2 * t).size());
    }
  }
}

TEST_CASE("level3d: verifier accepts built levels and rejects mismatches") {
  PointSet s = random_permutation(64, 0x9e11);
  for (int64_t t : {1, 2, 8, 64}) {
    auto l = arc::build_level(s, t);
    REQUIRE(arc::verify_level_exhaustive(s, l, t, 2));
    REQUIRE(arc::verify_level_structured(s, l, t, 2));
    REQUIRE_FALSE(arc::verify_level(s, l, t + 1, 2));
    REQUIRE_FALSE(arc::verify_level(s, l, t, 3));
  }
}

TEST_CASE("level3d: both verifier modes agree on corrupted levels") {
  PointSet s = random_permutation(96, 0xc0de);
  arc::SplitMix64 rng(0xfeed);
  int rejections = 0;
  for (int64_t t : {1, 4}) {
    auto base = arc::build_level(s, t);
    REQUIRE(!base.apexes.empty());
    for (int trial = 0; trial < 12; ++trial) {
      auto mut = base;
      const size_t pick = rng.next() % mut.apexes.size();
      switch (trial % 4) {
        case 0:
          mut.apexes.erase(mut.apexes.begin() + static_cast<ptrdiff_t>(pick));
          break;
        case 1:
          mut.apexes[pick][0] = std::min<Coord>(s.n, mut.apexes[pick][0] + 1);
          break;
        case 2:
          mut.apexes[pick][2] = s.n;
          break;
        case 3:
          mut.apexes.push_back(GridPoint(1, 1, 1));
          break;
      }
      mut.build_index();
      const bool exh = arc::verify_level_exhaustive(s, mut, t, 2);
      const bool str = arc::verify_level_structured(s, mut, t, 2);
      REQUIRE(exh == str);
      if (!exh) ++rejections;
    }
  }
  REQUIRE(rejections > 0);
}

TEST_CASE("level3d: apex deletions that break coverage are always caught") {
  PointSet s = random_permutation(64, 0xabcd);
  const int64_t t = 2;
  auto base = arc::build_level(s, t);
  CountGrid g(s);
  arc::SplitMix64 rng(0x5eed);
  int caught = 0;
  for (int trial = 0; trial < 10; ++trial) {
    // hunt from a random start for a deletion that genuinely breaks coverage
    const size_t start = rng.next() % base.apexes.size();
    std::optional<size_t> victim;
    for (size_t off = 0; off < base.apexes.size(); ++off) {
      const size_t i = (start + off) % base.apexes.size();
      auto rest = base.apexes;
      rest.erase(rest.begin() + static_cast<ptrdiff_t>(i));
      if (coverage_broken(g, rest, t)) {
        victim = i;
        break;
      }
    }
    REQUIRE(victim.has_value());
    auto mut = base;
    mut.apexes.erase(mut.apexes.begin() + static_cast<ptrdiff_t>(*victim));
    mut.build_index();
    REQUIRE_FALSE(arc::verify_level_exhaustive(s, mut, t, 2));
    REQUIRE_FALSE(arc::verify_level_structured(s, mut, t, 2));
    ++caught;
  }
  REQUIRE(caught == 10);
}

TEST_CASE("level3d: membership index equals a naive scan") {
  PointSet s = random_permutation(256, 0x111e);
  auto l = arc::build_level(s, 8);
  arc::SplitMix64 rng(0x777);
  for (int i = 0; i < 1000; ++i) {
    const GridPoint q = random_query(rng, s.n);
    bool naive = false;
    for (const auto& a : l.apexes)
      if (arc::dominates(a, q, 3)) {
        naive = true;
        break;
      }
    auto hit = arc::dominated_by_level(l, q);
    REQUIRE(hit.has_value() == naive);
    if (hit) REQUIRE(arc::dominates(*hit, q, 3));
  }
}

TEST_CASE("level3d: counting structure is sound") {
  PointSet s = random_permutation(256, 0x3d3d);
  auto ls = arc::LevelSet3D::build(s);
  arc::SplitMix64 rng(0x1234);

  SECTION("coverage is nested across levels") {
    for (int i = 0; i < 300; ++i) {
      const GridPoint q = random_query(rng, s.n);
      bool prev = false;
      for (int j = 0; j < ls.levels(); ++j) {
        const bool cov = ls.level(j).find_dominating(q).has_value();
        if (prev) REQUIRE(cov);
        prev = cov;
      }
      REQUIRE(prev);  // top level always covers
    }
  }

  SECTION("estimates honor the bound and the level sandwich") {
    for (double rho : {0.3, 0.5, 0.8}) {
      for (int i = 0; i < 1000; ++i) {
        const GridPoint q = random_query(rng, s.n);
        const Count k = arc::dominated_count(s, q);
        const auto det = ls.count3_detail(q, rho);
        REQUIRE_FALSE(det.global);
        REQUIRE(std::llabs(det.est.estimate - k) <= det.est.bound);
        if (k == 0) {
          REQUIRE(det.est.estimate == 0);
          REQUIRE(det.est.bound == 0);
          REQUIRE(det.scanned);
        }
        if (det.level == 0) {
          REQUIRE(k <= 2);
          REQUIRE(det.est.bound == 0);
          REQUIRE(det.est.estimate == k);
        } else {
          REQUIRE(k > (Count{1} << (det.level - 1)));
          REQUIRE(k <= (Count{1} << (det.level + 1)));
          REQUIRE(det.d_size <= (Count{1} << (det.level + 1)));
        }
      }
    }
  }

  SECTION("invalid rho rejected in the adaptive regime") {
    REQUIRE_THROWS_AS(ls.count3(GridPoint(1, 1, 1), 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(ls.count3(GridPoint(1, 1, 1), 1.0), std::invalid_argument);
  }

  SECTION("space accounting") {
    const auto sp = ls.space();
    REQUIRE(sp.apexes_per_level.size() == static_cast<size_t>(ls.levels()));
    REQUIRE(sp.stored_points >= static_cast<int64_t>(s.pts.size()));
    INFO("stored_points=" << sp.stored_points << " map_entries=" << sp.map_entries
                          << " corner_entries=" << sp.tree_stats.corner_entries);
    for (size_t j = 0; j < sp.apexes_per_level.size(); ++j)
      INFO("level " << j << ": " << sp.apexes_per_level[j] << " apexes");
    REQUIRE(sp.tree_stats.nodes > 0);
  }
}

TEST_CASE("level3d: structure audit") {
  PointSet s = random_permutation(128, 0xa0d1);
  auto ls = arc::LevelSet3D::build(s);
  REQUIRE(ls.audit(s));
}

TEST_CASE("level3d: fixed-error regime") {
  PointSet s = random_permutation(128, 0xf1f1);
  auto ls = arc::LevelSet3D::build(s, arc::FixedError{0.5, 0.1});
  arc::SplitMix64 rng(0x9a9a);
  for (int i = 0; i < 800; ++i) {
    const GridPoint q = random_query(rng, s.n);
    const Count k = arc::dominated_count(s, q);
    const auto est = ls.count3(q, 0.5);
    REQUIRE(std::llabs(est.estimate - k) <= est.bound);
    if (k == 0) {
      REQUIRE(est.estimate == 0);
      REQUIRE(est.bound == 0);
    }
  }
}

TEST_CASE("level3d: empty and tiny sets") {
  PointSet s;
  s.dim = 3;
  s.n = 4;
  auto ls = arc::LevelSet3D::build(s);
  const auto det = ls.count3_detail(GridPoint(3, 3, 3), 0.5);
  REQUIRE(det.est == arc::Estimate{0, 0});
  REQUIRE(det.level == -1);

  PointSet one;
  one.dim = 3;
  one.n = 1;
  one.pts = {GridPoint(1, 1, 1)};
  auto ls1 = arc::LevelSet3D::build(one);
  REQUIRE(arc::count3(ls1, GridPoint(1, 1, 1), 0.5) == arc::Estimate{1, 0});
  REQUIRE(ls1.audit(one));
}

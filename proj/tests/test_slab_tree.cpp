#include <catch2/catch_amalgamated.hpp>

#include "arc/datagen.hpp"
#include "arc/grid.hpp"
#include "arc/oracle.hpp"
#include "arc/slab_tree.hpp"

using namespace arc;

namespace {

PointSet make_set(int dim, Coord n, uint64_t seed) {
  return reduce_to_rank_space(gen_uniform(dim, n, seed)).set;
}

GridPoint random_query(SplitMix64& rng, Coord n, int dim) {
  GridPoint q;
  for (int a = 0; a < dim; ++a) q[a] = static_cast<Coord>(rng.below(static_cast<uint64_t>(n) + 2));
  return q;
}

}  // namespace

TEST_CASE("tiny input stays a single verbatim base node") {
  auto s = make_set(2, 4, 1);
  auto t = SlabTree2::build(s.pts);
  auto st = t.space();
  REQUIRE(st.nodes == 1);
  REQUIRE(st.base_points == 4);
  REQUIRE(st.corner_entries == 0);
  SplitMix64 rng(2);
  for (int i = 0; i < 100; ++i) {
    auto q = random_query(rng, 4, 2);
    auto e = t.query(q, 0);
    REQUIRE(e.bound == 0);
    REQUIRE(e.estimate == dominators(s, q));
  }
}

TEST_CASE("depth mapping from rho and parameter validation") {
  REQUIRE(depth_for_rho_2d(0.25) == 4);
  REQUIRE(depth_for_rho_2d(0.5) == 3);
  REQUIRE(depth_for_rho_3d(0.125) == 8);
  REQUIRE_THROWS_AS(depth_for_rho_2d(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(depth_for_rho_2d(1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(depth_for_rho_3d(-0.5), std::invalid_argument);
}

TEST_CASE("fixed-error parameters follow the quarter and sixteenth rules") {
  auto s2 = make_set(2, 64, 3);
  auto t2 = SlabTree2::build(s2.pts, FixedError{0.5, 0.1});
  REQUIRE(t2.f() == 0.125);
  REQUIRE(t2.g() == 5);

  auto s3 = make_set(3, 64, 4);
  auto t3 = SlabTree3::build(s3.pts, FixedError{0.5, 0.1});
  REQUIRE(t3.f() == 0.03125);
  REQUIRE(t3.g() == 14);

  REQUIRE_THROWS_AS(SlabTree2::build(s2.pts, FixedError{1.5, 0.1}), std::invalid_argument);
  REQUIRE_THROWS_AS(SlabTree2::build(s2.pts, FixedError{0.5, 0.7}), std::invalid_argument);
  REQUIRE_THROWS_AS(SlabTree3::build(s3.pts, FixedError{0.5, 0.4}), std::invalid_argument);
}

TEST_CASE("builders reject inputs that are not rank-space permutations") {
  std::vector<GridPoint> bad = {{1, 1}, {1, 2}};  // duplicate x rank
  REQUIRE_THROWS_AS(SlabTree2::build(bad), std::invalid_argument);
  std::vector<GridPoint> out_of_range = {{1, 1}, {5, 2}};
  REQUIRE_THROWS_AS(SlabTree2::build(out_of_range), std::invalid_argument);
}

TEST_CASE("empty set builds and answers zero") {
  auto t = SlabTree2::build({});
  REQUIRE(t.query(GridPoint{1, 1}, 3).estimate == 0);
  REQUIRE(t.query(GridPoint{1, 1}, 3).bound == 0);
  auto tf = SlabTree3::build({}, FixedError{0.5, 0.1});
  REQUIRE(tf.query(GridPoint{1, 1, 1}, 0).estimate == 0);
}

TEST_CASE("full structural audit against brute force") {
  for (Coord n : {33, 256, 1000}) {
    auto s = make_set(2, n, 100 + static_cast<uint64_t>(n));
    auto t = SlabTree2::build(s.pts);
    REQUIRE(t.audit(s.pts));
  }
  auto s3 = make_set(3, 300, 7);
  auto t3 = SlabTree3::build(s3.pts);
  REQUIRE(t3.audit(s3.pts));
  auto tf = SlabTree2::build(make_set(2, 500, 8).pts, FixedError{0.5, 0.1});
  REQUIRE(tf.audit(make_set(2, 500, 8).pts));
}

TEST_CASE("2-d estimates undercount, stay within bounds, and the bound obeys the formula") {
  for (Coord n : {100, 529, 1024}) {
    auto s = make_set(2, n, 200 + static_cast<uint64_t>(n));
    auto t = SlabTree2::build(s.pts);
    SplitMix64 rng(300 + static_cast<uint64_t>(n));
    for (int i = 0; i < 200; ++i) {
      auto q = random_query(rng, n, 2);
      const Count exact = dominators(s, q);
      for (int v = 0; v <= 6; ++v) {
        auto e = t.query(q, v);
        REQUIRE(e.estimate <= exact);
        REQUIRE(exact - e.estimate <= e.bound);
        REQUIRE(static_cast<double>(e.bound) <= formula_bound_2d(n, v) + 1e-9);
      }
    }
  }
}

TEST_CASE("3-d estimates stay within bounds and the bound obeys the formula") {
  for (Coord n : {100, 512}) {
    auto s = make_set(3, n, 400 + static_cast<uint64_t>(n));
    auto t = SlabTree3::build(s.pts);
    SplitMix64 rng(500 + static_cast<uint64_t>(n));
    for (int i = 0; i < 150; ++i) {
      auto q = random_query(rng, n, 3);
      const Count exact = dominators(s, q);
      for (int v = 0; v <= 4; ++v) {
        auto e = t.query(q, v);
        REQUIRE(e.estimate <= exact);
        REQUIRE(exact - e.estimate <= e.bound);
        REQUIRE(static_cast<double>(e.bound) <= formula_bound_3d(n, v) + 1e-9);
      }
    }
  }
}

TEST_CASE("returned bound never grows as the query deepens") {
  auto s = make_set(2, 777, 9);
  auto t = SlabTree2::build(s.pts);
  auto s3 = make_set(3, 333, 10);
  auto t3 = SlabTree3::build(s3.pts);
  SplitMix64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto q = random_query(rng, 777, 2);
    Count prev = t.query(q, 0).bound;
    for (int v = 1; v <= 7; ++v) {
      Count cur = t.query(q, v).bound;
      REQUIRE(cur <= prev);
      prev = cur;
    }
    auto q3 = random_query(rng, 333, 3);
    Count prev3 = t3.query(q3, 0).bound;
    for (int v = 1; v <= 5; ++v) {
      Count cur = t3.query(q3, v).bound;
      REQUIRE(cur <= prev3);
      prev3 = cur;
    }
  }
}

TEST_CASE("deep queries exhaust the recursion and become exact") {
  auto s = make_set(2, 1024, 12);
  auto t = SlabTree2::build(s.pts);
  auto s3 = make_set(3, 512, 13);
  auto t3 = SlabTree3::build(s3.pts);
  SplitMix64 rng(14);
  for (int i = 0; i < 150; ++i) {
    auto q = random_query(rng, 1024, 2);
    auto e = t.query(q, 8);
    REQUIRE(e.bound == 0);
    REQUIRE(e.estimate == dominators(s, q));
    auto q3 = random_query(rng, 512, 3);
    auto e3 = t3.query(q3, 8);
    REQUIRE(e3.bound == 0);
    REQUIRE(e3.estimate == dominators(s3, q3));
  }
}

TEST_CASE("grid vertices answer exactly from the corner table") {
  auto s = make_set(2, 400, 15);
  auto t = SlabTree2::build(s.pts);
  auto e = t.query(GridPoint{1, 1}, 0);
  REQUIRE(e.estimate == 400);
  REQUIRE(e.bound == 0);
  // sentinels clamp: (0,0) behaves like (1,1), coordinates past n answer 0
  auto e0 = t.query(GridPoint{0, 0}, 0);
  REQUIRE(e0.estimate == 400);
  REQUIRE(e0.bound == 0);
  auto eh = t.query(GridPoint{401, 1}, 0);
  REQUIRE(eh.estimate == 0);
  REQUIRE(eh.bound == 0);

  auto s3 = make_set(3, 343, 16);
  auto t3 = SlabTree3::build(s3.pts);
  auto e3 = t3.query(GridPoint{1, 1, 1}, 0);
  REQUIRE(e3.estimate == 343);
  REQUIRE(e3.bound == 0);
}

TEST_CASE("fixed-error trees are sound and store no point lists") {
  for (double c : {0.5, 0.8}) {
    auto s = make_set(2, 1024, 600 + static_cast<uint64_t>(c * 10));
    auto t = SlabTree2::build(s.pts, FixedError{c, 0.1});
    REQUIRE(t.space().base_points == 0);
    SplitMix64 rng(17);
    for (int i = 0; i < 300; ++i) {
      auto q = random_query(rng, 1024, 2);
      const Count exact = dominators(s, q);
      auto e = t.query(q, 0);  // depth argument is a no-op in this regime
      REQUIRE(e.estimate <= exact);
      REQUIRE(exact - e.estimate <= e.bound);
      REQUIRE(e == t.query_rho(q, 0.5));
    }
  }
  auto s3 = make_set(3, 256, 18);
  auto t3 = SlabTree3::build(s3.pts, FixedError{0.5, 0.1});
  REQUIRE(t3.space().base_points == 0);
  SplitMix64 rng(19);
  for (int i = 0; i < 200; ++i) {
    auto q = random_query(rng, 256, 3);
    const Count exact = dominators(s3, q);
    auto e = t3.query(q, 0);
    REQUIRE(e.estimate <= exact);
    REQUIRE(exact - e.estimate <= e.bound);
  }
}

TEST_CASE("worked size: depth three on sixty-five thousand points stays under thirty-two") {
  auto s = make_set(2, 65536, 20);
  auto t = SlabTree2::build(s.pts);
  SplitMix64 rng(21);
  for (int i = 0; i < 100; ++i) {
    auto q = random_query(rng, 65536, 2);
    auto e = t.query_rho(q, 0.5);
    REQUIRE(static_cast<double>(e.bound) <= 32.0);
    REQUIRE(std::llabs(e.estimate - dominators(s, q)) <= e.bound);
  }
}

TEST_CASE("query depth must be nonnegative") {
  auto t = SlabTree2::build(make_set(2, 32, 22).pts);
  REQUIRE_THROWS_AS(t.query(GridPoint{1, 1}, -1), std::invalid_argument);
  REQUIRE_THROWS_AS(t.query_rho(GridPoint{1, 1}, 2.0), std::invalid_argument);
}

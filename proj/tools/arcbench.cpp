// arcbench: dataset generation, oracle verification, CSV benchmark reports,
// and structural audits for the range-counting structures in include/arc.
//
// Exit codes: 0 success, 1 bound violation or failed audit, 2 usage error
// (unknown subcommand, structure, distribution, or bad parameters).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arc/datagen.hpp"
#include "arc/decomposition.hpp"
#include "arc/dominance2d.hpp"
#include "arc/exponential_tree.hpp"
#include "arc/grid.hpp"
#include "arc/io.hpp"
#include "arc/level3d.hpp"
#include "arc/oracle.hpp"
#include "arc/slab_tree.hpp"
#include "arc/staircase.hpp"

namespace {

using namespace arc;

struct Row {
  Count k = 0;
  Count estimate = 0;
  Count bound = 0;
  int64_t query_ns = 0;
};

struct RunResult {
  std::vector<Row> rows;
  int64_t build_ms = 0;
};

int64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

GridPoint random_corner(SplitMix64& rng, int dim, Coord m) {
  GridPoint q(1, 1, 1);
  for (int a = 0; a < dim; ++a)
    q[a] = static_cast<Coord>(1 + rng.below(static_cast<uint64_t>(std::max<Coord>(m, 1))));
  return q;
}

QueryRect random_rect(SplitMix64& rng, int dim, Coord m) {
  QueryRect r;
  r.dim = dim;
  for (int a = 0; a < dim; ++a) {
    Coord lo = static_cast<Coord>(rng.below(static_cast<uint64_t>(m) + 2));
    Coord hi = static_cast<Coord>(rng.below(static_cast<uint64_t>(m) + 2));
    if (lo > hi) std::swap(lo, hi);
    r.lo[a] = lo;
    r.hi[a] = hi;
  }
  return r;
}

void require_dim(const RawPointSet& raw, int want, const std::string& structure) {
  if (raw.dim != want)
    throw std::invalid_argument("structure '" + structure + "' needs a " +
                                std::to_string(want) + "-d point file, got d=" +
                                std::to_string(raw.dim));
}

void require_rho(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("rho must lie in (0,1) for this structure");
}

// Runs the query workload for one structure. The workload is a pure function
// of (structure, input file, queries, rho, seed); timings are filled in only
// when `timing` is set so default reports are byte-identical across runs.
RunResult run_workload(const std::string& structure, const RawPointSet& raw, int queries,
                       double rho, uint64_t seed, bool timing) {
  RunResult rr;
  rr.rows.reserve(static_cast<size_t>(queries));
  SplitMix64 rng(seed);

  auto timed = [&](auto&& fn) -> Row {
    const int64_t t0 = timing ? now_ns() : 0;
    Row row = fn();
    if (timing) row.query_ns = now_ns() - t0;
    return row;
  };

  const int64_t b0 = timing ? now_ns() : 0;

  if (structure == "dyn1d") {
    require_dim(raw, 1, structure);
    if (!(rho > 1.0))
      throw std::invalid_argument("dyn1d interprets --rho as the accuracy parameter c, "
                                  "which must be > 1");
    ExponentialTree tree(rho, static_cast<int64_t>(raw.pts.size()));
    std::vector<Raw> sorted;
    sorted.reserve(raw.pts.size());
    for (const auto& p : raw.pts) {
      tree.insert(p[0]);
      sorted.push_back(p[0]);
    }
    std::sort(sorted.begin(), sorted.end());
    if (timing) rr.build_ms = (now_ns() - b0) / 1000000;
    const double inv_c = 1.0 / rho;
    for (int i = 0; i < queries; ++i) {
      Raw a = static_cast<Raw>(rng.below(static_cast<uint64_t>(kUniverse)));
      Raw b = static_cast<Raw>(rng.below(static_cast<uint64_t>(kUniverse)));
      if (a > b) std::swap(a, b);
      rr.rows.push_back(timed([&] {
        Row row;
        row.k = std::upper_bound(sorted.begin(), sorted.end(), b) -
                std::lower_bound(sorted.begin(), sorted.end(), a);
        row.estimate = tree.approx_count(a, b);
        row.bound = static_cast<Count>(
            std::floor(std::pow(static_cast<double>(std::max<Count>(row.k, 1)), inv_c)));
        return row;
      }));
    }
    return rr;
  }

  const auto red = reduce_to_rank_space(raw);
  const PointSet& s = red.set;
  const Coord m = s.n;

  auto dominance_rows = [&](auto&& approx, auto&& oracle) {
    for (int i = 0; i < queries; ++i) {
      const GridPoint q = random_corner(rng, s.dim, m);
      rr.rows.push_back(timed([&] {
        Row row;
        const Estimate e = approx(q);
        row.k = oracle(q);
        row.estimate = e.estimate;
        row.bound = e.bound;
        return row;
      }));
    }
  };

  auto rect_rows = [&](auto&& approx) {
    for (int i = 0; i < queries; ++i) {
      const QueryRect r = random_rect(rng, s.dim, m);
      rr.rows.push_back(timed([&] {
        Row row;
        const Estimate e = approx(r);
        row.k = exact_count(s, r);
        row.estimate = e.estimate;
        row.bound = e.bound;
        return row;
      }));
    }
  };

  if (structure == "slab2d" || structure == "slab3d") {
    require_rho(rho);
    if (structure == "slab2d") {
      require_dim(raw, 2, structure);
      auto t = SlabTree2::build(s.pts);
      if (timing) rr.build_ms = (now_ns() - b0) / 1000000;
      dominance_rows([&](GridPoint q) { return t.query_rho(q, rho); },
                     [&](GridPoint q) { return dominators(s, q); });
    } else {
      require_dim(raw, 3, structure);
      auto t = SlabTree3::build(s.pts);
      if (timing) rr.build_ms = (now_ns() - b0) / 1000000;
      dominance_rows([&](GridPoint q) { return t.query_rho(q, rho); },
                     [&](GridPoint q) { return dominators(s, q); });
    }
  } else if (structure == "dominance2d") {
    require_dim(raw, 2, structure);
    require_rho(rho);
    auto d = Dominance2D::build(s);
    if (timing) rr.build_ms = (now_ns() - b0) / 1000000;
    dominance_rows([&](GridPoint q) { return d.count(q, rho); },
                   [&](GridPoint q) { return dominators(s, q); });
  } else if (structure == "levels3d") {
    require_dim(raw, 3, structure);
    require_rho(rho);
    auto ls = LevelSet3D::build(s);
    if (timing) rr.build_ms = (now_ns() - b0) / 1000000;
    dominance_rows([&](GridPoint q) { return ls.count3(q, rho); },
                   [&](GridPoint q) { return dominated_count(s, q); });
  } else if (structure == "rect2d") {
    require_dim(raw, 2, structure);
    require_rho(rho);
    auto t = build_general(s, Dominance2DFactory{});
    if (timing) rr.build_ms = (now_ns() - b0) / 1000000;
    rect_rows([&](const QueryRect& r) { return t.query(r, rho); });
  } else if (structure == "rect3d") {
    require_dim(raw, 3, structure);
    require_rho(rho);
    auto t = build_general(s, LevelSet3DFactory{});
    if (timing) rr.build_ms = (now_ns() - b0) / 1000000;
    rect_rows([&](const QueryRect& r) { return t.query(r, rho); });
  } else {
    throw std::invalid_argument("unknown structure: " + structure);
  }
  return rr;
}

int cmd_gen(int d, int64_t n, const std::string& dist, uint64_t seed,
            const std::string& out) {
  if (d < 1 || d > 3) throw std::invalid_argument("--d must be 1, 2 or 3");
  if (n < 0 || n > std::numeric_limits<Coord>::max())
    throw std::invalid_argument("--n out of range");
  write_points_file(out, generate(dist, d, static_cast<Coord>(n), seed));
  return 0;
}

int cmd_verify(const std::string& structure, const std::string& in, int queries, double rho,
               uint64_t seed) {
  const RawPointSet raw = read_points_file(in);
  const RunResult rr = run_workload(structure, raw, queries, rho, seed, false);
  int violations = 0;
  for (size_t i = 0; i < rr.rows.size(); ++i) {
    const Row& row = rr.rows[i];
    if (std::llabs(row.estimate - row.k) > row.bound) {
      ++violations;
      std::cout << "violation query=" << i << " k=" << row.k << " estimate=" << row.estimate
                << " bound=" << row.bound << '\n';
    }
  }
  return violations ? 1 : 0;
}

int cmd_bench(const std::string& structure, const std::string& in, int queries, double rho,
              uint64_t seed, const std::string& csv, bool timing) {
  const RawPointSet raw = read_points_file(in);
  const RunResult rr = run_workload(structure, raw, queries, rho, seed, timing);
  std::ofstream f(csv, std::ios::binary);  // binary: LF endings everywhere
  if (!f) throw std::runtime_error("cannot open for writing: " + csv);
  f << "query_id,k_exact,estimate,bound,abs_error,build_ms,query_ns\n";
  for (size_t i = 0; i < rr.rows.size(); ++i) {
    const Row& row = rr.rows[i];
    f << i << ',' << row.k << ',' << row.estimate << ',' << row.bound << ','
      << std::llabs(row.estimate - row.k) << ',' << rr.build_ms << ',' << row.query_ns
      << '\n';
  }
  return 0;
}

int cmd_audit(const std::string& structure, const std::string& in) {
  const RawPointSet raw = read_points_file(in);
  bool ok = true;

  auto report_tree = [](const SpaceStats& st) {
    std::cout << "space corner_entries=" << st.corner_entries << " map_entries=" << st.map_entries
              << " base_points=" << st.base_points << " nodes=" << st.nodes << '\n';
  };

  if (structure == "slab2d" || structure == "slab3d") {
    const int want = structure == "slab2d" ? 2 : 3;
    require_dim(raw, want, structure);
    const PointSet s = reduce_to_rank_space(raw).set;
    if (want == 2) {
      auto t = SlabTree2::build(s.pts);
      ok = t.audit(s.pts);
      report_tree(t.space());
    } else {
      auto t = SlabTree3::build(s.pts);
      ok = t.audit(s.pts);
      report_tree(t.space());
    }
  } else if (structure == "dominance2d") {
    require_dim(raw, 2, structure);
    const PointSet s = reduce_to_rank_space(raw).set;
    auto d = Dominance2D::build(s);
    ok = d.audit(s);
    const auto sp = d.space();
    std::cout << "space stored_points=" << sp.stored_points << " map_entries=" << sp.map_entries
              << '\n';
    report_tree(sp.tree_stats);
  } else if (structure == "levels3d") {
    require_dim(raw, 3, structure);
    const PointSet s = reduce_to_rank_space(raw).set;
    auto ls = LevelSet3D::build(s);
    int64_t t = 1;
    for (int j = 0; j < ls.levels(); ++j, t *= 2) {
      const bool good = verify_level(s, ls.level(j), t, 2);
      std::cout << "level j=" << j << " t=" << t << " apexes=" << ls.level(j).apexes.size()
                << (good ? " ok" : " FAIL") << '\n';
      ok = ok && good;
    }
    ok = ok && ls.audit(s);
    const auto sp = ls.space();
    std::cout << "space stored_points=" << sp.stored_points << " map_entries=" << sp.map_entries
              << '\n';
    report_tree(sp.tree_stats);
  } else if (structure == "boundary") {
    require_dim(raw, 2, structure);
    const PointSet s = reduce_to_rank_space(raw).set;
    auto bs = BoundarySet::build(s);
    const auto grid = build_dominator_grid(s);
    int64_t t = 1;
    for (int j = 0; j < bs.levels(); ++j, t *= 2) {
      const bool good =
          verify_boundary(grid, static_cast<int64_t>(s.pts.size()), bs.boundary(j), t, 2);
      std::cout << "boundary j=" << j << " t=" << t
                << " corners=" << bs.boundary(j).corners.size() << (good ? " ok" : " FAIL")
                << '\n';
      ok = ok && good;
    }
  } else if (structure == "dyn1d") {
    require_dim(raw, 1, structure);
    ExponentialTree tree(2.0, static_cast<int64_t>(raw.pts.size()));
    for (const auto& p : raw.pts) tree.insert(p[0]);
    ok = tree.audit();
    tree.force_refresh();
    ok = ok && tree.audit();
    std::cout << "dyn1d size=" << tree.size() << " c_eff=" << tree.c_eff()
              << " group_capacity=" << tree.group_capacity() << '\n';
  } else if (structure == "rect2d" || structure == "rect3d") {
    const int want = structure == "rect2d" ? 2 : 3;
    require_dim(raw, want, structure);
    const PointSet s = reduce_to_rank_space(raw).set;
    DecompositionSpace sp;
    if (want == 2)
      sp = build_general(s, Dominance2DFactory{}).space();
    else
      sp = build_general(s, LevelSet3DFactory{}).space();
    std::cout << "space replicated_points=" << sp.replicated_points
              << " canonical_points=" << sp.canonical_points
              << " oriented_points=" << sp.oriented_points << " structures=" << sp.structures
              << " nodes=" << sp.nodes << '\n';
  } else {
    throw std::invalid_argument("unknown structure: " + structure);
  }

  std::cout << (ok ? "audit ok" : "audit FAILED") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"range counting workbench"};
  app.require_subcommand(1);

  int d = 2;
  int64_t n = 0;
  std::string dist = "uniform";
  uint64_t seed = 1;
  std::string out;
  auto* gen = app.add_subcommand("gen", "generate a point file");
  gen->add_option("--d", d, "dimension (1, 2 or 3)");
  gen->add_option("--n", n, "number of points")->required();
  gen->add_option("--dist", dist, "uniform | clustered | permutation-grid");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", out, "output point file")->required();

  std::string structure;
  std::string in;
  int queries = 1000;
  double rho = 0.5;
  auto* verify = app.add_subcommand("verify", "check oracle error against returned bounds");
  verify->add_option("--structure", structure, "structure selector")->required();
  verify->add_option("--in", in, "input point file")->required();
  verify->add_option("--queries", queries, "number of queries");
  verify->add_option("--rho", rho, "error exponent (accuracy c for dyn1d)");
  verify->add_option("--seed", seed, "query seed");

  std::string csv;
  bool timing = false;
  auto* bench = app.add_subcommand("bench", "write a per-query CSV report");
  bench->add_option("--structure", structure, "structure selector")->required();
  bench->add_option("--in", in, "input point file")->required();
  bench->add_option("--queries", queries, "number of queries");
  bench->add_option("--rho", rho, "error exponent (accuracy c for dyn1d)");
  bench->add_option("--seed", seed, "query seed");
  bench->add_option("--csv", csv, "output CSV file")->required();
  bench->add_flag("--timing", timing, "measure build/query times (off by default so "
                                      "reports are byte-identical)");

  auto* audit = app.add_subcommand("audit", "run structural invariant walks");
  audit->add_option("--structure", structure, "structure selector")->required();
  audit->add_option("--in", in, "input point file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(d, n, dist, seed, out);
    if (verify->parsed()) return cmd_verify(structure, in, queries, rho, seed);
    if (bench->parsed()) return cmd_bench(structure, in, queries, rho, seed, csv, timing);
    if (audit->parsed()) return cmd_audit(structure, in);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

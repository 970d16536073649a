#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "arc/grid.hpp"
#include "arc/io.hpp"

using namespace arc;

namespace {

// The CLI binary under test; ctest exports its location as ARC_CLI.
const char* cli_path() { return std::getenv("ARC_CLI"); }

struct CliResult {
  int status = -1;
  std::string out;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
  CliResult r;
  std::string cmd = std::string(cli_path()) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int rc = pclose(p);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("arc_cli_" + std::to_string(static_cast<unsigned>(getpid())));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("cli generates readable, reproducible point files") {
  if (!cli_path()) SKIP("ARC_CLI not set");
  TempDir td;

  auto r1 = run_cli("gen --d 2 --n 64 --dist permutation-grid --seed 7 --out " + td.file("a.txt"));
  REQUIRE(r1.status == 0);
  auto s = read_points_file(td.file("a.txt"));
  REQUIRE(s.dim == 2);
  REQUIRE(s.pts.size() == 64);

  auto r2 = run_cli("gen --d 2 --n 64 --dist permutation-grid --seed 7 --out " + td.file("b.txt"));
  REQUIRE(r2.status == 0);
  REQUIRE(slurp(td.file("a.txt")) == slurp(td.file("b.txt")));

  auto r3 = run_cli("gen --d 2 --n 64 --dist permutation-grid --seed 8 --out " + td.file("c.txt"));
  REQUIRE(r3.status == 0);
  REQUIRE(slurp(td.file("a.txt")) != slurp(td.file("c.txt")));
}

TEST_CASE("cli verify accepts every structure on matching inputs") {
  if (!cli_path()) SKIP("ARC_CLI not set");
  TempDir td;
  REQUIRE(run_cli("gen --d 2 --n 300 --dist uniform --seed 3 --out " + td.file("p2.txt")).status == 0);
  REQUIRE(run_cli("gen --d 3 --n 200 --dist clustered --seed 4 --out " + td.file("p3.txt")).status == 0);
  REQUIRE(run_cli("gen --d 1 --n 250 --dist uniform --seed 5 --out " + td.file("p1.txt")).status == 0);

  for (std::string st : {"slab2d", "dominance2d", "rect2d"}) {
    auto r = run_cli("verify --structure " + st + " --in " + td.file("p2.txt") +
                     " --queries 120 --rho 0.5 --seed 11");
    INFO(st << ": " << r.out);
    REQUIRE(r.status == 0);
    REQUIRE(r.out.empty());
  }
  for (std::string st : {"slab3d", "levels3d", "rect3d"}) {
    auto r = run_cli("verify --structure " + st + " --in " + td.file("p3.txt") +
                     " --queries 80 --rho 0.4 --seed 11");
    INFO(st << ": " << r.out);
    REQUIRE(r.status == 0);
  }
  auto r = run_cli("verify --structure dyn1d --in " + td.file("p1.txt") +
                   " --queries 200 --rho 2 --seed 11");
  INFO(r.out);
  REQUIRE(r.status == 0);

  SECTION("empty query set: exit 0, zero rows") {
    auto e = run_cli("verify --structure dominance2d --in " + td.file("p2.txt") + " --queries 0");
    REQUIRE(e.status == 0);
    REQUIRE(e.out.empty());
  }
}

TEST_CASE("cli usage errors exit with code 2") {
  if (!cli_path()) SKIP("ARC_CLI not set");
  TempDir td;
  REQUIRE(run_cli("gen --d 2 --n 20 --dist uniform --seed 1 --out " + td.file("p.txt")).status == 0);

  REQUIRE(run_cli("verify --structure nosuch --in " + td.file("p.txt")).status == 2);
  REQUIRE(run_cli("audit --structure nosuch --in " + td.file("p.txt")).status == 2);
  REQUIRE(run_cli("gen --n 5 --dist nosuch --out " + td.file("q.txt")).status == 2);
  REQUIRE(run_cli("verify --structure slab3d --in " + td.file("p.txt") + " --queries 1").status == 2);
  REQUIRE(run_cli("verify --structure slab2d --in " + td.file("p.txt") + " --rho 2").status == 2);
  REQUIRE(run_cli("verify --structure dyn1d --in " + td.file("p.txt") + " --rho 0.5").status == 2);
  REQUIRE(run_cli("bench --structure slab2d --in " + td.file("p.txt")).status == 2);  // no --csv
  REQUIRE(run_cli("").status == 2);  // no subcommand
  REQUIRE(run_cli("verify --structure slab2d --in " + td.file("missing.txt")).status == 2);
}

TEST_CASE("cli bench writes deterministic well-formed csv") {
  if (!cli_path()) SKIP("ARC_CLI not set");
  TempDir td;
  REQUIRE(run_cli("gen --d 2 --n 256 --dist permutation-grid --seed 9 --out " + td.file("p.txt")).status == 0);

  auto r1 = run_cli("bench --structure dominance2d --in " + td.file("p.txt") +
                    " --queries 100 --rho 0.5 --seed 21 --csv " + td.file("r1.csv"));
  REQUIRE(r1.status == 0);
  auto r2 = run_cli("bench --structure dominance2d --in " + td.file("p.txt") +
                    " --queries 100 --rho 0.5 --seed 21 --csv " + td.file("r2.csv"));
  REQUIRE(r2.status == 0);
  const std::string csv = slurp(td.file("r1.csv"));
  REQUIRE(csv == slurp(td.file("r2.csv")));

  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  REQUIRE(line == "query_id,k_exact,estimate,bound,abs_error,build_ms,query_ns");
  int rows = 0;
  while (std::getline(lines, line)) {
    long long id, k, est, bound, err, bms, qns;
    char c;
    std::istringstream ls(line);
    REQUIRE((ls >> id >> c >> k >> c >> est >> c >> bound >> c >> err >> c >> bms >> c >> qns));
    REQUIRE(id == rows);
    REQUIRE(err == std::llabs(est - k));
    REQUIRE(err <= bound);
    REQUIRE(bms == 0);  // timing is opt-in, zeros keep reports byte-stable
    REQUIRE(qns == 0);
    ++rows;
  }
  REQUIRE(rows == 100);
  REQUIRE(csv.find('\r') == std::string::npos);
}

TEST_CASE("cli audit exercises every structure") {
  if (!cli_path()) SKIP("ARC_CLI not set");
  TempDir td;
  REQUIRE(run_cli("gen --d 2 --n 220 --dist uniform --seed 6 --out " + td.file("p2.txt")).status == 0);
  REQUIRE(run_cli("gen --d 3 --n 150 --dist uniform --seed 6 --out " + td.file("p3.txt")).status == 0);
  REQUIRE(run_cli("gen --d 1 --n 180 --dist uniform --seed 6 --out " + td.file("p1.txt")).status == 0);

  for (std::string st : {"slab2d", "dominance2d", "boundary", "rect2d"}) {
    auto r = run_cli("audit --structure " + st + " --in " + td.file("p2.txt"));
    INFO(st << ": " << r.out);
    REQUIRE(r.status == 0);
    REQUIRE(r.out.find("audit ok") != std::string::npos);
  }
  for (std::string st : {"slab3d", "levels3d", "rect3d"}) {
    auto r = run_cli("audit --structure " + st + " --in " + td.file("p3.txt"));
    INFO(st << ": " << r.out);
    REQUIRE(r.status == 0);
    REQUIRE(r.out.find("audit ok") != std::string::npos);
  }
  auto r = run_cli("audit --structure dyn1d --in " + td.file("p1.txt"));
  REQUIRE(r.status == 0);
  REQUIRE(r.out.find("audit ok") != std::string::npos);
}

#ifndef ARC_IO_HPP
#define ARC_IO_HPP

// Point file format shared by the library and the CLI:
//   line 1: "d n"
//   then n lines of d space-separated integers (universe coordinates).
// Lines starting with '#' are comments and are skipped anywhere.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "arc/grid.hpp"

namespace arc {

inline void write_points(std::ostream& os, const RawPointSet& s) {
  os << s.dim << ' ' << s.pts.size() << '\n';
  for (const auto& p : s.pts) {
    for (int a = 0; a < s.dim; ++a) {
      if (a) os << ' ';
      os << p[a];
    }
    os << '\n';
  }
}

inline void write_points_file(const std::string& path, const RawPointSet& s) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  write_points(f, s);
}

inline RawPointSet read_points(std::istream& is) {
  auto next_content_line = [&](std::string& line) -> bool {
    while (std::getline(is, line)) {
      size_t i = line.find_first_not_of(" \t\r");
      if (i == std::string::npos) continue;
      if (line[i] == '#') continue;
      return true;
    }
    return false;
  };

  std::string line;
  if (!next_content_line(line)) throw std::runtime_error("point file: missing header");
  std::istringstream hdr(line);
  int d = 0;
  long long n = -1;
  if (!(hdr >> d >> n) || d < 1 || d > 3 || n < 0)
    throw std::runtime_error("point file: bad header '" + line + "'");

  RawPointSet s;
  s.dim = d;
  s.pts.reserve(static_cast<size_t>(n));
  for (long long i = 0; i < n; ++i) {
    if (!next_content_line(line))
      throw std::runtime_error("point file: expected " + std::to_string(n) + " points, got " +
                               std::to_string(i));
    std::istringstream ls(line);
    RawPoint p;
    for (int a = 0; a < d; ++a) {
      if (!(ls >> p[a]))
        throw std::runtime_error("point file: malformed point line '" + line + "'");
    }
    s.pts.push_back(p);
  }
  return s;
}

inline RawPointSet read_points_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return read_points(f);
}

}  // namespace arc

#endif

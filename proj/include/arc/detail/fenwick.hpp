#ifndef ARC_DETAIL_FENWICK_HPP
#define ARC_DETAIL_FENWICK_HPP

// Binary indexed trees used by builders, verifiers and test oracles.

#include <cstdint>
#include <vector>

#include "arc/grid.hpp"

namespace arc::detail {

class Fenwick1D {
 public:
  Fenwick1D() = default;
  explicit Fenwick1D(int n) : n_(n), t_(static_cast<size_t>(n) + 1, 0) {}

  void add(int i, Count delta) {
    for (; i <= n_; i += i & -i) t_[static_cast<size_t>(i)] += delta;
  }
  Count prefix(int i) const {  // sum over [1..i]
    if (i > n_) i = n_;
    Count s = 0;
    for (; i > 0; i -= i & -i) s += t_[static_cast<size_t>(i)];
    return s;
  }
  Count range(int a, int b) const { return a > b ? 0 : prefix(b) - prefix(a - 1); }
  Count total() const { return prefix(n_); }
  int size() const { return n_; }

  // Largest i in [0..n] with prefix(i) <= k (requires all stored values >= 0).
  int max_prefix_le(Count k) const {
    int i = 0;
    Count acc = 0;
    for (int bit = top_bit(); bit; bit >>= 1) {
      int ni = i + bit;
      if (ni > n_) continue;
      if (acc + t_[static_cast<size_t>(ni)] <= k) {
        i = ni;
        acc += t_[static_cast<size_t>(ni)];
      }
    }
    return i;
  }

 private:
  int top_bit() const {
    int b = 1;
    while ((b << 1) <= n_) b <<= 1;
    return n_ ? b : 0;
  }
  int n_ = 0;
  std::vector<Count> t_;
};

// Point-updatable 2-D Fenwick over [1..nx] x [1..ny], O(log^2) prefix sums.
class Fenwick2D {
 public:
  Fenwick2D() = default;
  Fenwick2D(int nx, int ny)
      : nx_(nx), ny_(ny), t_(static_cast<size_t>(nx + 1) * static_cast<size_t>(ny + 1), 0) {}

  void add(int x, int y, Count delta) {
    for (int i = x; i <= nx_; i += i & -i)
      for (int j = y; j <= ny_; j += j & -j) at(i, j) += delta;
  }

  Count prefix(int x, int y) const {  // sum over [1..x] x [1..y]
    if (x > nx_) x = nx_;
    if (y > ny_) y = ny_;
    Count s = 0;
    for (int i = x; i > 0; i -= i & -i)
      for (int j = y; j > 0; j -= j & -j) s += at(i, j);
    return s;
  }

  // Largest y in [0..ny] with prefix(x, y) <= k, in O(log^2) by walking the
  // y bits once across all O(log nx) row trees simultaneously. Requires all
  // cell values >= 0 so prefixes are monotone in y.
  int max_y_with_prefix_le(int x, Count k) const {
    if (x > nx_) x = nx_;
    int rows[32];
    int nrows = 0;
    for (int i = x; i > 0; i -= i & -i) rows[nrows++] = i;
    int y = 0;
    Count acc = 0;
    for (int bit = top_bit(ny_); bit; bit >>= 1) {
      int nyy = y + bit;
      if (nyy > ny_) continue;
      Count step = 0;
      for (int r = 0; r < nrows; ++r) step += at(rows[r], nyy);
      if (acc + step <= k) {
        y = nyy;
        acc += step;
      }
    }
    return y;
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  static int top_bit(int n) {
    int b = 1;
    while ((b << 1) <= n) b <<= 1;
    return n ? b : 0;
  }
  Count& at(int i, int j) { return t_[static_cast<size_t>(i) * (ny_ + 1) + j]; }
  Count at(int i, int j) const { return t_[static_cast<size_t>(i) * (ny_ + 1) + j]; }
  int nx_ = 0, ny_ = 0;
  std::vector<Count> t_;
};

}  // namespace arc::detail

#endif

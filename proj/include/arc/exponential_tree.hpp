#ifndef ARC_EXPONENTIAL_TREE_HPP
#define ARC_EXPONENTIAL_TREE_HPP

// Dynamic 1-D approximate range counting with additive error k^(1/c_user).
//
// Three aligned views of the same multiset:
//  - an ordered index (std::multiset) answering succ/pred,
//  - a list of small key-disjoint groups giving exact counts for narrow
//    ranges (the authoritative path whenever the range's endpoints snap
//    into the same or adjacent groups),
//  - an exponential tree whose internal nodes keep a snapshot of exact
//    child-prefix counts plus a drift counter; wide ranges are counted by
//    summing snapshot differences along the two boundary paths.
//
// Error accounting: a node only ever contributes a snapshot sum when at
// least one of its children is fully inside the range, so the exact count
// k dominates that child's size, which is at least L_v/4 (L_v = the node's
// child-size target, including rebuild slack). Snapshots are refreshed
// after tau_v updates where
//     tau_v = max(1, min(n_v^(3/c_eff)/2, (L_v/4)^(1/c_user)/64)),
// so each contributing node is off by less than k^(1/c_user)/64, and a
// query touches fewer than 64 contributing nodes (the audit enforces
// height <= 31). Summed: |count - k| <= k^(1/c_user) at every size, not
// just asymptotically. The n_v^(3/c_eff)/2 cap is kept as a structural
// invariant in its own right (c_eff = max(ceil(5 c_user), 5)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

#include "arc/grid.hpp"

namespace arc {

class ExponentialTree {
 public:
  struct CountInfo {
    Count count = 0;
    bool exact = true;
  };

  ExponentialTree(double c_user, int64_t capacity_hint) : c_user_(c_user) {
    if (!(c_user > 1.0)) throw std::invalid_argument("c must be > 1");
    c_eff_ = std::max(static_cast<int>(std::ceil(5.0 * c_user)), 5);
    const double nhat = static_cast<double>(std::max<int64_t>(capacity_hint, 4));
    const double raw_g = std::pow(std::log2(std::log2(nhat)), c_eff_);
    double g = std::max(4.0, std::ceil(raw_g));
    if (g > nhat) g = nhat;  // degenerate exact regime: one group covers everything
    g_ = static_cast<int64_t>(g);
    root_ = std::make_unique<Node>();
  }

  int c_eff() const { return c_eff_; }
  int64_t group_capacity() const { return g_; }
  size_t size() const { return index_.size(); }
  bool empty() const { return index_.empty(); }

  void insert(Raw x) {
    index_.insert(x);
    group_insert(x);
    tree_update(x, +1);
  }

  void erase(Raw x) {
    auto it = index_.find(x);
    if (it == index_.end()) throw std::out_of_range("erase: key not present");
    index_.erase(it);
    group_erase(x);
    tree_update(x, -1);
  }

  Count approx_count(Raw a, Raw b) const { return count_info(a, b).count; }

  CountInfo count_info(Raw a, Raw b) const {
    if (a > b || index_.empty()) return {0, true};
    auto sa = index_.lower_bound(a);
    if (sa == index_.end()) return {0, true};
    auto pb = index_.upper_bound(b);
    if (pb == index_.begin()) return {0, true};
    const Raw succ_a = *sa;
    const Raw pred_b = *std::prev(pb);
    if (succ_a > pred_b) return {0, true};

    const size_t ga = group_of(succ_a);
    const size_t gb = group_of(pred_b);
    if (gb <= ga + 1) {  // same or adjacent groups: exact by contract
      Count k = 0;
      for (size_t i = ga; i <= gb; ++i) {
        const auto& grp = groups_[i];
        k += std::upper_bound(grp.begin(), grp.end(), b) -
             std::lower_bound(grp.begin(), grp.end(), a);
      }
      return {k, true};
    }
    bool exact = true;
    Count c = count_range(*root_, a, b, exact);
    return {std::max<Count>(c, 0), exact};
  }

  // Recompute every snapshot from current child sizes; afterwards counting
  // reproduces the exact answer (the path-sum identity).
  void force_refresh() { force_refresh_node(*root_); }

  std::vector<Raw> to_sorted_vector() const {
    std::vector<Raw> out;
    out.reserve(index_.size());
    collect(*root_, out);
    return out;
  }

  // Structural invariant walk; returns false on the first violation.
  bool audit() const {
    // the three views hold the same multiset
    std::vector<Raw> tree_elems = to_sorted_vector();
    std::vector<Raw> idx_elems(index_.begin(), index_.end());
    if (tree_elems != idx_elems) return false;
    std::vector<Raw> grp_elems;
    grp_elems.reserve(idx_elems.size());
    for (const auto& g : groups_) grp_elems.insert(grp_elems.end(), g.begin(), g.end());
    if (grp_elems != idx_elems) return false;
    if (!std::is_sorted(grp_elems.begin(), grp_elems.end())) return false;

    if (groups_.size() != gmax_.size()) return false;
    for (size_t i = 0; i < groups_.size(); ++i) {
      const auto& g = groups_[i];
      if (g.empty() || gmax_[i] != g.back()) return false;
      const bool single_key = g.front() == g.back();
      if (static_cast<int64_t>(g.size()) > 2 * g_ && !single_key &&
          splittable(g, (g_ + 1) / 2))
        return false;
      if (2 * static_cast<int64_t>(g.size()) < g_ && groups_.size() > 1 && !single_key)
        return false;
      if (i + 1 < groups_.size() && gmax_[i] > groups_[i + 1].front()) return false;
    }
    return audit_node(*root_, 0) >= 0;
  }

 private:
  struct Node {
    int64_t n = 0;
    bool leaf = true;
    std::vector<Raw> bucket;  // leaf: sorted elements
    std::vector<std::unique_ptr<Node>> kids;
    std::vector<Raw> seps;       // seps[i]: inclusive upper key bound of kids[i]
    std::vector<int64_t> snap;   // child-prefix sizes at last refresh
    int64_t drift = 0;           // updates since last refresh
    int64_t n_at_rebuild = 0;
  };

  // ----- parameters -----

  int64_t child_target(int64_t n) const {  // L_v
    return static_cast<int64_t>(
        std::ceil(std::pow(static_cast<double>(std::max<int64_t>(n, 1)),
                           static_cast<double>(c_eff_ - 1) / c_eff_)));
  }
  int64_t leaf_limit(int64_t n) const { return std::max<int64_t>(64, 2 * child_target(n)); }
  double drift_allowance(int64_t n) const {
    return std::pow(static_cast<double>(std::max<int64_t>(n, 1)), 3.0 / c_eff_) / 2.0;
  }
  int64_t tau(int64_t n) const {
    const double cap = std::floor(drift_allowance(n));
    // any query reaching the tree path has k at least min(L_v/4, g/2):
    // a snapshot sum covers a full child, and the group guard already
    // rejected ranges narrower than one whole group
    const double kmin = std::max(1.0, std::min(static_cast<double>(child_target(n)) / 4.0,
                                               static_cast<double>(g_) / 2.0));
    const double tight = std::floor(std::pow(kmin, 1.0 / c_user_) / 64.0);
    return std::max<int64_t>(1, static_cast<int64_t>(std::min(cap, tight)));
  }

  // ----- group list -----

  size_t group_of(Raw x) const {
    const size_t i =
        static_cast<size_t>(std::lower_bound(gmax_.begin(), gmax_.end(), x) - gmax_.begin());
    return i < groups_.size() ? i : groups_.size() - 1;
  }

  // a cut position p with v[p-1] < v[p] and both pieces >= min_piece, or 0
  static size_t split_point(const std::vector<Raw>& v, int64_t min_piece) {
    const size_t n = v.size();
    const size_t mid = n / 2;
    for (size_t off = 0; off < n; ++off) {
      for (size_t p : {mid - off, mid + off}) {
        if (p == 0 || p >= n) continue;
        if (v[p - 1] < v[p] && static_cast<int64_t>(p) >= min_piece &&
            static_cast<int64_t>(n - p) >= min_piece)
          return p;
        if (off == 0) break;
      }
      if (off > mid && mid + off >= n) break;
    }
    return 0;
  }
  static bool splittable(const std::vector<Raw>& v, int64_t min_piece) {
    return split_point(v, min_piece) != 0;
  }

  void group_insert(Raw x) {
    if (groups_.empty()) {
      groups_.push_back({x});
      gmax_.push_back(x);
      return;
    }
    const size_t i = group_of(x);
    auto& g = groups_[i];
    g.insert(std::upper_bound(g.begin(), g.end(), x), x);
    gmax_[i] = g.back();
    if (static_cast<int64_t>(g.size()) > 2 * g_) {
      const size_t p = split_point(g, (g_ + 1) / 2);
      if (p == 0) return;  // duplicate run: oversized group tolerated
      std::vector<Raw> right(g.begin() + static_cast<ptrdiff_t>(p), g.end());
      g.resize(p);
      gmax_[i] = g.back();
      groups_.insert(groups_.begin() + static_cast<ptrdiff_t>(i) + 1, std::move(right));
      gmax_.insert(gmax_.begin() + static_cast<ptrdiff_t>(i) + 1, groups_[i + 1].back());
    }
  }

  void group_erase(Raw x) {
    const size_t i = group_of(x);
    auto& g = groups_[i];
    g.erase(std::lower_bound(g.begin(), g.end(), x));
    if (g.empty()) {
      groups_.erase(groups_.begin() + static_cast<ptrdiff_t>(i));
      gmax_.erase(gmax_.begin() + static_cast<ptrdiff_t>(i));
      return;
    }
    gmax_[i] = g.back();
    if (2 * static_cast<int64_t>(g.size()) >= g_ || groups_.size() == 1) return;
    const size_t j = i > 0 ? i - 1 : i + 1;  // merge with a neighbor
    const size_t lo = std::min(i, j), hi = std::max(i, j);
    std::vector<Raw> merged;
    merged.reserve(groups_[lo].size() + groups_[hi].size());
    merged.insert(merged.end(), groups_[lo].begin(), groups_[lo].end());
    merged.insert(merged.end(), groups_[hi].begin(), groups_[hi].end());
    groups_.erase(groups_.begin() + static_cast<ptrdiff_t>(hi));
    gmax_.erase(gmax_.begin() + static_cast<ptrdiff_t>(hi));
    const size_t p = static_cast<int64_t>(merged.size()) > 2 * g_
                         ? split_point(merged, (g_ + 1) / 2)
                         : 0;
    if (p == 0) {
      groups_[lo] = std::move(merged);
      gmax_[lo] = groups_[lo].back();
    } else {
      std::vector<Raw> right(merged.begin() + static_cast<ptrdiff_t>(p), merged.end());
      merged.resize(p);
      groups_[lo] = std::move(merged);
      gmax_[lo] = groups_[lo].back();
      groups_.insert(groups_.begin() + static_cast<ptrdiff_t>(lo) + 1, std::move(right));
      gmax_.insert(gmax_.begin() + static_cast<ptrdiff_t>(lo) + 1, groups_[lo + 1].back());
    }
  }

  // ----- exponential tree -----

  static void collect(const Node& v, std::vector<Raw>& out) {
    if (v.leaf) {
      out.insert(out.end(), v.bucket.begin(), v.bucket.end());
      return;
    }
    for (const auto& k : v.kids) collect(*k, out);
  }

  std::unique_ptr<Node> build_node(const Raw* first, int64_t n) const {
    auto v = std::make_unique<Node>();
    v->n = n;
    if (n <= leaf_limit(n)) {
      v->bucket.assign(first, first + n);
      return v;
    }
    v->leaf = false;
    v->n_at_rebuild = n;
    const int64_t L = child_target(n);
    int64_t r = std::max<int64_t>(2, (n + L / 2) / L);
    // cut into r runs of near-equal size at distinct-value boundaries so a
    // key's duplicates never straddle a separator
    int64_t pos = 0;
    for (int64_t i = 0; i < r && pos < n; ++i) {
      int64_t want = pos + (n - pos) / (r - i);
      if (want <= pos) want = pos + 1;
      while (want < n && first[want - 1] == first[want]) ++want;  // slide off a run
      if (i == r - 1) want = n;
      v->kids.push_back(build_node(first + pos, want - pos));
      if (want < n) v->seps.push_back(first[want - 1]);
      pos = want;
    }
    if (v->kids.size() < 2) {  // duplicate runs ate the cuts: stay a leaf
      v->leaf = true;
      v->kids.clear();
      v->seps.clear();
      v->bucket.assign(first, first + n);
      return v;
    }
    refresh(*v);
    return v;
  }

  void rebuild(Node& v) const {
    std::vector<Raw> elems;
    elems.reserve(static_cast<size_t>(v.n));
    collect(v, elems);
    Node fresh = std::move(*build_node(elems.data(), static_cast<int64_t>(elems.size())));
    v = std::move(fresh);
  }

  static void refresh(Node& v) {
    v.snap.assign(v.kids.size() + 1, 0);
    for (size_t i = 0; i < v.kids.size(); ++i) v.snap[i + 1] = v.snap[i] + v.kids[i]->n;
    v.drift = 0;
  }

  void force_refresh_node(Node& v) {
    if (v.leaf) return;
    for (auto& k : v.kids) force_refresh_node(*k);
    refresh(v);
  }

  size_t route(const Node& v, Raw x) const {
    const size_t i =
        static_cast<size_t>(std::lower_bound(v.seps.begin(), v.seps.end(), x) - v.seps.begin());
    return i;  // seps has kids.size()-1 entries; past-the-end means last child
  }

  void tree_update(Raw x, int delta) {
    update_node(*root_, x, delta);
    if (root_->leaf && root_->n > leaf_limit(root_->n) &&
        root_->bucket.front() != root_->bucket.back())
      rebuild(*root_);
  }

  void update_node(Node& v, Raw x, int delta) {
    if (v.leaf) {
      if (delta > 0) {
        v.bucket.insert(std::upper_bound(v.bucket.begin(), v.bucket.end(), x), x);
      } else {
        v.bucket.erase(std::lower_bound(v.bucket.begin(), v.bucket.end(), x));
      }
      v.n += delta;
      return;
    }
    const size_t i = route(v, x);
    update_node(*v.kids[i], x, delta);
    v.n += delta;
    v.drift += 1;

    if (v.n >= 2 * v.n_at_rebuild || 2 * v.n <= v.n_at_rebuild) {
      rebuild(v);
      return;
    }
    const int64_t L = child_target(v.n);
    Node& ch = *v.kids[i];
    bool structural = false;
    if (ch.n > 2 * L) {
      structural = split_child(v, i, L);
    } else if (2 * ch.n < L) {
      merge_child(v, i);
      structural = true;
      if (v.kids.size() < 2) {
        rebuild(v);
        return;
      }
    }
    if (structural)
      refresh(v);
    else if (v.drift >= tau(v.n))
      refresh(v);
  }

  bool split_child(Node& v, size_t i, int64_t L) {
    std::vector<Raw> elems;
    elems.reserve(static_cast<size_t>(v.kids[i]->n));
    collect(*v.kids[i], elems);
    const size_t p = split_point(elems, std::max<int64_t>(1, L / 2));
    if (p == 0) return false;  // duplicate run: oversized child tolerated
    auto left = build_node(elems.data(), static_cast<int64_t>(p));
    auto right = build_node(elems.data() + p, static_cast<int64_t>(elems.size() - p));
    const Raw sep = elems[p - 1];
    v.kids[i] = std::move(left);
    v.kids.insert(v.kids.begin() + static_cast<ptrdiff_t>(i) + 1, std::move(right));
    v.seps.insert(v.seps.begin() + static_cast<ptrdiff_t>(i), sep);
    return true;
  }

  void merge_child(Node& v, size_t i) {
    const size_t j = i > 0 ? i - 1 : i + 1;
    const size_t lo = std::min(i, j), hi = std::max(i, j);
    std::vector<Raw> elems;
    elems.reserve(static_cast<size_t>(v.kids[lo]->n + v.kids[hi]->n));
    collect(*v.kids[lo], elems);
    collect(*v.kids[hi], elems);
    v.kids.erase(v.kids.begin() + static_cast<ptrdiff_t>(hi));
    v.seps.erase(v.seps.begin() + static_cast<ptrdiff_t>(lo));
    const int64_t L = child_target(v.n);
    const size_t p = static_cast<int64_t>(elems.size()) > 2 * L
                         ? split_point(elems, std::max<int64_t>(1, L / 2))
                         : 0;
    if (p == 0) {
      v.kids[lo] = build_node(elems.data(), static_cast<int64_t>(elems.size()));
    } else {
      v.kids[lo] = build_node(elems.data(), static_cast<int64_t>(p));
      v.kids.insert(v.kids.begin() + static_cast<ptrdiff_t>(lo) + 1,
                    build_node(elems.data() + p, static_cast<int64_t>(elems.size() - p)));
      v.seps.insert(v.seps.begin() + static_cast<ptrdiff_t>(lo), elems[p - 1]);
    }
  }

  Count count_range(const Node& v, Raw a, Raw b, bool& exact) const {
    if (v.leaf) {
      return std::upper_bound(v.bucket.begin(), v.bucket.end(), b) -
             std::lower_bound(v.bucket.begin(), v.bucket.end(), a);
    }
    const size_t ia = route(v, a);
    const size_t ib = route(v, b);
    if (ia == ib) return count_range(*v.kids[ia], a, b, exact);
    Count mid = v.snap[ib] - v.snap[ia + 1];
    if (ib > ia + 1 && v.drift > 0) exact = false;
    return count_range(*v.kids[ia], a, b, exact) + mid + count_range(*v.kids[ib], a, b, exact);
  }

  // returns subtree height, or -1 on violation
  int audit_node(const Node& v, int depth) const {
    if (depth > 31) return -1;
    if (v.leaf) {
      if (!std::is_sorted(v.bucket.begin(), v.bucket.end())) return -1;
      if (v.n != static_cast<int64_t>(v.bucket.size())) return -1;
      return 0;
    }
    if (v.kids.size() < 2) return -1;
    if (v.seps.size() + 1 != v.kids.size()) return -1;
    if (!std::is_sorted(v.seps.begin(), v.seps.end())) return -1;
    if (v.snap.size() != v.kids.size() + 1 || v.snap[0] != 0) return -1;
    for (size_t i = 0; i + 1 < v.snap.size(); ++i)
      if (v.snap[i] > v.snap[i + 1]) return -1;
    if (v.drift >= drift_allowance(v.n) || v.drift >= tau(v.n)) return -1;
    // the snapshot total can lag the live size by at most the drift
    if (std::llabs(v.snap.back() - v.n) > v.drift) return -1;

    int64_t total = 0;
    const int64_t L = child_target(v.n);
    int h = 0;
    for (size_t i = 0; i < v.kids.size(); ++i) {
      const Node& ch = *v.kids[i];
      total += ch.n;
      std::vector<Raw> elems;
      collect(ch, elems);
      if (elems.empty()) return -1;
      const bool single_key = elems.front() == elems.back();
      if (4 * ch.n < L && !single_key) return -1;
      if (ch.n > 4 * L && !single_key && splittable(elems, std::max<int64_t>(1, L / 2)))
        return -1;
      if (i < v.seps.size() && elems.back() > v.seps[i]) return -1;
      if (i > 0 && elems.front() <= v.seps[i - 1]) return -1;
      const int hc = audit_node(ch, depth + 1);
      if (hc < 0) return -1;
      h = std::max(h, hc + 1);
    }
    if (total != v.n) return -1;
    return h;
  }

  double c_user_;
  int c_eff_ = 5;
  int64_t g_ = 4;
  std::multiset<Raw> index_;
  std::vector<std::vector<Raw>> groups_;
  std::vector<Raw> gmax_;
  std::unique_ptr<Node> root_;
};

}  // namespace arc

#endif

#pragma once

// Exact graph edit distance under unit costs, computed as the minimum number
// of differing AA-matrix entries over all vertex alignments of the two
// null-extended graphs.
//
// The search assigns vertices of the second graph, in index order, to
// positions of the first graph. The branch-and-bound variant prunes with an
// admissible bound made of
//   * the exact cost of the assigned prefix,
//   * the multiset mismatch of the unassigned vertex attributes (the optimal
//     assignment value for 0/1 substitution costs),
//   * per assigned vertex, the difference between its edge counts towards the
//     unassigned block in either graph (rows and columns separately),
//   * for the unassigned block itself, the larger of the sorted out-degree and
//     sorted in-degree L1 gaps.
//
// Among alignments of equal distance the one with the fewest edge
// differences wins, so d_v and d_e are properties of the isomorphism classes.
// Remaining ties go to the lexicographically smallest alignment, or to a
// uniformly random one when TieBreak::random is selected.

#include <algorithm>
#include <array>
#include <bit>
#include <climits>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "sepx/edit.hpp"
#include "sepx/error.hpp"
#include "sepx/graph.hpp"
#include "sepx/random.hpp"

namespace sepx {

enum class GedStrategy { automatic, branch_and_bound, enumerate };
enum class TieBreak { lexicographic, random };

inline constexpr std::size_t kDefaultMaxOrder = 16;
inline constexpr std::size_t kMaxSupportedOrder = 32;

struct GedOptions {
  std::size_t max_order = kDefaultMaxOrder;
  GedStrategy strategy = GedStrategy::automatic;
  TieBreak tie_break = TieBreak::lexicographic;
  std::uint64_t tie_seed = 0;  // only used with TieBreak::random
};

struct GedResult {
  int distance = 0;
  int d_v = 0;
  int d_e = 0;
  // alignment[k] is the position in the first graph that vertex k of the
  // second graph maps to; permute(A2, alignment) is the aligned matrix.
  Permutation alignment;
  std::vector<EditOp> edits;
};

namespace detail {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

class AlignmentSearch {
 public:
  AlignmentSearch(const AaMatrix& a1, const AaMatrix& a2, GedStrategy strategy,
                  TieBreak tie_break, std::uint64_t tie_seed)
      : n_(static_cast<int>(a1.order())),
        prune_(strategy != GedStrategy::enumerate),
        random_ties_(tie_break == TieBreak::random),
        rng_(tie_seed) {
    full_ = n_ == 32 ? ~Mask{0} : ((Mask{1} << n_) - 1);
    for (int i = 0; i < n_; ++i) {
      attr1_[i] = a1.at(i, i);
      attr2_[i] = a2.at(i, i);
      for (int j = 0; j < n_; ++j) {
        if (i == j) continue;
        if (a1.at(i, j)) {
          out1_[i] |= Mask{1} << j;
          in1_[j] |= Mask{1} << i;
        }
        if (a2.at(i, j)) {
          out2_[i] |= Mask{1} << j;
          in2_[j] |= Mask{1} << i;
        }
      }
    }
    for (int i = 0; i < n_; ++i) by_attr1_[i] = i;
    std::stable_sort(by_attr1_.begin(), by_attr1_.begin() + n_,
                     [&](int x, int y) { return attr1_[x] < attr1_[y]; });
    suffix_attrs2_.resize(n_ + 1);
    for (int k = 0; k <= n_; ++k) {
      suffix_attrs2_[k].assign(attr2_.begin() + k, attr2_.begin() + n_);
      std::sort(suffix_attrs2_[k].begin(), suffix_attrs2_[k].end());
    }
  }

  // Upper bound the search must strictly beat; used for isomorphism tests.
  void set_initial_bound(int distance, int edge_distance) {
    best_d_ = distance;
    best_e_ = edge_distance;
  }

  bool run() {
    if (prune_) {
      const auto [lb_v, lb_e] = bound(0);
      root_d_ = lb_v + lb_e;
      root_e_ = lb_e;
    }
    dfs(0, 0, 0);
    return found_;
  }

  int distance() const { return best_d_; }
  int edge_distance() const { return best_e_; }

  Permutation alignment() const {
    return Permutation(std::vector<int>(best_pos_.begin(), best_pos_.begin() + n_));
  }

 private:
  static bool bit(Mask m, int i) { return (m >> i) & 1U; }

  // Lower bounds on the vertex and edge mismatches of any completion once the
  // first `k` vertices of graph 2 are placed.
  std::pair<int, int> bound(int k) const {
    const Mask u1 = full_ & ~used_;
    const Mask u2 = full_ & ~((k == 32) ? ~Mask{0} : ((Mask{1} << k) - 1));

    int matches = 0;
    {
      const auto& rest2 = suffix_attrs2_[k];
      std::size_t b = 0;
      for (int idx = 0; idx < n_ && b < rest2.size(); ++idx) {
        const int i = by_attr1_[idx];
        if (!bit(u1, i)) continue;
        while (b < rest2.size() && rest2[b] < attr1_[i]) ++b;
        if (b < rest2.size() && rest2[b] == attr1_[i]) {
          ++matches;
          ++b;
        }
      }
    }
    const int lb_v = (n_ - k) - matches;

    int lb_e = 0;
    for (int kk = 0; kk < k; ++kk) {
      const int i = pos_[kk];
      lb_e += std::abs(popcount(out1_[i] & u1) - popcount(out2_[kk] & u2));
      lb_e += std::abs(popcount(in1_[i] & u1) - popcount(in2_[kk] & u2));
    }
    if (n_ - k >= 2) {
      std::array<int, 32> o1{}, o2{}, i1{}, i2{};
      int c1 = 0, c2 = 0;
      for (int i = 0; i < n_; ++i) {
        if (bit(u1, i)) {
          o1[c1] = popcount(out1_[i] & u1);
          i1[c1] = popcount(in1_[i] & u1);
          ++c1;
        }
      }
      for (int w = k; w < n_; ++w) {
        o2[c2] = popcount(out2_[w] & u2);
        i2[c2] = popcount(in2_[w] & u2);
        ++c2;
      }
      std::sort(o1.begin(), o1.begin() + c1);
      std::sort(o2.begin(), o2.begin() + c2);
      std::sort(i1.begin(), i1.begin() + c1);
      std::sort(i2.begin(), i2.begin() + c2);
      int rows = 0, cols = 0;
      for (int t = 0; t < c1; ++t) {
        rows += std::abs(o1[t] - o2[t]);
        cols += std::abs(i1[t] - i2[t]);
      }
      lb_e += std::max(rows, cols);
    }
    return {lb_v, lb_e};
  }

  // True when a subtree whose completions are bounded below by (d, e) cannot
  // replace the incumbent.
  bool dominated(int d, int e) const {
    if (d != best_d_) return d > best_d_;
    return random_ties_ ? e > best_e_ : e >= best_e_;
  }

  void record_leaf(int cost_v, int cost_e) {
    const int d = cost_v + cost_e;
    const bool better = d < best_d_ || (d == best_d_ && cost_e < best_e_);
    if (better) {
      best_d_ = d;
      best_e_ = cost_e;
      best_pos_ = pos_;
      found_ = true;
      ties_ = 1;
      if (prune_ && !random_ties_ && d == root_d_ && cost_e == root_e_) stop_ = true;
    } else if (random_ties_ && d == best_d_ && cost_e == best_e_) {
      ++ties_;
      if (std::uniform_int_distribution<std::uint64_t>(0, ties_ - 1)(rng_) == 0) {
        best_pos_ = pos_;
      }
    }
  }

  void dfs(int k, int cost_v, int cost_e) {
    if (k == n_) {
      record_leaf(cost_v, cost_e);
      return;
    }
    for (int i = 0; i < n_ && !stop_; ++i) {
      if (bit(used_, i)) continue;
      int dv = attr1_[i] != attr2_[k];
      int de = 0;
      for (int kk = 0; kk < k; ++kk) {
        const int j = pos_[kk];
        de += bit(out1_[i], j) != bit(out2_[k], kk);
        de += bit(in1_[i], j) != bit(in2_[k], kk);
      }
      const int cv = cost_v + dv, ce = cost_e + de;
      pos_[k] = i;
      used_ |= Mask{1} << i;
      bool expand = true;
      if (prune_) {
        if (dominated(cv + ce, ce)) {
          expand = false;
        } else {
          const auto [lb_v, lb_e] = bound(k + 1);
          expand = !dominated(cv + ce + lb_v + lb_e, ce + lb_e);
        }
      }
      if (expand) dfs(k + 1, cv, ce);
      used_ &= ~(Mask{1} << i);
    }
  }

  int n_;
  bool prune_;
  bool random_ties_;
  Rng rng_;
  Mask full_ = 0;
  Mask used_ = 0;
  std::array<int, 32> attr1_{}, attr2_{};
  std::array<Mask, 32> out1_{}, in1_{}, out2_{}, in2_{};
  std::array<int, 32> by_attr1_{};
  std::vector<std::vector<int>> suffix_attrs2_;
  std::array<int, 32> pos_{};
  std::array<int, 32> best_pos_{};
  int best_d_ = INT_MAX;
  int best_e_ = INT_MAX;
  int root_d_ = -1;
  int root_e_ = -1;
  std::uint64_t ties_ = 0;
  bool found_ = false;
  bool stop_ = false;
};

inline std::size_t common_order(const AttributedGraph& g1, const AttributedGraph& g2,
                                const GedOptions& opts) {
  if (opts.max_order > kMaxSupportedOrder) {
    throw InputError("max_order " + std::to_string(opts.max_order) + " exceeds the supported " +
                     std::to_string(kMaxSupportedOrder));
  }
  const std::size_t n = std::max(g1.order(), g2.order());
  if (n > opts.max_order) {
    throw CapacityError("graph order " + std::to_string(n) + " exceeds the GED bound " +
                        std::to_string(opts.max_order) + " (raise --max-order to opt in)");
  }
  return n;
}

}  // namespace detail

// Both matrices extended to the common order, the second already aligned.
struct AlignedPair {
  AaMatrix first;
  AaMatrix second_aligned;
};

inline GedResult ged_exact(const AttributedGraph& g1, const AttributedGraph& g2,
                           const GedOptions& opts = {}) {
  const std::size_t n = detail::common_order(g1, g2, opts);
  const AaMatrix a1 = to_aa_matrix(extend_with_nulls(g1, n));
  const AaMatrix a2 = to_aa_matrix(extend_with_nulls(g2, n));

  GedResult result;
  if (n == 0) {
    result.alignment = Permutation::identity(0);
    return result;
  }
  detail::AlignmentSearch search(a1, a2, opts.strategy, opts.tie_break, opts.tie_seed);
  search.run();
  result.alignment = search.alignment();
  const AaMatrix aligned = permute(a2, result.alignment);
  const MatrixDistance d = matrix_distances(a1, aligned);
  result.distance = d.total;
  result.d_v = d.vertex;
  result.d_e = d.edge;
  result.edits = edits_from_alignment(a1, aligned);
  return result;
}

inline int ged_distance(const AttributedGraph& g1, const AttributedGraph& g2,
                        const GedOptions& opts = {}) {
  const std::size_t n = detail::common_order(g1, g2, opts);
  if (n == 0) return 0;
  const AaMatrix a1 = to_aa_matrix(extend_with_nulls(g1, n));
  const AaMatrix a2 = to_aa_matrix(extend_with_nulls(g2, n));
  detail::AlignmentSearch search(a1, a2, opts.strategy, TieBreak::lexicographic, 0);
  search.run();
  return search.distance();
}

// GED == 0, i.e. isomorphic once null padding is ignored.
inline bool is_isomorphic(const AttributedGraph& g1, const AttributedGraph& g2,
                          const GedOptions& opts = {}) {
  if (g1.order() - g1.null_count() != g2.order() - g2.null_count()) return false;
  if (g1.edge_count() != g2.edge_count()) return false;
  const std::size_t n = detail::common_order(g1, g2, opts);
  if (n == 0) return true;
  detail::AlignmentSearch search(to_aa_matrix(extend_with_nulls(g1, n)),
                                 to_aa_matrix(extend_with_nulls(g2, n)),
                                 GedStrategy::branch_and_bound, TieBreak::lexicographic, 0);
  search.set_initial_bound(1, INT_MIN);
  return search.run();
}

// Extended first matrix and the second matrix conjugated by the GED alignment.
inline AlignedPair aligned_matrices(const AttributedGraph& g1, const AttributedGraph& g2,
                                    const GedResult& r) {
  const std::size_t n = r.alignment.size();
  return {to_aa_matrix(extend_with_nulls(g1, n)),
          permute(to_aa_matrix(extend_with_nulls(g2, n)), r.alignment)};
}

inline nlohmann::json ged_to_json(const GedResult& r) {
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& op : r.edits) edits.push_back(edit_to_json(op));
  return {{"distance", r.distance},
          {"d_v", r.d_v},
          {"d_e", r.d_e},
          {"alignment", r.alignment.mapping()},
          {"edits", std::move(edits)}};
}

}  // namespace sepx

#pragma once

// Attributed directed graphs, their attributed adjacency matrices (AA-matrices)
// and the null-vertex machinery used to compare graphs of different order.
//
// Vertex attributes are nonnegative integers; 0 marks a null vertex, which is
// padding with no incident edges. Edge attributes are always 1.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sepx/error.hpp"

namespace sepx {

using Attr = int;

inline constexpr Attr kNullAttr = 0;

struct Edge {
  int from = 0;
  int to = 0;
  auto operator<=>(const Edge&) const = default;
};

class AttributedGraph {
 public:
  AttributedGraph() = default;

  // Throws InputError on negative attributes, self-loops, out-of-range
  // endpoints or edges touching a null vertex. Duplicate edges collapse.
  AttributedGraph(std::vector<Attr> attrs, std::vector<Edge> edges)
      : attrs_(std::move(attrs)), edges_(std::move(edges)) {
    const int n = static_cast<int>(attrs_.size());
    for (std::size_t i = 0; i < attrs_.size(); ++i) {
      if (attrs_[i] < 0) {
        throw InputError("attrs[" + std::to_string(i) +
                         "]: negative attribute " + std::to_string(attrs_[i]));
      }
    }
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const auto [i, j] = edges_[k];
      const std::string where = "edges[" + std::to_string(k) + "]: ";
      if (i < 0 || j < 0 || i >= n || j >= n) {
        throw InputError(where + "endpoint out of range (" + std::to_string(i) +
                         "," + std::to_string(j) + ") for order " + std::to_string(n));
      }
      if (i == j) throw InputError(where + "self-loop on vertex " + std::to_string(i));
      if (attrs_[i] == kNullAttr || attrs_[j] == kNullAttr) {
        throw InputError(where + "edge (" + std::to_string(i) + "," + std::to_string(j) +
                         ") touches a null vertex");
      }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  std::size_t order() const { return attrs_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Attr>& attrs() const { return attrs_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(int from, int to) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
  }

  std::size_t null_count() const {
    return static_cast<std::size_t>(std::count(attrs_.begin(), attrs_.end(), kNullAttr));
  }

  bool operator==(const AttributedGraph&) const = default;

 private:
  std::vector<Attr> attrs_;
  std::vector<Edge> edges_;  // sorted, unique
};

// Square matrix whose diagonal holds vertex attributes and whose off-diagonal
// entries are edge indicators.
class AaMatrix {
 public:
  AaMatrix() = default;
  explicit AaMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}

  // Row-major nested initialisation; validates the entry domain.
  static AaMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    AaMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw InputError("AA-matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) {
        const int v = rows[i][j];
        if (i == j ? v < 0 : (v != 0 && v != 1)) {
          throw InputError("AA-matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                           ") out of domain: " + std::to_string(v));
        }
        m.at(i, j) = v;
      }
    }
    return m;
  }

  std::size_t order() const { return n_; }
  int& at(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  int at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  bool operator==(const AaMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<int> entries_;
};

// Bijection on {0..n-1}. Applied to a matrix it moves index i to mapping[i].
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> mapping) : map_(std::move(mapping)) {
    std::vector<char> seen(map_.size(), 0);
    for (int v : map_) {
      if (v < 0 || static_cast<std::size_t>(v) >= map_.size() || seen[v]) {
        throw InputError("permutation is not a bijection");
      }
      seen[v] = 1;
    }
  }

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.map_.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.map_[i] = static_cast<int>(i);
    return p;
  }

  Permutation inverse() const {
    Permutation p;
    p.map_.resize(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) p.map_[map_[i]] = static_cast<int>(i);
    return p;
  }

  std::size_t size() const { return map_.size(); }
  int operator[](std::size_t i) const { return map_[i]; }
  const std::vector<int>& mapping() const { return map_; }

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> map_;
};

inline AaMatrix to_aa_matrix(const AttributedGraph& g) {
  AaMatrix m(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) m.at(i, i) = g.attrs()[i];
  for (const auto& e : g.edges()) m.at(e.from, e.to) = 1;
  return m;
}

// Inverse of to_aa_matrix. Edges incident to a null vertex are dropped so the
// result always satisfies the graph invariants.
inline AttributedGraph from_aa_matrix(const AaMatrix& m) {
  const std::size_t n = m.order();
  std::vector<Attr> attrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (m.at(i, i) < 0) throw InputError("AA-matrix diagonal entry is negative");
    attrs[i] = m.at(i, i);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || m.at(i, j) == 0) continue;
      if (m.at(i, j) != 1) throw InputError("AA-matrix off-diagonal entry is not 0/1");
      if (attrs[i] == kNullAttr || attrs[j] == kNullAttr) continue;
      edges.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
  }
  return AttributedGraph(std::move(attrs), std::move(edges));
}

inline AttributedGraph extend_with_nulls(const AttributedGraph& g, std::size_t n) {
  if (n < g.order()) {
    throw InputError("cannot extend a graph of order " + std::to_string(g.order()) +
                     " to smaller order " + std::to_string(n));
  }
  std::vector<Attr> attrs = g.attrs();
  attrs.resize(n, kNullAttr);
  return AttributedGraph(std::move(attrs), g.edges());
}

// result[p(i)][p(j)] = m[i][j]
inline AaMatrix permute(const AaMatrix& m, const Permutation& p) {
  if (p.size() != m.order()) {
    throw InputError("permutation of size " + std::to_string(p.size()) +
                     " applied to matrix of order " + std::to_string(m.order()));
  }
  AaMatrix out(m.order());
  for (std::size_t i = 0; i < m.order(); ++i) {
    for (std::size_t j = 0; j < m.order(); ++j) out.at(p[i], p[j]) = m.at(i, j);
  }
  return out;
}

// Relabels vertex i as p(i); the result is isomorphic to g.
inline AttributedGraph permute(const AttributedGraph& g, const Permutation& p) {
  return from_aa_matrix(permute(to_aa_matrix(g), p));
}

inline AttributedGraph strip_nulls(const AttributedGraph& g) {
  std::vector<int> new_index(g.order(), -1);
  std::vector<Attr> attrs;
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (g.attrs()[i] == kNullAttr) continue;
    new_index[i] = static_cast<int>(attrs.size());
    attrs.push_back(g.attrs()[i]);
  }
  if (attrs.size() == g.order()) return g;
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (new_index[e.from] >= 0 && new_index[e.to] >= 0) {
      edges.push_back({new_index[e.from], new_index[e.to]});
    }
  }
  return AttributedGraph(std::move(attrs), std::move(edges));
}

struct MatrixDistance {
  int total = 0;
  int vertex = 0;  // differing diagonal entries
  int edge = 0;    // differing off-diagonal entries
  bool operator==(const MatrixDistance&) const = default;
};

inline MatrixDistance matrix_distances(const AaMatrix& a, const AaMatrix& b) {
  if (a.order() != b.order()) throw InputError("matrix_distances: order mismatch");
  MatrixDistance d;
  for (std::size_t i = 0; i < a.order(); ++i) {
    for (std::size_t j = 0; j < a.order(); ++j) {
      if (a.at(i, j) == b.at(i, j)) continue;
      (i == j ? d.vertex : d.edge) += 1;
    }
  }
  d.total = d.vertex + d.edge;
  return d;
}

inline std::size_t off_diagonal_ones(const AaMatrix& m) {
  std::size_t ones = 0;
  for (std::size_t i = 0; i < m.order(); ++i) {
    for (std::size_t j = 0; j < m.order(); ++j) ones += (i != j && m.at(i, j) != 0);
  }
  return ones;
}

}  // namespace sepx

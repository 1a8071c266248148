#pragma once

// Elementary graph edits and their correspondence with AA-matrix entries.
// Every edit touches exactly one matrix entry; positions refer to the
// null-extended, aligned index space.

#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sepx/error.hpp"
#include "sepx/graph.hpp"

namespace sepx {

struct AddVertex {
  int position = 0;
  Attr attribute = 0;
  bool operator==(const AddVertex&) const = default;
};

struct DeleteVertex {
  int position = 0;
  bool operator==(const DeleteVertex&) const = default;
};

struct SubstituteAttr {
  int position = 0;
  Attr attribute = 0;
  bool operator==(const SubstituteAttr&) const = default;
};

struct AddEdge {
  int from = 0;
  int to = 0;
  bool operator==(const AddEdge&) const = default;
};

struct DeleteEdge {
  int from = 0;
  int to = 0;
  bool operator==(const DeleteEdge&) const = default;
};

using EditOp = std::variant<AddVertex, DeleteVertex, SubstituteAttr, AddEdge, DeleteEdge>;

// Differences between `a1` and the aligned `a2`, one edit per differing entry:
// diagonal edits first by ascending index, then off-diagonal edits row-major.
inline std::vector<EditOp> edits_from_alignment(const AaMatrix& a1, const AaMatrix& a2_aligned) {
  if (a1.order() != a2_aligned.order()) throw InputError("edits_from_alignment: order mismatch");
  const std::size_t n = a1.order();
  std::vector<EditOp> ops;
  for (std::size_t i = 0; i < n; ++i) {
    const int from = a1.at(i, i);
    const int to = a2_aligned.at(i, i);
    if (from == to) continue;
    const int pos = static_cast<int>(i);
    if (from == kNullAttr) {
      ops.emplace_back(AddVertex{pos, to});
    } else if (to == kNullAttr) {
      ops.emplace_back(DeleteVertex{pos});
    } else {
      ops.emplace_back(SubstituteAttr{pos, to});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || a1.at(i, j) == a2_aligned.at(i, j)) continue;
      const int r = static_cast<int>(i), c = static_cast<int>(j);
      if (a2_aligned.at(i, j) == 1) {
        ops.emplace_back(AddEdge{r, c});
      } else {
        ops.emplace_back(DeleteEdge{r, c});
      }
    }
  }
  return ops;
}

namespace detail {

inline void check_position(int pos, std::size_t n) {
  if (pos < 0 || static_cast<std::size_t>(pos) >= n) {
    throw InputError("edit position " + std::to_string(pos) + " out of range for order " +
                     std::to_string(n));
  }
}

inline void check_edge(int from, int to, std::size_t n) {
  check_position(from, n);
  check_position(to, n);
  if (from == to) throw InputError("edge edit on a self-loop (" + std::to_string(from) + ")");
}

}  // namespace detail

// Writes one edit into the matrix.
inline void apply_edit(AaMatrix& m, const EditOp& op) {
  const std::size_t n = m.order();
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, AddVertex> || std::is_same_v<T, SubstituteAttr>) {
          detail::check_position(e.position, n);
          if (e.attribute <= 0) throw InputError("vertex edit with non-positive attribute");
          m.at(e.position, e.position) = e.attribute;
        } else if constexpr (std::is_same_v<T, DeleteVertex>) {
          detail::check_position(e.position, n);
          m.at(e.position, e.position) = kNullAttr;
        } else if constexpr (std::is_same_v<T, AddEdge>) {
          detail::check_edge(e.from, e.to, n);
          m.at(e.from, e.to) = 1;
        } else {
          detail::check_edge(e.from, e.to, n);
          m.at(e.from, e.to) = 0;
        }
      },
      op);
}

// Applies `ops` entrywise to the AA-matrix of `g`, then rebuilds the graph.
// Edges left on null vertices are dropped; null vertices themselves stay so
// that positions remain meaningful.
inline AttributedGraph apply_edits(const AttributedGraph& g, std::span<const EditOp> ops) {
  AaMatrix m = to_aa_matrix(g);
  for (const auto& op : ops) apply_edit(m, op);
  return from_aa_matrix(m);
}

inline nlohmann::json edit_to_json(const EditOp& op) {
  return std::visit(
      [](const auto& e) -> nlohmann::json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, AddVertex>) {
          return {{"op", "add_vertex"}, {"position", e.position}, {"attribute", e.attribute}};
        } else if constexpr (std::is_same_v<T, DeleteVertex>) {
          return {{"op", "delete_vertex"}, {"position", e.position}};
        } else if constexpr (std::is_same_v<T, SubstituteAttr>) {
          return {{"op", "substitute_attr"}, {"position", e.position}, {"attribute", e.attribute}};
        } else if constexpr (std::is_same_v<T, AddEdge>) {
          return {{"op", "add_edge"}, {"from", e.from}, {"to", e.to}};
        } else {
          return {{"op", "delete_edge"}, {"from", e.from}, {"to", e.to}};
        }
      },
      op);
}

}  // namespace sepx

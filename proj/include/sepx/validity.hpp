#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sepx/error.hpp"
#include "sepx/graph.hpp"

namespace sepx {

// Cell-space rules in the spirit of NAS benchmarks: one input vertex, one
// output vertex, acyclic, every vertex on an input-to-output path, bounded
// order and edge count.
struct DagIoRules {
  Attr input_attr = 1;
  Attr output_attr = 2;
  std::size_t max_order = 7;
  std::size_t max_edges = 9;
};

inline bool is_dag_io(const AttributedGraph& graph, const DagIoRules& rules) {
  const AttributedGraph g = strip_nulls(graph);
  const std::size_t n = g.order();
  if (n < 2 || n > rules.max_order || g.edge_count() > rules.max_edges) return false;

  int input = -1, output = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const Attr a = g.attrs()[i];
    if (a == rules.input_attr) {
      if (input >= 0) return false;
      input = static_cast<int>(i);
    } else if (a == rules.output_attr) {
      if (output >= 0) return false;
      output = static_cast<int>(i);
    }
  }
  if (input < 0 || output < 0) return false;

  std::vector<std::vector<int>> succ(n), pred(n);
  std::vector<int> indegree(n, 0);
  for (const auto& e : g.edges()) {
    succ[e.from].push_back(e.to);
    pred[e.to].push_back(e.from);
    ++indegree[e.to];
  }

  // Kahn's algorithm: acyclic iff every vertex gets emitted.
  std::vector<int> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
  }
  std::size_t emitted = 0;
  while (!ready.empty()) {
    const int v = ready.back();
    ready.pop_back();
    ++emitted;
    for (int w : succ[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  if (emitted != n) return false;

  auto reach = [n](int start, const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return seen;
  };
  const auto from_input = reach(input, succ);
  const auto to_output = reach(output, pred);
  for (std::size_t i = 0; i < n; ++i) {
    if (!from_input[i] || !to_output[i]) return false;
  }
  return true;
}

enum class ValidityKind { unconstrained, dag_io, custom };

class ValidityPredicate {
 public:
  ValidityPredicate() = default;

  static ValidityPredicate unconstrained() { return {}; }

  static ValidityPredicate dag_io(DagIoRules rules = {}) {
    ValidityPredicate p;
    p.kind_ = ValidityKind::dag_io;
    p.rules_ = rules;
    return p;
  }

  static ValidityPredicate custom(std::function<bool(const AttributedGraph&)> fn) {
    if (!fn) throw InputError("custom validity predicate is empty");
    ValidityPredicate p;
    p.kind_ = ValidityKind::custom;
    p.custom_ = std::move(fn);
    return p;
  }

  bool operator()(const AttributedGraph& g) const {
    switch (kind_) {
      case ValidityKind::unconstrained:
        return true;
      case ValidityKind::dag_io:
        return is_dag_io(g, rules_);
      case ValidityKind::custom:
        return custom_(g);
    }
    return false;
  }

  ValidityKind kind() const { return kind_; }
  const DagIoRules& rules() const { return rules_; }

 private:
  ValidityKind kind_ = ValidityKind::unconstrained;
  DagIoRules rules_;
  std::function<bool(const AttributedGraph&)> custom_;
};

}  // namespace sepx

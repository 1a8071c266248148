#pragma once

#include <random>
#include <vector>

#include "sepx/graph.hpp"
#include "sepx/random.hpp"

namespace testing_support {

// Order uniform in [min_order, max_order], attributes uniform in
// {1..alphabet}, each ordered pair an edge with probability `density`.
inline sepx::AttributedGraph random_graph(sepx::Rng& rng, int max_order, int alphabet = 3,
                                          double density = 0.3, int min_order = 1) {
  std::uniform_int_distribution<int> order(min_order, max_order);
  std::uniform_int_distribution<int> attr(1, alphabet);
  std::bernoulli_distribution edge(density);
  const int n = order(rng);
  std::vector<sepx::Attr> attrs(n);
  for (auto& a : attrs) a = attr(rng);
  std::vector<sepx::Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && edge(rng)) edges.push_back({i, j});
    }
  }
  return sepx::AttributedGraph(std::move(attrs), std::move(edges));
}

}  // namespace testing_support

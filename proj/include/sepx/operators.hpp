#pragma once

// Variation operators on attributed graphs: shortest-edit-path (SEP)
// crossover in its half-path and entrywise forms, standard crossover under a
// random vertex alignment, entrywise mutation, and the validity/retry wrapper.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sepx/edit.hpp"
#include "sepx/error.hpp"
#include "sepx/ged.hpp"
#include "sepx/graph.hpp"
#include "sepx/random.hpp"
#include "sepx/validity.hpp"

namespace sepx {

enum class CrossoverMode { sep_half, sep_bernoulli, standard };

// How the shuffled shortest edit path is turned into a sequence before the
// first half is applied.
enum class EditOrdering {
  // Shuffle, then defer any edit whose prerequisite has not appeared yet: an
  // edge insertion waits for the insertion of its endpoints, a vertex
  // deletion waits for the deletion of its incident edges. Every prefix is
  // then a valid edit sequence.
  dependency_aware,
  // Plain shuffle. Stranded edges are dropped by the null rule.
  uniform,
};

struct OperatorConfig {
  CrossoverMode crossover_mode = CrossoverMode::sep_half;
  EditOrdering sep_ordering = EditOrdering::dependency_aware;
  // Per-entry mutation probability; unset means 1/(n(n-1)) for the extended order n.
  std::optional<double> mutation_rate;
  std::vector<Attr> alphabet{1, 2, 3};
  int max_retries = 50;
  ValidityPredicate validity;
  // Random tie-breaking draws the shortest edit path uniformly among the
  // optimal alignments.
  GedOptions ged{.tie_break = TieBreak::random};

  void validate() const {
    if (mutation_rate && !(*mutation_rate > 0.0 && *mutation_rate <= 1.0)) {
      throw InputError("mutation rate must lie in (0, 1]");
    }
    if (max_retries < 1) throw InputError("max_retries must be at least 1");
    if (alphabet.empty()) throw InputError("attribute alphabet is empty");
    for (Attr a : alphabet) {
      if (a <= 0) throw InputError("attribute alphabet must hold positive integers");
    }
  }
};

inline double default_mutation_rate(std::size_t n) {
  return n < 2 ? 1.0 : 1.0 / static_cast<double>(n * (n - 1));
}

// Entrywise recombination: each entry comes from `a` or `b` with probability 0.5.
inline AaMatrix recombine(const AaMatrix& a, const AaMatrix& b, Rng& rng) {
  if (a.order() != b.order()) throw InputError("recombine: order mismatch");
  AaMatrix out = a;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < a.order(); ++i) {
    for (std::size_t j = 0; j < a.order(); ++j) {
      if (coin(rng)) out.at(i, j) = b.at(i, j);
    }
  }
  return out;
}

inline std::vector<EditOp> order_edit_path(std::vector<EditOp> shuffled, EditOrdering ordering) {
  if (ordering == EditOrdering::uniform) return shuffled;

  std::vector<int> vertex_adds, edge_deletes_at;
  for (const auto& op : shuffled) {
    if (const auto* d = std::get_if<DeleteEdge>(&op)) {
      const int hi = std::max(d->from, d->to) + 1;
      if (static_cast<int>(edge_deletes_at.size()) < hi) edge_deletes_at.resize(hi, 0);
      ++edge_deletes_at[d->from];
      ++edge_deletes_at[d->to];
    } else if (const auto* a = std::get_if<AddVertex>(&op)) {
      if (static_cast<int>(vertex_adds.size()) <= a->position) {
        vertex_adds.resize(a->position + 1, 0);
      }
      vertex_adds[a->position] = 1;
    }
  }
  auto count_at = [](const std::vector<int>& v, int i) {
    return i < static_cast<int>(v.size()) ? v[i] : 0;
  };
  std::vector<int> added = vertex_adds;        // pending vertex insertions
  std::vector<int> open_deletes = edge_deletes_at;  // pending incident edge deletions

  auto ready = [&](const EditOp& op) {
    if (const auto* e = std::get_if<AddEdge>(&op)) {
      return count_at(added, e->from) == 0 && count_at(added, e->to) == 0;
    }
    if (const auto* d = std::get_if<DeleteVertex>(&op)) {
      return count_at(open_deletes, d->position) == 0;
    }
    return true;
  };
  auto emit = [&](const EditOp& op, std::vector<EditOp>& out) {
    if (const auto* a = std::get_if<AddVertex>(&op)) {
      added[a->position] = 0;
    } else if (const auto* d = std::get_if<DeleteEdge>(&op)) {
      --open_deletes[d->from];
      --open_deletes[d->to];
    }
    out.push_back(op);
  };

  std::vector<EditOp> out;
  std::vector<EditOp> pending;
  out.reserve(shuffled.size());
  for (auto& op : shuffled) {
    pending.push_back(std::move(op));
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (auto it = pending.begin(); it != pending.end(); ++it) {
        if (ready(*it)) {
          EditOp next = std::move(*it);
          pending.erase(it);
          emit(next, out);
          progressed = true;
          break;
        }
      }
    }
  }
  // Unreachable for paths produced by edits_from_alignment; kept total anyway.
  for (auto& op : pending) out.push_back(std::move(op));
  return out;
}

// Offspring matrix (aligned frame, nulls kept) from the first ceil(d/2) edits
// of the shuffled shortest edit path.
inline AaMatrix sep_half_matrix(const AaMatrix& a1, std::vector<EditOp> path, Rng& rng,
                                EditOrdering ordering) {
  std::shuffle(path.begin(), path.end(), rng);
  path = order_edit_path(std::move(path), ordering);
  const std::size_t take = (path.size() + 1) / 2;
  AaMatrix out = a1;
  for (std::size_t i = 0; i < take; ++i) apply_edit(out, path[i]);
  return out;
}

inline AttributedGraph sep_crossover(const AttributedGraph& g1, const AttributedGraph& g2, Rng& rng,
                                     const GedOptions& ged_opts = {},
                                     EditOrdering ordering = EditOrdering::dependency_aware) {
  GedOptions opts = ged_opts;
  if (opts.tie_break == TieBreak::random) opts.tie_seed = rng();
  const GedResult r = ged_exact(g1, g2, opts);
  if (r.distance == 0) return g1;
  const AaMatrix a1 = to_aa_matrix(extend_with_nulls(g1, r.alignment.size()));
  return strip_nulls(from_aa_matrix(sep_half_matrix(a1, r.edits, rng, ordering)));
}

inline AttributedGraph sep_bernoulli_crossover(const AttributedGraph& g1, const AttributedGraph& g2,
                                               Rng& rng, const GedOptions& ged_opts = {}) {
  GedOptions opts = ged_opts;
  if (opts.tie_break == TieBreak::random) opts.tie_seed = rng();
  const GedResult r = ged_exact(g1, g2, opts);
  const AlignedPair m = aligned_matrices(g1, g2, r);
  return strip_nulls(from_aa_matrix(recombine(m.first, m.second_aligned, rng)));
}

inline Permutation random_permutation(std::size_t n, Rng& rng) {
  std::vector<int> map(n);
  std::iota(map.begin(), map.end(), 0);
  std::shuffle(map.begin(), map.end(), rng);
  return Permutation(std::move(map));
}

// Offspring matrix in the frame of `a1`; `a2` is conjugated by a uniformly
// random permutation first.
inline AaMatrix standard_crossover_matrix(const AaMatrix& a1, const AaMatrix& a2, Rng& rng) {
  const Permutation p = random_permutation(a2.order(), rng);
  return recombine(a1, permute(a2, p), rng);
}

inline AttributedGraph standard_crossover(const AttributedGraph& g1, const AttributedGraph& g2,
                                          Rng& rng) {
  const std::size_t n = std::max(g1.order(), g2.order());
  const AaMatrix a1 = to_aa_matrix(extend_with_nulls(g1, n));
  const AaMatrix a2 = to_aa_matrix(extend_with_nulls(g2, n));
  return strip_nulls(from_aa_matrix(standard_crossover_matrix(a1, a2, rng)));
}

// Alters each entry with probability `rate`: off-diagonal entries flip,
// diagonal entries move to a different value of alphabet + {null}.
inline AaMatrix mutate_matrix(const AaMatrix& m, double rate, std::span<const Attr> alphabet,
                              Rng& rng) {
  AaMatrix out = m;
  std::vector<Attr> choices;
  for (std::size_t i = 0; i < m.order(); ++i) {
    for (std::size_t j = 0; j < m.order(); ++j) {
      if (!(uniform01(rng) < rate)) continue;
      if (i != j) {
        out.at(i, j) = 1 - out.at(i, j);
        continue;
      }
      const Attr current = out.at(i, i);
      choices.clear();
      if (current != kNullAttr) choices.push_back(kNullAttr);
      for (Attr a : alphabet) {
        if (a != current && std::find(choices.begin(), choices.end(), a) == choices.end()) {
          choices.push_back(a);
        }
      }
      if (!choices.empty()) out.at(i, i) = choices[uniform_index(rng, choices.size())];
    }
  }
  return out;
}

// One null vertex of headroom keeps vertex insertion reachable.
inline AttributedGraph mutate(const AttributedGraph& g1, const OperatorConfig& cfg, Rng& rng) {
  const AaMatrix m = to_aa_matrix(extend_with_nulls(g1, g1.order() + 1));
  const double rate = cfg.mutation_rate.value_or(default_mutation_rate(m.order()));
  if (rate < 0.0 || rate > 1.0) throw InputError("mutation rate must lie in [0, 1]");
  return strip_nulls(from_aa_matrix(mutate_matrix(m, rate, cfg.alphabet, rng)));
}

inline AttributedGraph crossover(const AttributedGraph& g1, const AttributedGraph& g2,
                                 CrossoverMode mode, const OperatorConfig& cfg, Rng& rng) {
  switch (mode) {
    case CrossoverMode::sep_half:
      return sep_crossover(g1, g2, rng, cfg.ged, cfg.sep_ordering);
    case CrossoverMode::sep_bernoulli:
      return sep_bernoulli_crossover(g1, g2, rng, cfg.ged);
    case CrossoverMode::standard:
      return standard_crossover(g1, g2, rng);
  }
  throw InputError("unknown crossover mode");
}

// Calls `op` until it yields an offspring that passes `validity` and is not
// isomorphic to any parent. Empty after `max_retries` failed attempts.
template <class Op>
std::optional<AttributedGraph> vary_with_retry(std::span<const AttributedGraph> parents, Op&& op,
                                               const ValidityPredicate& validity, int max_retries,
                                               const GedOptions& ged_opts = {}) {
  if (max_retries < 1) throw InputError("max_retries must be at least 1");
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    AttributedGraph child = op();
    if (!validity(child)) continue;
    const bool distinct = std::none_of(parents.begin(), parents.end(), [&](const auto& p) {
      return is_isomorphic(child, p, ged_opts);
    });
    if (distinct) return child;
  }
  return std::nullopt;
}

}  // namespace sepx

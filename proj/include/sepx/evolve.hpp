#pragma once

// Regularized Evolution (aging evolution) over attributed graphs with
// pluggable fitness and variation schedule.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sepx/error.hpp"
#include "sepx/ged.hpp"
#include "sepx/graph.hpp"
#include "sepx/operators.hpp"
#include "sepx/random.hpp"
#include "sepx/validity.hpp"

namespace sepx {

enum class Direction { minimize, maximize };

struct Evaluation {
  double fitness = 0.0;
  std::optional<int> target_distance;  // exact GED to the target when one is known
};

class Fitness {
 public:
  using Fn = std::function<Evaluation(const AttributedGraph&, Rng&)>;

  Fitness() = default;
  Fitness(std::string name, Fn fn, Direction direction,
          std::optional<AttributedGraph> target = std::nullopt)
      : name_(std::move(name)),
        fn_(std::move(fn)),
        direction_(direction),
        target_(std::move(target)) {}

  explicit operator bool() const { return static_cast<bool>(fn_); }

  Evaluation operator()(const AttributedGraph& g, Rng& noise) const { return fn_(g, noise); }

  bool better(double a, double b) const {
    return direction_ == Direction::minimize ? a < b : a > b;
  }

  const std::string& name() const { return name_; }
  Direction direction() const { return direction_; }
  const std::optional<AttributedGraph>& target() const { return target_; }

 private:
  std::string name_;
  Fn fn_;
  Direction direction_ = Direction::minimize;
  std::optional<AttributedGraph> target_;
};

inline Fitness fitness_ged_to_target(AttributedGraph target, GedOptions ged = {}) {
  auto fn = [target, ged](const AttributedGraph& g, Rng&) {
    const int d = ged_distance(g, target, ged);
    return Evaluation{static_cast<double>(d), d};
  };
  return Fitness("ged", std::move(fn), Direction::minimize, std::move(target));
}

// GED to the target plus Gaussian noise redrawn on every evaluation.
inline Fitness fitness_noisy_ged(AttributedGraph target, double noise_sd, GedOptions ged = {}) {
  if (!(noise_sd >= 0.0)) throw InputError("noise standard deviation must be nonnegative");
  auto fn = [target, ged, noise_sd](const AttributedGraph& g, Rng& noise) {
    const int d = ged_distance(g, target, ged);
    double value = d;
    if (noise_sd > 0.0) value += std::normal_distribution<double>(0.0, noise_sd)(noise);
    return Evaluation{value, d};
  };
  return Fitness("noisy-ged", std::move(fn), Direction::minimize, std::move(target));
}

enum class Schedule { random_search, mutation_only, std_x_alternating, sep_x_alternating };

inline const char* schedule_name(Schedule s) {
  switch (s) {
    case Schedule::random_search: return "random";
    case Schedule::mutation_only: return "mutation";
    case Schedule::std_x_alternating: return "std-x";
    case Schedule::sep_x_alternating: return "sep-x";
  }
  return "?";
}

// Random genotypes: order uniform in [min_order, max_order], attributes
// uniform over the alphabet, each ordered pair an edge with `edge_density`,
// rejected until valid.
struct InitConfig {
  double edge_density = 0.3;
  std::size_t min_order = 2;
  std::size_t max_order = 7;
  std::size_t max_attempts = 10'000'000;
};

inline AttributedGraph sample_genotype(const InitConfig& init, std::span<const Attr> alphabet,
                                       const ValidityPredicate& validity, Rng& rng) {
  if (alphabet.empty()) throw InputError("attribute alphabet is empty");
  if (init.min_order > init.max_order) throw InputError("init min_order exceeds max_order");
  std::uniform_int_distribution<std::size_t> order_dist(init.min_order, init.max_order);
  std::bernoulli_distribution edge(init.edge_density);
  for (std::size_t attempt = 0; attempt < init.max_attempts; ++attempt) {
    const std::size_t n = order_dist(rng);
    std::vector<Attr> attrs(n);
    for (auto& a : attrs) a = alphabet[uniform_index(rng, alphabet.size())];
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && edge(rng)) edges.push_back({static_cast<int>(i), static_cast<int>(j)});
      }
    }
    AttributedGraph g(std::move(attrs), std::move(edges));
    if (validity(g)) return g;
  }
  throw Error("no valid genotype found after " + std::to_string(init.max_attempts) +
              " random draws");
}

struct Individual {
  AttributedGraph genotype;
  double fitness = 0.0;
  std::optional<int> target_distance;
  std::uint64_t birth_index = 0;
};

struct RunConfig {
  std::size_t population_size = 100;
  std::size_t tournament_size = 10;
  std::size_t max_evaluations = 10000;
  Schedule schedule = Schedule::sep_x_alternating;
  Fitness fitness;
  std::uint64_t seed = kDefaultSeed;
  OperatorConfig operators;
  InitConfig init;
  // Second-parent redraws when both tournaments return the same individual.
  int parent_resample_limit = 10;
  // Mutation is redrawn until valid; past this limit the parent is copied.
  int mutation_retry_limit = 1000;

  void validate() const {
    if (!fitness) throw InputError("run configuration has no fitness function");
    if (population_size < 1) throw InputError("population size must be at least 1");
    if (tournament_size < 1 || tournament_size > population_size) {
      throw InputError("tournament size must lie in [1, population size]");
    }
    if (max_evaluations < population_size) {
      throw InputError("max evaluations must be at least the population size");
    }
    if (parent_resample_limit < 0 || mutation_retry_limit < 1) {
      throw InputError("retry limits must be positive");
    }
    operators.validate();
  }
};

enum class OperatorUsed { initial, random, mutation, std_crossover, sep_crossover };

inline const char* operator_name(OperatorUsed op) {
  switch (op) {
    case OperatorUsed::initial: return "initial";
    case OperatorUsed::random: return "random";
    case OperatorUsed::mutation: return "mutation";
    case OperatorUsed::std_crossover: return "std_x";
    case OperatorUsed::sep_crossover: return "sep_x";
  }
  return "?";
}

struct EvalRecord {
  std::size_t eval = 0;  // 1-based evaluation count
  double best_fitness = 0.0;
  double offspring_fitness = 0.0;
  OperatorUsed op = OperatorUsed::initial;
};

// Parent statistics of one crossover step. Edge distances are the d_e
// components of the GED alignments.
struct CrossoverEvent {
  std::size_t eval = 0;
  int d_opt_p1 = 0;
  int d_p1_p2 = 0;
  int n1_p1 = 0;
  int n1_p2 = 0;
  bool accepted = false;
};

struct FrequencyCell {
  int a = 0;
  int b = 0;
  std::size_t count = 0;
  double frequency = 0.0;
};

struct ParentStats {
  std::size_t events = 0;
  std::vector<FrequencyCell> d_table;   // (d_opt_p1, d_p1_p2)
  std::vector<FrequencyCell> n1_table;  // (n1_p1, n1_p2)
};

inline ParentStats collect_parent_stats(std::span<const CrossoverEvent> events) {
  std::map<std::pair<int, int>, std::size_t> d_counts, n_counts;
  for (const auto& e : events) {
    ++d_counts[{e.d_opt_p1, e.d_p1_p2}];
    ++n_counts[{e.n1_p1, e.n1_p2}];
  }
  ParentStats stats;
  stats.events = events.size();
  auto table = [&](const auto& counts) {
    std::vector<FrequencyCell> out;
    for (const auto& [key, count] : counts) {
      out.push_back({key.first, key.second, count,
                     static_cast<double>(count) / static_cast<double>(events.size())});
    }
    return out;
  };
  stats.d_table = table(d_counts);
  stats.n1_table = table(n_counts);
  return stats;
}

struct RunLog {
  std::uint64_t seed = 0;
  std::vector<EvalRecord> records;
  std::vector<CrossoverEvent> crossover_events;
  ParentStats parent_stats;
  bool success = false;
  std::optional<std::size_t> hitting_time;
  Individual best;
  std::vector<Individual> final_population;
  std::size_t skipped_crossovers = 0;
  std::size_t mutation_copies = 0;
  std::map<std::string, std::string> metadata;
};

namespace detail {

class Evolution {
 public:
  explicit Evolution(const RunConfig& cfg)
      : cfg_(cfg),
        init_rng_(make_rng(cfg.seed, {stream::kInit})),
        select_rng_(make_rng(cfg.seed, {stream::kSelect})),
        vary_rng_(make_rng(cfg.seed, {stream::kVary})),
        noise_rng_(make_rng(cfg.seed, {stream::kNoise})) {}

  RunLog run() {
    log_.seed = cfg_.seed;
    log_.metadata = {
        {"schedule", schedule_name(cfg_.schedule)},
        {"alternation", "crossover on even steps, mutation on odd steps"},
        {"parent_selection", "two independent tournaments, distinct winners"},
        {"fitness", cfg_.fitness.name()},
    };
    for (std::size_t i = 0; i < cfg_.population_size; ++i) {
      add(sample(), OperatorUsed::initial);
    }
    for (std::size_t step = 0; evaluations_ < cfg_.max_evaluations; ++step) {
      auto [child, op] = vary(step);
      add(std::move(child), op);
      population_.pop_front();
    }
    log_.parent_stats = collect_parent_stats(log_.crossover_events);
    log_.final_population.assign(population_.begin(), population_.end());
    return std::move(log_);
  }

 private:
  AttributedGraph sample() {
    return sample_genotype(cfg_.init, cfg_.operators.alphabet, cfg_.operators.validity, init_rng_);
  }

  void add(AttributedGraph g, OperatorUsed op) {
    Evaluation ev;
    try {
      ev = cfg_.fitness(g, noise_rng_);
    } catch (const std::exception& e) {
      throw Error("fitness evaluation " + std::to_string(evaluations_ + 1) + " failed: " +
                  e.what());
    }
    Individual ind{std::move(g), ev.fitness, ev.target_distance, evaluations_};
    ++evaluations_;
    if (evaluations_ == 1 || cfg_.fitness.better(ind.fitness, log_.best.fitness)) log_.best = ind;
    if (ev.target_distance == 0 && !log_.success) {
      log_.success = true;
      log_.hitting_time = evaluations_;
    }
    log_.records.push_back({evaluations_, log_.best.fitness, ind.fitness, op});
    population_.push_back(std::move(ind));
  }

  const Individual& tournament() {
    const std::size_t n = population_.size();
    if (order_.size() != n) {
      order_.resize(n);
      std::iota(order_.begin(), order_.end(), std::size_t{0});
    }
    const Individual* winner = nullptr;
    for (std::size_t t = 0; t < cfg_.tournament_size; ++t) {
      const std::size_t j = t + uniform_index(select_rng_, n - t);
      std::swap(order_[t], order_[j]);
      const Individual& cand = population_[order_[t]];
      if (!winner || cfg_.fitness.better(cand.fitness, winner->fitness)) winner = &cand;
    }
    return *winner;
  }

  AttributedGraph mutate_valid(const AttributedGraph& parent) {
    for (int attempt = 0; attempt < cfg_.mutation_retry_limit; ++attempt) {
      AttributedGraph child = mutate(parent, cfg_.operators, vary_rng_);
      if (cfg_.operators.validity(child)) return child;
    }
    ++log_.mutation_copies;
    return parent;
  }

  std::pair<AttributedGraph, OperatorUsed> vary(std::size_t step) {
    if (cfg_.schedule == Schedule::random_search) return {sample(), OperatorUsed::random};
    const bool crossover_step = cfg_.schedule != Schedule::mutation_only && step % 2 == 0;
    if (!crossover_step) return {mutate_valid(tournament().genotype), OperatorUsed::mutation};

    const Individual& p1 = tournament();
    const Individual* p2 = &tournament();
    for (int r = 0; r < cfg_.parent_resample_limit && p2->birth_index == p1.birth_index; ++r) {
      p2 = &tournament();
    }
    if (p2->birth_index == p1.birth_index) {
      return {mutate_valid(p1.genotype), OperatorUsed::mutation};
    }

    const bool standard = cfg_.schedule == Schedule::std_x_alternating;
    const CrossoverMode mode =
        standard ? CrossoverMode::standard
                 : (cfg_.operators.crossover_mode == CrossoverMode::sep_bernoulli
                        ? CrossoverMode::sep_bernoulli
                        : CrossoverMode::sep_half);
    const std::array<AttributedGraph, 2> parents{p1.genotype, p2->genotype};
    auto child = vary_with_retry(
        std::span<const AttributedGraph>(parents),
        [&] { return crossover(parents[0], parents[1], mode, cfg_.operators, vary_rng_); },
        cfg_.operators.validity, cfg_.operators.max_retries, cfg_.operators.ged);

    if (const auto& target = cfg_.fitness.target()) {
      const GedOptions& ged = cfg_.operators.ged;
      log_.crossover_events.push_back({evaluations_ + 1, ged_exact(*target, parents[0], ged).d_e,
                                       ged_exact(parents[0], parents[1], ged).d_e,
                                       static_cast<int>(parents[0].edge_count()),
                                       static_cast<int>(parents[1].edge_count()),
                                       child.has_value()});
    }
    if (!child) {
      ++log_.skipped_crossovers;
      return {mutate_valid(parents[0]), OperatorUsed::mutation};
    }
    return {std::move(*child), standard ? OperatorUsed::std_crossover : OperatorUsed::sep_crossover};
  }

  const RunConfig& cfg_;
  Rng init_rng_, select_rng_, vary_rng_, noise_rng_;
  std::deque<Individual> population_;
  std::vector<std::size_t> order_;
  std::size_t evaluations_ = 0;
  RunLog log_;
};

}  // namespace detail

inline RunLog regularized_evolution(const RunConfig& cfg) {
  cfg.validate();
  return detail::Evolution(cfg).run();
}

}  // namespace sepx

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sepx/batch.hpp"
#include "sepx/evolve.hpp"

using namespace sepx;

namespace {

AttributedGraph small_target() {
  return AttributedGraph({1, 3, 4, 2}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

RunConfig base_config(Schedule schedule) {
  RunConfig cfg;
  cfg.population_size = 20;
  cfg.tournament_size = 5;
  cfg.max_evaluations = 200;
  cfg.schedule = schedule;
  cfg.seed = 7;
  cfg.operators.alphabet = {1, 2, 3, 4};
  cfg.operators.validity = ValidityPredicate::dag_io();
  cfg.init.max_order = 5;
  cfg.fitness = fitness_ged_to_target(small_target());
  return cfg;
}

}  // namespace

TEST(Fitness, GedToTarget) {
  const AttributedGraph t = small_target();
  const Fitness f = fitness_ged_to_target(t);
  Rng rng(1);
  EXPECT_EQ(f(t, rng).fitness, 0.0);
  EXPECT_EQ(f(permute(t, Permutation({3, 1, 0, 2})), rng).fitness, 0.0);
  EXPECT_EQ(f(AttributedGraph({1, 3, 4, 2}, {{0, 1}, {0, 2}, {1, 3}}), rng).fitness, 1.0);
  EXPECT_EQ(f.direction(), Direction::minimize);
}

TEST(Fitness, NoisyGed) {
  const AttributedGraph t = small_target();
  Rng rng(2);
  EXPECT_EQ(fitness_noisy_ged(t, 0.0)(t, rng).fitness, 0.0);
  EXPECT_THROW(fitness_noisy_ged(t, -1.0), InputError);
  const Fitness f = fitness_noisy_ged(t, 1.5);
  double sum = 0, sum_sq = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Evaluation e = f(t, rng);
    EXPECT_EQ(e.target_distance, 0);
    sum += e.fitness;
    sum_sq += e.fitness * e.fitness;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.06);
  EXPECT_NEAR(std::sqrt(sum_sq / n - mean * mean), 1.5, 0.05);
}

TEST(Init, SamplesValidGenotypes) {
  Rng rng(3);
  InitConfig init;
  const std::vector<Attr> alphabet{1, 2, 3};
  const auto validity = ValidityPredicate::dag_io();
  for (int i = 0; i < 50; ++i) {
    const AttributedGraph g = sample_genotype(init, alphabet, validity, rng);
    EXPECT_TRUE(validity(g));
  }
  init.max_attempts = 5;
  EXPECT_THROW(sample_genotype(init, alphabet, ValidityPredicate::custom([](const auto&) {
                                 return false;
                               }),
                               rng),
               Error);
}

TEST(RunConfig, Validation) {
  RunConfig cfg = base_config(Schedule::mutation_only);
  cfg.tournament_size = 21;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = base_config(Schedule::mutation_only);
  cfg.max_evaluations = 10;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = base_config(Schedule::mutation_only);
  cfg.fitness = Fitness();
  EXPECT_THROW(cfg.validate(), InputError);
}

TEST(Evolution, BudgetEqualToPopulationIsInitOnly) {
  RunConfig cfg = base_config(Schedule::mutation_only);
  cfg.max_evaluations = cfg.population_size;
  const RunLog log = regularized_evolution(cfg);
  EXPECT_EQ(log.records.size(), cfg.population_size);
  EXPECT_EQ(log.final_population.size(), cfg.population_size);
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    EXPECT_EQ(log.records[i].op, OperatorUsed::initial);
    EXPECT_EQ(log.final_population[i].birth_index, i);
  }
}

TEST(Evolution, LogInvariants) {
  for (Schedule s : {Schedule::random_search, Schedule::mutation_only,
                     Schedule::std_x_alternating, Schedule::sep_x_alternating}) {
    const RunConfig cfg = base_config(s);
    const RunLog log = regularized_evolution(cfg);
    ASSERT_EQ(log.records.size(), cfg.max_evaluations);
    for (std::size_t i = 1; i < log.records.size(); ++i) {
      EXPECT_LE(log.records[i].best_fitness, log.records[i - 1].best_fitness);
      EXPECT_EQ(log.records[i].eval, i + 1);
    }
    // Aging: the survivors are exactly the youngest population_size individuals.
    ASSERT_EQ(log.final_population.size(), cfg.population_size);
    for (std::size_t i = 0; i < cfg.population_size; ++i) {
      EXPECT_EQ(log.final_population[i].birth_index,
                cfg.max_evaluations - cfg.population_size + i);
      EXPECT_TRUE(cfg.operators.validity(log.final_population[i].genotype));
    }
    EXPECT_EQ(log.parent_stats.events, log.crossover_events.size());
    if (log.success) {
      EXPECT_EQ(log.records[*log.hitting_time - 1].offspring_fitness, 0.0);
    }
    EXPECT_EQ(log.metadata.at("schedule"), schedule_name(s));
  }
}

TEST(Evolution, ScheduleAlternatesCrossoverFirst) {
  const RunConfig cfg = base_config(Schedule::sep_x_alternating);
  const RunLog log = regularized_evolution(cfg);
  for (std::size_t i = cfg.population_size; i < log.records.size(); ++i) {
    const std::size_t step = i - cfg.population_size;
    if (step % 2 == 1) {
      EXPECT_EQ(log.records[i].op, OperatorUsed::mutation);
    }
    if (log.records[i].op == OperatorUsed::sep_crossover) {
      EXPECT_EQ(step % 2, 0u);
    }
  }
  EXPECT_GT(log.crossover_events.size(), 0u);
  for (const auto& e : log.crossover_events) {
    EXPECT_EQ((e.eval - cfg.population_size - 1) % 2, 0u);
  }
}

TEST(Evolution, MutationOnlyHasNoCrossoverEvents) {
  const RunLog log = regularized_evolution(base_config(Schedule::mutation_only));
  EXPECT_TRUE(log.crossover_events.empty());
  EXPECT_TRUE(log.parent_stats.d_table.empty());
  for (std::size_t i = 20; i < log.records.size(); ++i) {
    EXPECT_EQ(log.records[i].op, OperatorUsed::mutation);
  }
}

TEST(Evolution, FullTournamentPicksTheBest) {
  RunConfig cfg = base_config(Schedule::mutation_only);
  cfg.tournament_size = cfg.population_size;
  cfg.max_evaluations = cfg.population_size + 1;
  cfg.operators.mutation_rate = 1e-9;  // offspring equals its parent
  const RunLog log = regularized_evolution(cfg);
  double best = log.records[cfg.population_size - 1].best_fitness;
  EXPECT_EQ(log.records.back().offspring_fitness, best);
}

TEST(Evolution, Deterministic) {
  const RunConfig cfg = base_config(Schedule::sep_x_alternating);
  const RunLog a = regularized_evolution(cfg), b = regularized_evolution(cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].offspring_fitness, b.records[i].offspring_fitness);
    EXPECT_EQ(a.records[i].op, b.records[i].op);
  }
  for (std::size_t i = 0; i < a.final_population.size(); ++i) {
    EXPECT_EQ(a.final_population[i].genotype, b.final_population[i].genotype);
  }
}

TEST(Evolution, FitnessFailureAborts) {
  RunConfig cfg = base_config(Schedule::mutation_only);
  cfg.fitness = Fitness(
      "broken", [](const AttributedGraph&, Rng&) -> Evaluation { throw std::runtime_error("boom"); },
      Direction::minimize);
  EXPECT_THROW(regularized_evolution(cfg), Error);
}

TEST(ParentStats, Normalized) {
  const std::vector<CrossoverEvent> events{
      {1, 0, 2, 3, 4, true}, {3, 0, 2, 3, 5, true}, {5, 1, 1, 3, 4, false}};
  const ParentStats s = collect_parent_stats(events);
  EXPECT_EQ(s.events, 3u);
  ASSERT_EQ(s.d_table.size(), 2u);
  EXPECT_EQ(s.d_table[0].count, 2u);
  double total = 0;
  for (const auto& c : s.n1_table) total += c.frequency;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_TRUE(collect_parent_stats({}).d_table.empty());
}

TEST(Quantile, TypeSeven) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile({5}, 0.75), 5);
  EXPECT_THROW(quantile({}, 0.5), InputError);
}

TEST(Batch, SingleRunReportMatchesRun) {
  RunConfig cfg = base_config(Schedule::sep_x_alternating);
  const BatchReport report = run_batch(cfg, {1, 1, 50});
  RunConfig single = cfg;
  single.seed = run_seed(cfg.seed, 0);
  const RunLog log = regularized_evolution(single);
  ASSERT_TRUE(report.runs[0].has_value());
  ASSERT_EQ(report.checkpoints.size(), 4u);
  for (const auto& c : report.checkpoints) {
    EXPECT_EQ(c.median, log.records[c.eval - 1].best_fitness);
    EXPECT_EQ(c.q1, c.median);
    EXPECT_EQ(c.q3, c.median);
  }
  EXPECT_EQ(report.success_rate, log.success ? 1.0 : 0.0);
  EXPECT_EQ(report.parent_stats.events, log.crossover_events.size());
}

TEST(Batch, DeterministicAcrossThreadCounts) {
  RunConfig cfg = base_config(Schedule::std_x_alternating);
  const BatchReport a = run_batch(cfg, {4, 1, 50});
  const BatchReport b = run_batch(cfg, {4, 3, 50});
  EXPECT_EQ(a.final_best(), b.final_best());
  ASSERT_EQ(a.checkpoints.size(), b.checkpoints.size());
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
    EXPECT_EQ(a.checkpoints[i].median, b.checkpoints[i].median);
    EXPECT_EQ(a.checkpoints[i].success_rate, b.checkpoints[i].success_rate);
  }
}

TEST(Batch, FailedRunsAreRecorded) {
  RunConfig cfg = base_config(Schedule::mutation_only);
  cfg.init.max_attempts = 1;
  cfg.operators.validity = ValidityPredicate::custom([](const AttributedGraph&) { return false; });
  const BatchReport r = run_batch(cfg, {3, 1, 50});
  EXPECT_EQ(r.failures.size(), 3u);
  EXPECT_TRUE(r.checkpoints.empty());
}

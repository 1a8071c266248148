#pragma once

// Multi-run aggregation of Regularized Evolution runs.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sepx/error.hpp"
#include "sepx/evolve.hpp"
#include "sepx/random.hpp"

namespace sepx {

// Sample quantile with linear interpolation between order statistics
// (Hyndman-Fan type 7, the R and NumPy default).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

struct Checkpoint {
  std::size_t eval = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double success_rate = 0.0;
};

struct RunFailure {
  std::size_t run = 0;
  std::string message;
};

struct BatchOptions {
  std::size_t runs = 1;
  unsigned threads = 1;
  std::size_t report_every = 100;
};

struct BatchReport {
  Schedule schedule = Schedule::sep_x_alternating;
  std::uint64_t seed = 0;
  std::size_t requested_runs = 0;
  std::size_t max_evaluations = 0;
  std::vector<std::optional<RunLog>> runs;  // indexed by run id; empty on failure
  std::vector<RunFailure> failures;
  std::vector<Checkpoint> checkpoints;
  ParentStats parent_stats;
  double success_rate = 0.0;

  std::vector<double> final_best() const {
    std::vector<double> out;
    for (const auto& r : runs) {
      if (r) out.push_back(r->records.back().best_fitness);
    }
    return out;
  }
};

inline std::uint64_t run_seed(std::uint64_t master, std::size_t run) {
  return derive_seed(master, {stream::kRun, static_cast<std::uint64_t>(run)});
}

inline std::vector<std::size_t> checkpoint_evals(std::size_t max_evaluations,
                                                 std::size_t report_every) {
  std::vector<std::size_t> out;
  if (report_every > 0) {
    for (std::size_t e = report_every; e < max_evaluations; e += report_every) out.push_back(e);
  }
  out.push_back(max_evaluations);
  return out;
}

inline BatchReport run_batch(const RunConfig& cfg, const BatchOptions& opts) {
  if (opts.runs < 1) throw InputError("batch needs at least one run");
  cfg.validate();

  BatchReport report;
  report.schedule = cfg.schedule;
  report.seed = cfg.seed;
  report.requested_runs = opts.runs;
  report.max_evaluations = cfg.max_evaluations;
  report.runs.resize(opts.runs);
  std::vector<std::optional<std::string>> errors(opts.runs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < opts.runs; i = next++) {
      RunConfig run_cfg = cfg;
      run_cfg.seed = run_seed(cfg.seed, i);
      try {
        report.runs[i] = regularized_evolution(run_cfg);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, opts.runs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<CrossoverEvent> events;
  std::size_t completed = 0, successes = 0;
  for (std::size_t i = 0; i < opts.runs; ++i) {
    if (errors[i]) report.failures.push_back({i, *errors[i]});
    if (!report.runs[i]) continue;
    const RunLog& log = *report.runs[i];
    ++completed;
    if (log.success) ++successes;
    events.insert(events.end(), log.crossover_events.begin(), log.crossover_events.end());
  }
  report.parent_stats = collect_parent_stats(events);
  if (completed == 0) return report;
  report.success_rate = static_cast<double>(successes) / static_cast<double>(completed);

  for (std::size_t e : checkpoint_evals(cfg.max_evaluations, opts.report_every)) {
    std::vector<double> best;
    std::size_t hit = 0;
    for (const auto& r : report.runs) {
      if (!r) continue;
      best.push_back(r->records[e - 1].best_fitness);
      if (r->hitting_time && *r->hitting_time <= e) ++hit;
    }
    report.checkpoints.push_back({e, quantile(best, 0.5), quantile(best, 0.25),
                                  quantile(best, 0.75),
                                  static_cast<double>(hit) / static_cast<double>(completed)});
  }
  return report;
}

}  // namespace sepx

#pragma once

// Command-line front end: `sepx <subcommand> ...`.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sepx/batch.hpp"
#include "sepx/error.hpp"
#include "sepx/evolve.hpp"
#include "sepx/ged.hpp"
#include "sepx/graph_io.hpp"
#include "sepx/lbei.hpp"
#include "sepx/operators.hpp"
#include "sepx/random.hpp"
#include "sepx/validity.hpp"

namespace sepx::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kInput = 3, kCapacity = 4 };

inline constexpr const char* kSeedEnv = "SEPX_SEED";
inline constexpr const char* kThreadsEnv = "SEPX_THREADS";

inline constexpr const char* kRunsCsvHeader = "run_id,eval,best_fitness,operator";
inline constexpr const char* kStatsDCsvHeader = "d_opt_p1,d_p1_p2,count,frequency";
inline constexpr const char* kStatsN1CsvHeader = "n1_p1,n1_p2,count,frequency";

namespace detail {

template <class T>
T parse_env_number(const char* name, const std::string& text) {
  std::istringstream in(text);
  T value{};
  if (!(in >> value) || !in.eof()) {
    throw InputError(std::string("environment variable ") + name + "='" + text +
                     "' is not a valid number");
  }
  return value;
}

// Flag value if given, else the environment variable, else the fallback.
template <class T>
T resolve(const CLI::Option* flag, const T& flag_value, const char* env, T fallback) {
  if (flag->count() > 0) return flag_value;
  if (const char* text = std::getenv(env)) return parse_env_number<T>(env, text);
  return fallback;
}

inline std::vector<Attr> parse_alphabet(const std::string& text) {
  std::vector<Attr> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw InputError("--alphabet: '" + item + "' is not a positive integer");
    }
  }
  if (out.empty()) throw InputError("--alphabet is empty");
  return out;
}

inline ValidityPredicate make_validity(const std::string& kind, const DagIoRules& rules) {
  if (kind == "none") return ValidityPredicate::unconstrained();
  return ValidityPredicate::dag_io(rules);
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  return out;
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  auto file = open_output(path);
  file << text;
}

inline void write_stats_csv(std::ostream& out, const char* header,
                            const std::vector<FrequencyCell>& table) {
  out << header << '\n';
  for (const auto& c : table) {
    out << c.a << ',' << c.b << ',' << c.count << ',' << format_number(c.frequency) << '\n';
  }
}

inline nlohmann::json summary_json(const BatchReport& report, const RunConfig& cfg) {
  using nlohmann::json;
  json doc;
  doc["schedule"] = schedule_name(report.schedule);
  doc["fitness"] = cfg.fitness.name();
  doc["seed"] = report.seed;
  doc["runs"] = report.requested_runs;
  doc["evaluations"] = report.max_evaluations;
  doc["population"] = cfg.population_size;
  doc["tournament"] = cfg.tournament_size;
  doc["success_rate"] = report.success_rate;
  if (!report.checkpoints.empty()) {
    const Checkpoint& last = report.checkpoints.back();
    doc["final"] = {{"median", last.median}, {"q1", last.q1}, {"q3", last.q3}};
  }
  json hits = json::array(), finals = json::array(), seeds = json::array();
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const auto& r = report.runs[i];
    seeds.push_back(run_seed(report.seed, i));
    if (r && r->hitting_time) {
      hits.push_back(*r->hitting_time);
    } else {
      hits.push_back(nullptr);
    }
    if (r) {
      finals.push_back(r->records.back().best_fitness);
    } else {
      finals.push_back(nullptr);
    }
  }
  doc["run_seeds"] = seeds;
  doc["hitting_times"] = hits;
  doc["final_best"] = finals;
  json checkpoints = json::array();
  for (const auto& c : report.checkpoints) {
    checkpoints.push_back({{"eval", c.eval},
                           {"median", c.median},
                           {"q1", c.q1},
                           {"q3", c.q3},
                           {"success_rate", c.success_rate}});
  }
  doc["checkpoints"] = checkpoints;
  json failures = json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"run", f.run}, {"message", f.message}});
  }
  doc["failures"] = failures;
  doc["crossover_events"] = report.parent_stats.events;
  for (const auto& r : report.runs) {
    if (r) {
      doc["metadata"] = r->metadata;
      break;
    }
  }
  return doc;
}

}  // namespace detail

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"SEP crossover toolkit for evolutionary search over attributed graphs", "sepx"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::uint64_t seed_flag = kDefaultSeed;
  unsigned threads_flag = 1;
  std::function<void()> action;

  // ged
  auto* ged_cmd = app.add_subcommand("ged", "Exact graph edit distance between two graphs");
  std::string ged_a, ged_b;
  std::size_t ged_max_order = kDefaultMaxOrder;
  std::string ged_strategy = "auto";
  bool ged_json = true;
  ged_cmd->add_option("a", ged_a, "First graph (JSON file)")->required();
  ged_cmd->add_option("b", ged_b, "Second graph (JSON file)")->required();
  ged_cmd->add_option("--max-order", ged_max_order, "Refuse pairs above this order")
      ->check(CLI::Range(std::size_t{1}, kMaxSupportedOrder));
  ged_cmd->add_option("--strategy", ged_strategy, "Search strategy")
      ->check(CLI::IsMember({"auto", "bnb", "enumerate"}));
  ged_cmd->add_flag("--json,!--text", ged_json, "JSON output (default) or one plain line");
  ged_cmd->callback([&] {
    action = [&] {
      GedOptions opts;
      opts.max_order = ged_max_order;
      opts.strategy = ged_strategy == "enumerate" ? GedStrategy::enumerate
                      : ged_strategy == "bnb"     ? GedStrategy::branch_and_bound
                                                  : GedStrategy::automatic;
      const GedResult r = ged_exact(read_graph_file(ged_a), read_graph_file(ged_b), opts);
      if (ged_json) {
        out << ged_to_json(r).dump() << '\n';
      } else {
        out << "distance " << r.distance << " d_v " << r.d_v << " d_e " << r.d_e << '\n';
      }
    };
  });

  // crossover
  auto* cx_cmd = app.add_subcommand("crossover", "Offspring of two parent graphs");
  std::string cx_a, cx_b, cx_mode = "sep", cx_order = "dependency", cx_validity = "none";
  int cx_retries = 50;
  DagIoRules cx_rules;
  auto* cx_seed = cx_cmd->add_option("--seed", seed_flag, "Master seed");
  cx_cmd->add_option("a", cx_a, "First parent (JSON file)")->required();
  cx_cmd->add_option("b", cx_b, "Second parent (JSON file)")->required();
  cx_cmd->add_option("--mode", cx_mode, "Crossover operator")
      ->check(CLI::IsMember({"sep", "sep-bernoulli", "std"}));
  cx_cmd->add_option("--edit-order", cx_order, "Ordering of the shuffled edit path")
      ->check(CLI::IsMember({"dependency", "uniform"}));
  cx_cmd->add_option("--validity", cx_validity, "Offspring constraint")
      ->check(CLI::IsMember({"none", "dag-io"}));
  cx_cmd->add_option("--max-retries", cx_retries, "Attempts before giving up")
      ->check(CLI::PositiveNumber);
  cx_cmd->add_option("--max-order", cx_rules.max_order, "dag-io vertex cap");
  cx_cmd->add_option("--max-edges", cx_rules.max_edges, "dag-io edge cap");
  cx_cmd->callback([&] {
    action = [&] {
      const auto seed = detail::resolve(cx_seed, seed_flag, kSeedEnv, kDefaultSeed);
      const AttributedGraph g1 = read_graph_file(cx_a), g2 = read_graph_file(cx_b);
      OperatorConfig cfg;
      cfg.sep_ordering = cx_order == "uniform" ? EditOrdering::uniform
                                               : EditOrdering::dependency_aware;
      const CrossoverMode mode = cx_mode == "std"             ? CrossoverMode::standard
                                 : cx_mode == "sep-bernoulli" ? CrossoverMode::sep_bernoulli
                                                              : CrossoverMode::sep_half;
      Rng rng = make_rng(seed, {stream::kVary});
      if (cx_validity == "none") {
        out << graph_to_json(crossover(g1, g2, mode, cfg, rng)).dump() << '\n';
        return;
      }
      const std::array<AttributedGraph, 2> parents{g1, g2};
      auto child = vary_with_retry(
          std::span<const AttributedGraph>(parents),
          [&] { return crossover(g1, g2, mode, cfg, rng); },
          detail::make_validity(cx_validity, cx_rules), cx_retries, cfg.ged);
      if (!child) {
        throw Error("no valid offspring distinct from both parents after " +
                    std::to_string(cx_retries) + " attempts");
      }
      out << graph_to_json(*child).dump() << '\n';
    };
  });

  // mutate
  auto* mu_cmd = app.add_subcommand("mutate", "Mutated copy of a graph");
  std::string mu_a, mu_alphabet = "1,2,3";
  double mu_pm = 0.0;
  auto* mu_seed = mu_cmd->add_option("--seed", seed_flag, "Master seed");
  mu_cmd->add_option("a", mu_a, "Parent graph (JSON file)")->required();
  auto* mu_pm_opt = mu_cmd->add_option("--pm", mu_pm, "Per-entry mutation probability")
                        ->check(CLI::Range(0.0, 1.0));
  mu_cmd->add_option("--alphabet", mu_alphabet, "Comma-separated positive vertex attributes");
  mu_cmd->callback([&] {
    action = [&] {
      const auto seed = detail::resolve(mu_seed, seed_flag, kSeedEnv, kDefaultSeed);
      OperatorConfig cfg;
      cfg.alphabet = detail::parse_alphabet(mu_alphabet);
      if (mu_pm_opt->count() > 0) {
        if (mu_pm <= 0.0) throw InputError("--pm must be positive");
        cfg.mutation_rate = mu_pm;
      }
      Rng rng = make_rng(seed, {stream::kVary});
      out << graph_to_json(mutate(read_graph_file(mu_a), cfg, rng)).dump() << '\n';
    };
  });

  // simulate-lbei
  auto* lb_cmd = app.add_subcommand("simulate-lbei", "Monte Carlo LBEI grid as CSV");
  std::string lb_space = "nas101", lb_mode = "consistent", lb_out;
  SpaceParams lb_custom;
  std::size_t lb_trials = 100000;
  double lb_pm = 0.0;
  int lb_d1_max = -1, lb_d2_max = -1;
  auto* lb_seed = lb_cmd->add_option("--seed", seed_flag, "Master seed");
  auto* lb_threads = lb_cmd->add_option("--threads", threads_flag, "Worker threads")
                         ->check(CLI::PositiveNumber);
  lb_cmd->add_option("--space", lb_space, "Parameter preset")
      ->check(CLI::IsMember({"nas101", "nasnlp", "custom"}));
  auto* lb_n = lb_cmd->add_option("--n", lb_custom.n, "Order (custom space)");
  auto* lb_nopt = lb_cmd->add_option("--nopt1", lb_custom.n_opt_1, "Edges in the optimum");
  auto* lb_n11 = lb_cmd->add_option("--n11", lb_custom.n_1_1, "Edges in parent 1");
  auto* lb_n21 = lb_cmd->add_option("--n21", lb_custom.n_2_1, "Edges in parent 2");
  lb_cmd->add_option("--trials", lb_trials, "Trials per cell")->check(CLI::PositiveNumber);
  lb_cmd->add_option("--nse-mode", lb_mode, "Shared-entry count in the SEP term")
      ->check(CLI::IsMember({"consistent", "as-stated"}));
  auto* lb_pm_opt = lb_cmd->add_option("--pm", lb_pm, "Mutation rate (default 1/(n(n-1)))");
  lb_cmd->add_option("--d1-max", lb_d1_max, "Largest d1 (default: feasible maximum)");
  lb_cmd->add_option("--d2-max", lb_d2_max, "Largest d2 (default: feasible maximum)");
  lb_cmd->add_option("--out", lb_out, "Output CSV (default stdout)");
  lb_cmd->callback([&] {
    action = [&] {
      SpaceParams sp = lb_space == "nas101"   ? SpaceParams::nas101()
                       : lb_space == "nasnlp" ? SpaceParams::nasnlp()
                                              : lb_custom;
      if (lb_space != "custom") {
        if (lb_n->count()) sp.n = lb_custom.n;
        if (lb_nopt->count()) sp.n_opt_1 = lb_custom.n_opt_1;
        if (lb_n11->count()) sp.n_1_1 = lb_custom.n_1_1;
        if (lb_n21->count()) sp.n_2_1 = lb_custom.n_2_1;
      }
      sp.validate();
      GridOptions opts;
      opts.trials = lb_trials;
      opts.mode = lb_mode == "as-stated" ? NseMode::as_stated : NseMode::consistent;
      opts.seed = detail::resolve(lb_seed, seed_flag, kSeedEnv, kDefaultSeed);
      opts.threads = detail::resolve(lb_threads, threads_flag, kThreadsEnv, 1u);
      if (lb_pm_opt->count()) opts.mutation_rate = lb_pm;
      if (lb_d1_max >= 0) opts.d1_range = Range{0, lb_d1_max};
      if (lb_d2_max >= 0) opts.d2_range = Range{0, lb_d2_max};
      std::ostringstream csv;
      write_lbei_csv(csv, lbei_grid(sp, opts));
      detail::write_text(lb_out, csv.str(), out);
    };
  });

  // search
  auto* se_cmd = app.add_subcommand("search", "Regularized Evolution runs towards a target");
  std::string se_target, se_fitness = "ged", se_operator = "sep-x", se_out,
                         se_alphabet = "1,2,3,4,5", se_validity = "dag-io";
  double se_noise = 0.0;
  RunConfig se_cfg;
  BatchOptions se_batch;
  se_batch.runs = 50;
  DagIoRules se_rules;
  auto* se_seed = se_cmd->add_option("--seed", seed_flag, "Master seed");
  auto* se_threads = se_cmd->add_option("--threads", threads_flag, "Parallel runs")
                         ->check(CLI::PositiveNumber);
  se_cmd->add_option("--target", se_target, "Target graph (JSON file)")->required();
  se_cmd->add_option("--fitness", se_fitness, "Fitness function")
      ->check(CLI::IsMember({"ged", "noisy-ged"}));
  se_cmd->add_option("--noise-sd", se_noise, "Gaussian noise for noisy-ged")
      ->check(CLI::NonNegativeNumber);
  se_cmd->add_option("--operator", se_operator, "Variation schedule")
      ->check(CLI::IsMember({"mutation", "std-x", "sep-x", "random"}));
  se_cmd->add_option("--pop", se_cfg.population_size, "Population size")
      ->check(CLI::PositiveNumber);
  se_cmd->add_option("--tournament", se_cfg.tournament_size, "Tournament size")
      ->check(CLI::PositiveNumber);
  se_cmd->add_option("--evals", se_cfg.max_evaluations, "Evaluations per run")
      ->check(CLI::PositiveNumber);
  se_cmd->add_option("--runs", se_batch.runs, "Independent runs")->check(CLI::PositiveNumber);
  se_cmd->add_option("--report-every", se_batch.report_every, "Checkpoint spacing in summary");
  se_cmd->add_option("--alphabet", se_alphabet, "Comma-separated positive vertex attributes");
  se_cmd->add_option("--validity", se_validity, "Genotype constraint")
      ->check(CLI::IsMember({"none", "dag-io"}));
  se_cmd->add_option("--max-order", se_rules.max_order, "Vertex cap (also the init order cap)")
      ->check(CLI::Range(std::size_t{2}, kMaxSupportedOrder));
  se_cmd->add_option("--max-edges", se_rules.max_edges, "dag-io edge cap");
  se_cmd->add_option("--edge-density", se_cfg.init.edge_density, "Initial edge density")
      ->check(CLI::Range(0.0, 1.0));
  se_cmd->add_option("--out", se_out, "Output directory")->required();
  se_cmd->callback([&] {
    action = [&] {
      const AttributedGraph target = read_graph_file(se_target);
      se_cfg.seed = detail::resolve(se_seed, seed_flag, kSeedEnv, kDefaultSeed);
      se_batch.threads = detail::resolve(se_threads, threads_flag, kThreadsEnv, 1u);
      se_cfg.schedule = se_operator == "mutation" ? Schedule::mutation_only
                        : se_operator == "std-x"  ? Schedule::std_x_alternating
                        : se_operator == "random" ? Schedule::random_search
                                                  : Schedule::sep_x_alternating;
      se_cfg.operators.alphabet = detail::parse_alphabet(se_alphabet);
      se_cfg.operators.validity = detail::make_validity(se_validity, se_rules);
      se_cfg.init.max_order = se_rules.max_order;
      se_cfg.fitness = se_fitness == "noisy-ged" ? fitness_noisy_ged(target, se_noise)
                                                 : fitness_ged_to_target(target);
      const BatchReport report = run_batch(se_cfg, se_batch);

      const std::filesystem::path dir(se_out);
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw InputError("cannot create '" + se_out + "': " + ec.message());
      {
        auto runs = detail::open_output(dir / "runs.csv");
        runs << kRunsCsvHeader << '\n';
        for (std::size_t i = 0; i < report.runs.size(); ++i) {
          if (!report.runs[i]) continue;
          for (const auto& rec : report.runs[i]->records) {
            runs << i << ',' << rec.eval << ',' << format_number(rec.best_fitness) << ','
                 << operator_name(rec.op) << '\n';
          }
        }
      }
      {
        auto d = detail::open_output(dir / "stats_d.csv");
        detail::write_stats_csv(d, kStatsDCsvHeader, report.parent_stats.d_table);
        auto n1 = detail::open_output(dir / "stats_n1.csv");
        detail::write_stats_csv(n1, kStatsN1CsvHeader, report.parent_stats.n1_table);
      }
      {
        auto summary = detail::open_output(dir / "summary.json");
        summary << detail::summary_json(report, se_cfg).dump(2) << '\n';
      }
      out << schedule_name(report.schedule) << ": " << report.runs.size() - report.failures.size()
          << "/" << report.requested_runs << " runs, success rate "
          << format_number(report.success_rate);
      if (!report.checkpoints.empty()) {
        out << ", final median " << format_number(report.checkpoints.back().median);
      }
      out << '\n';
      for (const auto& f : report.failures) err << "run " << f.run << " failed: " << f.message << '\n';
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }
  try {
    action();
    return kOk;
  } catch (const CapacityError& e) {
    err << "sepx: capacity error: " << e.what() << '\n';
    return kCapacity;
  } catch (const InputError& e) {
    err << "sepx: input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    err << "sepx: error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace sepx::cli

#pragma once

// Monte Carlo estimates of the lower bounds of expected improvement (LBEI)
// in off-diagonal AA-matrix differences to the optimum for SEP crossover,
// standard crossover and mutation.
//
// d1 is the edge distance between the optimum and parent 1, d2 the edge
// distance between the two parents, both at their optimal alignments.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "sepx/error.hpp"
#include "sepx/random.hpp"

namespace sepx {

struct SpaceParams {
  int n = 7;
  int n_opt_1 = 9;  // off-diagonal ones in the optimum
  int n_1_1 = 9;    // ... in parent 1
  int n_2_1 = 9;    // ... in parent 2

  int pairs() const { return n * (n - 1); }
  int n_opt_0() const { return pairs() - n_opt_1; }
  int n_1_0() const { return pairs() - n_1_1; }
  int n_2_0() const { return pairs() - n_2_1; }

  void validate() const {
    if (n < 2) throw InputError("space order n must be at least 2");
    for (int ones : {n_opt_1, n_1_1, n_2_1}) {
      if (ones < 0 || ones > pairs()) {
        throw InputError("ones count " + std::to_string(ones) + " outside [0, n(n-1)]");
      }
    }
  }

  static SpaceParams nas101() { return {7, 9, 9, 9}; }
  static SpaceParams nasnlp() { return {12, 14, 11, 11}; }
};

// How the shared-entry count n_se enters the SEP bound.
//   as_stated:  n_se = max(n^2 - d1 - d2, 0)
//   consistent: n_se = max(n(n-1) - d1 - d2, 0)
enum class NseMode { consistent, as_stated };

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct Range {
  int lo = 0;
  int hi = 0;  // inclusive
};

// Largest d1 / d2 compatible with the ones counts of the space.
inline Range feasible_d1_range(const SpaceParams& sp) {
  return {0, std::min(sp.n_opt_1 + sp.n_1_1, sp.n_opt_0() + sp.n_1_0())};
}
inline Range feasible_d2_range(const SpaceParams& sp) {
  return {0, std::min(sp.n_1_1 + sp.n_2_1, sp.n_1_0() + sp.n_2_0())};
}

// Inverse-CDF sampler for Binomial(k, p).
class BinomialTable {
 public:
  BinomialTable(int k, double p) : k_(k) {
    if (k < 0) throw InputError("binomial trial count must be nonnegative");
    cdf_.resize(static_cast<std::size_t>(k) + 1);
    double acc = 0.0;
    for (int b = 0; b <= k; ++b) {
      double pmf;
      if (p <= 0.0) {
        pmf = b == 0 ? 1.0 : 0.0;
      } else if (p >= 1.0) {
        pmf = b == k ? 1.0 : 0.0;
      } else {
        pmf = std::exp(std::lgamma(k + 1.0) - std::lgamma(b + 1.0) - std::lgamma(k - b + 1.0) +
                       b * std::log(p) + (k - b) * std::log1p(-p));
      }
      acc += pmf;
      cdf_[b] = acc;
    }
    for (double& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  // u in [0, 1)
  int sample(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<int>(it - cdf_.begin()), k_);
  }

 private:
  int k_;
  std::vector<double> cdf_;
};

namespace detail {

inline void check_distance(int d, const SpaceParams& sp, const char* name) {
  if (d < 0 || d > sp.pairs()) {
    throw InputError(std::string(name) + " = " + std::to_string(d) + " outside [0, n(n-1)]");
  }
}

class Welford {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  Estimate estimate() const {
    if (count_ == 0) return {0.0, 0.0};
    const double var = count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
    return {mean_, std::sqrt(var / static_cast<double>(count_))};
  }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace detail

inline double default_rate(const SpaceParams& sp) { return 1.0 / sp.pairs(); }

// Deterministic part of the SEP bound, d1*d2 / (n(n-1) - n_se); empty when the
// denominator is nonpositive while the numerator is not zero.
inline std::optional<double> sepx_gain(int d1, int d2, const SpaceParams& sp, NseMode mode) {
  if (d1 == 0 || d2 == 0) return 0.0;
  const int total = mode == NseMode::as_stated ? sp.n * sp.n : sp.pairs();
  const int n_se = std::max(total - d1 - d2, 0);
  const int denom = sp.pairs() - n_se;
  if (denom <= 0) return std::nullopt;
  return static_cast<double>(d1) * d2 / denom;
}

// Expected offspring edge distance of standard crossover without the binomial part.
inline double stdx_shared_wrong(int d1, const SpaceParams& sp) {
  const double num = static_cast<double>(d1 + sp.n_1_1 - sp.n_opt_1) * sp.n_2_1 +
                     static_cast<double>(d1 + sp.n_1_0() - sp.n_opt_0()) * sp.n_2_0();
  return num / (2.0 * sp.pairs());
}

// Expected number of differing entries under a random alignment, rounded to
// the nearest integer trial count.
inline int stdx_binomial_trials(const SpaceParams& sp) {
  const double k = (static_cast<double>(sp.n_1_1) * sp.n_2_0() +
                    static_cast<double>(sp.n_1_0()) * sp.n_2_1) /
                   sp.pairs();
  return static_cast<int>(std::lround(k));
}

// All three estimators of one (d1, d2) cell driven by caller-supplied uniforms.
class CellKernel {
 public:
  CellKernel(int d1, int d2, const SpaceParams& sp, double mutation_rate, NseMode mode)
      : d1_(d1),
        sepx_gain_(sepx_gain(d1, d2, sp, mode)),
        stdx_gain_(d1 - stdx_shared_wrong(d1, sp)),
        half_d2_(d2, 0.5),
        half_stdx_(stdx_binomial_trials(sp), 0.5),
        flips_right_(sp.pairs() - d1, mutation_rate),
        keeps_wrong_(d1, 1.0 - mutation_rate) {}

  bool sepx_defined() const { return sepx_gain_.has_value(); }

  double sepx(double u) const {
    return std::max(*sepx_gain_ - half_d2_.sample(u), 0.0);
  }
  double stdx(double u) const { return std::max(stdx_gain_ - half_stdx_.sample(u), 0.0); }
  double muta(double u1, double u2) const {
    return std::max(static_cast<double>(d1_ - flips_right_.sample(u1) - keeps_wrong_.sample(u2)),
                    0.0);
  }

 private:
  int d1_;
  std::optional<double> sepx_gain_;
  double stdx_gain_;
  BinomialTable half_d2_;
  BinomialTable half_stdx_;
  BinomialTable flips_right_;
  BinomialTable keeps_wrong_;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline Estimate lbei_sepx(int d1, int d2, const SpaceParams& sp, std::size_t trials, Rng& rng,
                          NseMode mode = NseMode::consistent) {
  sp.validate();
  detail::check_distance(d1, sp, "d1");
  detail::check_distance(d2, sp, "d2");
  if (trials == 0) throw InputError("trials must be at least 1");
  const CellKernel kernel(d1, d2, sp, default_rate(sp), mode);
  if (!kernel.sepx_defined()) return {kNaN, kNaN};
  detail::Welford acc;
  for (std::size_t t = 0; t < trials; ++t) acc.add(kernel.sepx(uniform01(rng)));
  return acc.estimate();
}

inline Estimate lbei_stdx(int d1, const SpaceParams& sp, std::size_t trials, Rng& rng) {
  sp.validate();
  detail::check_distance(d1, sp, "d1");
  if (trials == 0) throw InputError("trials must be at least 1");
  const CellKernel kernel(d1, 0, sp, default_rate(sp), NseMode::consistent);
  detail::Welford acc;
  for (std::size_t t = 0; t < trials; ++t) acc.add(kernel.stdx(uniform01(rng)));
  return acc.estimate();
}

inline Estimate lbei_muta(int d1, const SpaceParams& sp, double mutation_rate, std::size_t trials,
                          Rng& rng) {
  sp.validate();
  detail::check_distance(d1, sp, "d1");
  if (!(mutation_rate > 0.0 && mutation_rate <= 1.0)) {
    throw InputError("mutation rate must lie in (0, 1]");
  }
  if (trials == 0) throw InputError("trials must be at least 1");
  const CellKernel kernel(d1, 0, sp, mutation_rate, NseMode::consistent);
  detail::Welford acc;
  for (std::size_t t = 0; t < trials; ++t) {
    const double u1 = uniform01(rng);
    acc.add(kernel.muta(u1, uniform01(rng)));
  }
  return acc.estimate();
}

struct LbeiCell {
  int d1 = 0;
  int d2 = 0;
  Estimate sepx;
  Estimate stdx;
  Estimate muta;
};

struct LbeiGrid {
  SpaceParams space;
  NseMode mode = NseMode::consistent;
  std::size_t trials = 0;
  double mutation_rate = 0.0;
  std::vector<LbeiCell> cells;  // row-major in (d1, d2)
};

struct GridOptions {
  std::optional<Range> d1_range;  // defaults to feasible_d1_range
  std::optional<Range> d2_range;  // defaults to feasible_d2_range
  std::size_t trials = 100000;
  NseMode mode = NseMode::consistent;
  std::optional<double> mutation_rate;  // defaults to 1/(n(n-1))
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

// Every cell draws from its own substream of (seed, d1, d2), shared by the
// three estimators so that their differences carry less noise. The grid is
// identical for any thread count.
inline LbeiGrid lbei_grid(const SpaceParams& sp, const GridOptions& opts) {
  sp.validate();
  const Range r1 = opts.d1_range.value_or(feasible_d1_range(sp));
  const Range r2 = opts.d2_range.value_or(feasible_d2_range(sp));
  for (const Range& r : {r1, r2}) {
    if (r.lo < 0 || r.hi > sp.pairs() || r.lo > r.hi) {
      throw InputError("grid range [" + std::to_string(r.lo) + ", " + std::to_string(r.hi) +
                       "] outside [0, n(n-1)]");
    }
  }
  if (opts.trials == 0) throw InputError("trials must be at least 1");
  const double rate = opts.mutation_rate.value_or(default_rate(sp));
  if (!(rate > 0.0 && rate <= 1.0)) throw InputError("mutation rate must lie in (0, 1]");

  LbeiGrid grid{sp, opts.mode, opts.trials, rate, {}};
  for (int d1 = r1.lo; d1 <= r1.hi; ++d1) {
    for (int d2 = r2.lo; d2 <= r2.hi; ++d2) grid.cells.push_back({d1, d2, {}, {}, {}});
  }

  auto fill = [&](LbeiCell& cell) {
    const CellKernel kernel(cell.d1, cell.d2, sp, rate, opts.mode);
    Rng rng = make_rng(opts.seed, {stream::kCell, static_cast<std::uint64_t>(cell.d1),
                                   static_cast<std::uint64_t>(cell.d2)});
    detail::Welford sepx, stdx, muta;
    for (std::size_t t = 0; t < opts.trials; ++t) {
      const double u1 = uniform01(rng);
      const double u2 = uniform01(rng);
      if (kernel.sepx_defined()) sepx.add(kernel.sepx(u1));
      stdx.add(kernel.stdx(u1));
      muta.add(kernel.muta(u1, u2));
    }
    cell.sepx = kernel.sepx_defined() ? sepx.estimate() : Estimate{kNaN, kNaN};
    cell.stdx = stdx.estimate();
    cell.muta = muta.estimate();
  };

  const unsigned workers = std::max(1U, std::min<unsigned>(opts.threads, grid.cells.size()));
  if (workers == 1) {
    for (auto& cell : grid.cells) fill(cell);
    return grid;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < grid.cells.size(); i = next++) fill(grid.cells[i]);
    });
  }
  for (auto& t : pool) t.join();
  return grid;
}

inline constexpr const char* kLbeiCsvHeader =
    "d1,d2,lbei_sepx,se_sepx,lbei_stdx,se_stdx,lbei_muta,se_muta";

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline void write_lbei_csv(std::ostream& out, const LbeiGrid& grid) {
  out << kLbeiCsvHeader << '\n';
  for (const auto& c : grid.cells) {
    out << c.d1 << ',' << c.d2 << ',' << format_number(c.sepx.mean) << ','
        << format_number(c.sepx.std_error) << ',' << format_number(c.stdx.mean) << ','
        << format_number(c.stdx.std_error) << ',' << format_number(c.muta.mean) << ','
        << format_number(c.muta.std_error) << '\n';
  }
}

// Share of cells with d1, d2 >= 1 where the comparison holds; cells whose
// SEP estimate is undefined count as not holding.
struct SignSummary {
  std::size_t cells = 0;
  std::size_t sepx_ge_muta = 0;
  std::size_t stdx_le_muta = 0;
};

inline SignSummary sign_summary(const LbeiGrid& grid) {
  SignSummary s;
  for (const auto& c : grid.cells) {
    if (c.d1 < 1 || c.d2 < 1) continue;
    ++s.cells;
    if (!std::isnan(c.sepx.mean) && c.sepx.mean - c.muta.mean >= 0.0) ++s.sepx_ge_muta;
    if (c.stdx.mean - c.muta.mean <= 0.0) ++s.stdx_le_muta;
  }
  return s;
}

}  // namespace sepx

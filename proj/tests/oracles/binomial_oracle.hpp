#pragma once

// Exact expectations of the LBEI quantities by summing over binomial
// outcomes, written from the defining formulas.

#include <algorithm>
#include <cmath>

namespace oracle {

inline double binomial_pmf(int k, int b, double p) {
  if (b < 0 || b > k) return 0.0;
  if (p == 0.0) return b == 0 ? 1.0 : 0.0;
  if (p == 1.0) return b == k ? 1.0 : 0.0;
  double c = 1.0;
  for (int i = 1; i <= b; ++i) c = c * (k - b + i) / i;
  return c * std::pow(p, b) * std::pow(1.0 - p, k - b);
}

// E[max(gain - B, 0)], B ~ Binomial(k, p).
inline double expected_positive_part(double gain, int k, double p) {
  double e = 0.0;
  for (int b = 0; b <= k; ++b) e += binomial_pmf(k, b, p) * std::max(gain - b, 0.0);
  return e;
}

// SEP: gain d1*d2 / (N - n_se), n_se from the shared-entry count `total`.
inline double sepx_exact(int n, int d1, int d2, bool consistent) {
  const int pairs = n * (n - 1);
  if (d1 == 0 || d2 == 0) return 0.0;
  const int total = consistent ? pairs : n * n;
  const int n_se = std::max(total - d1 - d2, 0);
  const double gain = static_cast<double>(d1) * d2 / (pairs - n_se);
  return expected_positive_part(gain, d2, 0.5);
}

inline double stdx_exact(int n, int d1, int nopt1, int n11, int n21) {
  const int pairs = n * (n - 1);
  const int nopt0 = pairs - nopt1, n10 = pairs - n11, n20 = pairs - n21;
  const double shared = ((d1 + n11 - nopt1) * static_cast<double>(n21) +
                         (d1 + n10 - nopt0) * static_cast<double>(n20)) /
                        (2.0 * pairs);
  const double k = (static_cast<double>(n11) * n20 + static_cast<double>(n10) * n21) / pairs;
  return expected_positive_part(d1 - shared, static_cast<int>(std::lround(k)), 0.5);
}

// Mutation: d1 - B(N - d1, p) - B(d1, 1 - p), clipped at zero.
inline double muta_exact(int n, int d1, double p) {
  const int pairs = n * (n - 1);
  double e = 0.0;
  for (int b1 = 0; b1 <= pairs - d1; ++b1) {
    const double w1 = binomial_pmf(pairs - d1, b1, p);
    if (w1 < 1e-300) continue;
    for (int b2 = 0; b2 <= d1; ++b2) {
      e += w1 * binomial_pmf(d1, b2, 1.0 - p) * std::max(d1 - b1 - b2, 0);
    }
  }
  return e;
}

}  // namespace oracle

#pragma once

// Aggregation helpers for the benchmark harness: mean, sample standard
// deviation, normal-approximation confidence intervals, and interpolated
// quantiles. All inputs are small (tens to hundreds of runs), so clarity
// beats numerical heroics; sums are accumulated in double.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace easi::bench {

inline constexpr double kZ95 = 1.96;  // two-sided 95% normal quantile

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0;
  double stddev = 0;  // sample (n - 1) form; 0 when count == 1
  double ci_lo = 0;   // mean -/+ kZ95 * stddev / sqrt(count)
  double ci_hi = 0;
};

inline std::optional<SummaryStats> summarize(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  SummaryStats s;
  s.count = xs.size();
  double total = 0;
  for (const double x : xs) total += x;
  s.mean = total / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0;
    for (const double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  const double half = kZ95 * s.stddev / std::sqrt(static_cast<double>(s.count));
  s.ci_lo = s.mean - half;
  s.ci_hi = s.mean + half;
  return s;
}

/// Linear-interpolation quantile of an ascending-sorted sample; q in [0, 1].
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty sample");
  if (!(q >= 0 && q <= 1)) throw std::invalid_argument("quantile_sorted: q must be in [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

inline double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  return quantile_sorted(xs, q);
}

}  // namespace easi::bench

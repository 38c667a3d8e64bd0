#pragma once

// Separation quality and convergence detection. The global system C = B A_t
// is a scaled permutation exactly when separation is perfect; the Amari
// index measures the distance from that set, invariant to row/column
// permutation and scaling. Metrics run in double regardless of the
// separator's datapath precision.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "easi/linalg.hpp"

namespace easi {

struct ConvergenceCriterion {
  double threshold = 0.05;   // Amari-index bound
  std::size_t window = 100;  // consecutive samples required below the bound

  friend bool operator==(const ConvergenceCriterion&, const ConvergenceCriterion&) = default;
};

inline void validate(const ConvergenceCriterion& criterion) {
  if (!(std::isfinite(criterion.threshold) && criterion.threshold > 0))
    throw std::invalid_argument("convergence criterion: threshold must be finite and > 0");
  if (criterion.window < 1)
    throw std::invalid_argument("convergence criterion: window must be >= 1");
}

struct RunRecord {
  std::vector<double> amari;  // one entry per processed sample
  std::optional<std::size_t> iterations_to_convergence;
  bool diverged = false;
};

namespace detail {

// Sums in sorted order so the result is independent of addend order; this
// makes the permutation invariance of the index exact, not approximate.
inline double ordered_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0;
  for (const double t : terms) total += t;
  return total;
}

}  // namespace detail

/// Amari performance index of a square matrix: 0 iff C is a permutation
/// times a nonsingular diagonal, growing toward 1 as cross-talk spreads
/// energy off the dominant entries. Returns 0 for n = 1 by convention.
inline double amari_index(const Mat<double>& c) {
  if (c.rows() != c.cols())
    throw std::invalid_argument("amari_index: matrix must be square, got " +
                                std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
  if (!all_finite(c)) throw std::invalid_argument("amari_index: non-finite entry");
  const std::size_t n = c.rows();
  if (n == 1) {
    if (c(0, 0) == 0) throw std::invalid_argument("amari_index: all-zero row");
    return 0;
  }

  const auto line_term = [n](auto entry) {
    double peak = 0;
    for (std::size_t k = 0; k < n; ++k) peak = std::max(peak, std::abs(entry(k)));
    if (peak == 0) return std::optional<double>();
    std::vector<double> ratios(n);
    for (std::size_t k = 0; k < n; ++k) ratios[k] = std::abs(entry(k)) / peak;
    return std::optional<double>(detail::ordered_sum(ratios) - 1.0);
  };

  std::vector<double> row_terms, col_terms;
  row_terms.reserve(n);
  col_terms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = line_term([&](std::size_t k) { return c(i, k); });
    if (!row) throw std::invalid_argument("amari_index: all-zero row");
    row_terms.push_back(*row);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = line_term([&](std::size_t k) { return c(k, j); });
    if (!col) throw std::invalid_argument("amari_index: all-zero column");
    col_terms.push_back(*col);
  }
  const double total = detail::ordered_sum(row_terms) + detail::ordered_sum(col_terms);
  return total / (2.0 * static_cast<double>(n) * static_cast<double>(n - 1));
}

inline constexpr double kCrosstalkFloorDb = -120.0;

/// Ratio of off-dominant to dominant energy in decibels, where the dominant
/// entry of each row is its largest magnitude. Perfect separation gives
/// -inf, reported as the kCrosstalkFloorDb floor to keep outputs finite.
inline double crosstalk_db(const Mat<double>& c) {
  if (c.rows() != c.cols()) throw std::invalid_argument("crosstalk_db: matrix must be square");
  if (!all_finite(c)) throw std::invalid_argument("crosstalk_db: non-finite entry");
  const std::size_t n = c.rows();
  double dominant = 0, off = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double peak = 0;
    std::size_t peak_j = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double mag = std::abs(c(i, j));
      if (mag > peak) {
        peak = mag;
        peak_j = j;
      }
    }
    if (peak == 0) throw std::invalid_argument("crosstalk_db: all-zero row");
    for (std::size_t j = 0; j < n; ++j) {
      const double e = c(i, j) * c(i, j);
      if (j == peak_j)
        dominant += e;
      else
        off += e;
    }
  }
  if (off == 0) return kCrosstalkFloorDb;
  return std::max(kCrosstalkFloorDb, 10.0 * std::log10(off / dominant));
}

/// First index t such that every value in [t, t + window) is below the
/// threshold; nullopt when no such window completes within the series.
inline std::optional<std::size_t> check_convergence(const std::vector<double>& series,
                                                    const ConvergenceCriterion& criterion) {
  validate(criterion);
  std::size_t run = 0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    run = series[t] < criterion.threshold ? run + 1 : 0;
    if (run == criterion.window) return t + 1 - criterion.window;
  }
  return std::nullopt;
}

inline std::optional<std::size_t> check_convergence(const RunRecord& record,
                                                    const ConvergenceCriterion& criterion) {
  return check_convergence(record.amari, criterion);
}

/// Streaming form of check_convergence: push values one sample at a time and
/// read hit() once it fires. Matches the batch scan index for index.
class ConvergenceScan {
 public:
  explicit ConvergenceScan(const ConvergenceCriterion& criterion) : criterion_(criterion) {
    validate(criterion_);
  }

  void push(double value) {
    run_ = value < criterion_.threshold ? run_ + 1 : 0;
    if (!hit_ && run_ == criterion_.window) hit_ = index_ + 1 - criterion_.window;
    ++index_;
  }

  const std::optional<std::size_t>& hit() const { return hit_; }

 private:
  ConvergenceCriterion criterion_;
  std::size_t run_ = 0;
  std::size_t index_ = 0;
  std::optional<std::size_t> hit_;
};

}  // namespace easi

#pragma once

// Synthetic mixtures for exercising the separator: n independent sources,
// an m x n mixing matrix A (m >= n), and an optional slow planar rotation of
// A that models a drifting environment. Stochastic draws are counter-based,
// so any (t, seed) pair yields the same sample regardless of call order.
// Everything here runs in double; the caller casts down to the separator's
// datapath precision at the boundary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "easi/linalg.hpp"
#include "easi/rng.hpp"

namespace easi {

enum class SourceKind { Uniform, Laplace, Sinusoid };

// Every source is normalized to zero mean and unit variance, so the shape
// parameters select a distribution family rather than a scale.
struct SourceSpec {
  SourceKind kind = SourceKind::Uniform;
  double half_width = 1.0;  // Uniform: support is [-half_width, half_width]
  double scale = 1.0;       // Laplace: diversity b
  double frequency = 0.01;  // Sinusoid: cycles per sample
  double phase = 0.0;       // Sinusoid: radians

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

inline void validate(const SourceSpec& spec) {
  if (!(std::isfinite(spec.half_width) && spec.half_width > 0))
    throw std::invalid_argument("source spec: half_width must be finite and > 0");
  if (!(std::isfinite(spec.scale) && spec.scale > 0))
    throw std::invalid_argument("source spec: scale must be finite and > 0");
  if (!std::isfinite(spec.frequency) || !std::isfinite(spec.phase))
    throw std::invalid_argument("source spec: frequency and phase must be finite");
}

enum class ScheduleKind { Stationary, Rotating };

// Rotating applies A <- A * R(rate * t) in one source-space plane. The plane
// indices address source coordinates, so both must be < n.
struct Schedule {
  ScheduleKind kind = ScheduleKind::Stationary;
  double rate = 0.0;  // radians per sample
  std::size_t plane_i = 0;
  std::size_t plane_j = 1;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

inline void validate(const Schedule& schedule, std::size_t n) {
  if (schedule.kind == ScheduleKind::Stationary) return;
  if (!std::isfinite(schedule.rate))
    throw std::invalid_argument("schedule: rotation rate must be finite");
  if (schedule.plane_i >= n || schedule.plane_j >= n)
    throw std::invalid_argument("schedule: rotation plane indices must be < n");
  if (schedule.plane_i == schedule.plane_j)
    throw std::invalid_argument("schedule: rotation plane indices must differ");
}

/// Largest over smallest singular value of a. Computed from the eigenvalues
/// of a'a by cyclic Jacobi sweeps; returns +inf for rank-deficient input.
inline double condition_number(const Mat<double>& a) {
  const std::size_t n = a.cols();
  Mat<double> s = matmul(transpose(a), a);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += s(i, j) * s(i, j);
        if (i != j) off += s(i, j) * s(i, j);
      }
    if (off <= 1e-28 * total) break;
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (s(i, j) == 0) continue;
        const double theta = 0.5 * std::atan2(2 * s(i, j), s(i, i) - s(j, j));
        const double c = std::cos(theta), sn = std::sin(theta);
        for (std::size_t k = 0; k < n; ++k) {
          const double ski = s(k, i), skj = s(k, j);
          s(k, i) = c * ski + sn * skj;
          s(k, j) = -sn * ski + c * skj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double sik = s(i, k), sjk = s(j, k);
          s(i, k) = c * sik + sn * sjk;
          s(j, k) = -sn * sik + c * sjk;
        }
      }
  }
  double lo = s(0, 0), hi = s(0, 0);
  for (std::size_t i = 1; i < n; ++i) {
    lo = std::min(lo, s(i, i));
    hi = std::max(hi, s(i, i));
  }
  if (!(lo > 0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(hi / lo);
}

inline constexpr double kMaxMixingCondition = 100.0;

/// m x n mixing matrix with entries i.i.d. uniform on [-1, 1], redrawn as a
/// whole until the condition number is at most kMaxMixingCondition.
/// Deterministic given the seed.
inline Mat<double> build_mixing(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (n == 0 || m < n)
    throw std::invalid_argument("build_mixing: need m >= n >= 1, got m=" + std::to_string(m) +
                                " n=" + std::to_string(n));
  SplitMix rng(seed);
  for (;;) {
    Mat<double> a(m, n);
    for (double& v : a.data()) v = 2.0 * rng.next_unit() - 1.0;
    if (condition_number(a) <= kMaxMixingCondition) return a;
  }
}

struct MixingModel {
  Mat<double> A;  // m x n
  std::vector<SourceSpec> sources;
  Schedule schedule;
};

inline void validate(const MixingModel& model) {
  if (model.A.cols() < 1 || model.A.rows() < model.A.cols())
    throw std::invalid_argument("mixing model: A must be m x n with m >= n >= 1");
  if (model.sources.size() != model.A.cols())
    throw std::invalid_argument("mixing model: expected one source spec per column of A, got " +
                                std::to_string(model.sources.size()));
  for (const SourceSpec& spec : model.sources) validate(spec);
  validate(model.schedule, model.A.cols());
  const double cond = condition_number(model.A);
  if (!(cond <= kMaxMixingCondition))
    throw std::invalid_argument("mixing model: condition number " + std::to_string(cond) +
                                " exceeds " + std::to_string(kMaxMixingCondition));
}

inline MixingModel make_mixing_model(Mat<double> a, std::vector<SourceSpec> sources,
                                     Schedule schedule = {}) {
  MixingModel model{std::move(a), std::move(sources), schedule};
  validate(model);
  return model;
}

/// Counterclockwise rotation by theta in the (i, j) coordinate plane.
inline Mat<double> plane_rotation(std::size_t n, double theta, std::size_t i, std::size_t j) {
  if (i >= n || j >= n || i == j)
    throw std::invalid_argument("plane_rotation: invalid plane indices");
  Mat<double> r = Mat<double>::identity(n);
  const double c = std::cos(theta), s = std::sin(theta);
  r(i, i) = c;
  r(i, j) = -s;
  r(j, i) = s;
  r(j, j) = c;
  return r;
}

/// The mixing matrix in effect at sample t. Right-multiplying by a rotation
/// keeps the condition number of A_t equal to that of A.
inline Mat<double> mixing_at(const MixingModel& model, std::uint64_t t) {
  if (model.schedule.kind == ScheduleKind::Stationary || model.schedule.rate == 0.0)
    return model.A;
  const double theta = model.schedule.rate * static_cast<double>(t);
  return matmul(model.A, plane_rotation(model.A.cols(), theta, model.schedule.plane_i,
                                        model.schedule.plane_j));
}

/// One sample per spec at time t. Source i reads stream i of the seed's
/// counter space, so streams are independent across sources and reproducible
/// in any evaluation order. Sinusoids are deterministic in t.
inline Vec<double> draw_sources(const std::vector<SourceSpec>& specs, std::uint64_t t,
                                std::uint64_t seed) {
  Vec<double> s(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const SourceSpec& spec = specs[i];
    switch (spec.kind) {
      case SourceKind::Uniform: {
        // Symmetric open interval; the half-width cancels under unit-variance
        // normalization, leaving sqrt(3) * u with u in (-1, 1).
        const double u = 2.0 * open_unit_from_word(counter_word(seed, i, t)) - 1.0;
        s[i] = std::numbers::sqrt3 * u;
        break;
      }
      case SourceKind::Laplace: {
        // Inverse CDF of the standard Laplace; the scale cancels under
        // normalization, dividing the unit-scale variate by sqrt(2).
        const double u = open_unit_from_word(counter_word(seed, i, t));
        const double v = u - 0.5;
        const double raw = v < 0 ? std::log1p(2.0 * v) : -std::log1p(-2.0 * v);
        s[i] = raw / std::numbers::sqrt2;
        break;
      }
      case SourceKind::Sinusoid:
        s[i] = std::numbers::sqrt2 *
               std::sin(2.0 * std::numbers::pi * spec.frequency * static_cast<double>(t) +
                        spec.phase);
        break;
    }
  }
  return s;
}

struct MixSample {
  Vec<double> x;    // observed mixture, length m
  Vec<double> s;    // ground-truth sources, length n
  Mat<double> a_t;  // mixing matrix in effect at t
};

/// Ground truth (s, a_t) is returned for metrics only; the separator must
/// never see it.
inline MixSample mix(const MixingModel& model, std::uint64_t t, std::uint64_t seed) {
  MixSample out;
  out.a_t = mixing_at(model, t);
  out.s = draw_sources(model.sources, t, seed);
  out.x = matvec(out.a_t, out.s);
  return out;
}

}  // namespace easi

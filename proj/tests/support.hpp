#pragma once

// Shared test utilities: bit-level float comparison, ulp distances, a
// double-precision Gauss-Jordan inverse for constructing equivariance
// fixtures, and seeded random fixtures. Test-only; nothing here is part of
// the library surface.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "easi/linalg.hpp"
#include "easi/rng.hpp"

namespace support {

inline bool bit_equal(float a, float b) {
  return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b);
}

inline bool bit_equal(const easi::Mat<float>& a, const easi::Mat<float>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    if (!bit_equal(a.data()[i], b.data()[i])) return false;
  return true;
}

// Count of representable floats between a and b (0 when bit-identical or
// both zero). Monotonic integer reinterpretation of the IEEE ordering.
inline std::int64_t ulp_distance(float a, float b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<std::int64_t>::max();
  const auto ordered = [](float x) -> std::int64_t {
    const std::int32_t bits = std::bit_cast<std::int32_t>(x);
    return bits >= 0 ? bits : -(static_cast<std::int64_t>(bits) - std::numeric_limits<std::int32_t>::min());
  };
  const std::int64_t d = ordered(a) - ordered(b);
  return d < 0 ? -d : d;
}

/// Gauss-Jordan inverse with partial pivoting; throws on singular input.
inline easi::Mat<double> inverse(easi::Mat<double> a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix must be square");
  const std::size_t n = a.rows();
  easi::Mat<double> inv = easi::Mat<double>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) < 1e-12) throw std::runtime_error("inverse: singular matrix");
    if (pivot != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    const double scale = 1.0 / a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) *= scale;
      inv(col, c) *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

inline double max_abs_diff(const easi::Mat<double>& a, const easi::Mat<double>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double worst = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

template <typename T = float>
easi::Vec<T> rand_vec(std::size_t len, easi::SplitMix& rng, double lo = -1.0, double hi = 1.0) {
  easi::Vec<T> v(len);
  for (std::size_t i = 0; i < len; ++i)
    v[i] = static_cast<T>(lo + (hi - lo) * rng.next_unit());
  return v;
}

template <typename T = float>
easi::Mat<T> rand_mat(std::size_t rows, std::size_t cols, easi::SplitMix& rng, double lo = -1.0,
                      double hi = 1.0) {
  easi::Mat<T> m(rows, cols);
  for (T& v : m.data()) v = static_cast<T>(lo + (hi - lo) * rng.next_unit());
  return m;
}

/// Entries k/16 with k in [-8, 8]: every product and small sum of these is
/// exactly representable in single precision, so identities that hold in
/// real arithmetic hold bitwise.
inline easi::Vec<float> dyadic_vec(std::size_t len, easi::SplitMix& rng) {
  easi::Vec<float> v(len);
  for (std::size_t i = 0; i < len; ++i) {
    const std::int64_t k = static_cast<std::int64_t>(rng.next() % 17) - 8;
    v[i] = static_cast<float>(k) / 16.0f;
  }
  return v;
}

}  // namespace support

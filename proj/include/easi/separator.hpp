#pragma once

// The EASI separation loop. Each observed sample x is mapped through the
// separation matrix (y = B x), a nonlinearity introduces the higher-order
// statistics, and the relative gradient
//
//   H = y y' - I + g(y) y' - y g(y)'
//
// drives a multiplicative update B <- (I - D) B. Three rules decide D:
// per-sample SGD (D = mu H), momentum SGD (D = running velocity), and the
// sequential mini-batch rule
//
//   acc <- gamma * prev_batch_acc + mu * H   at the first sample of a batch
//   acc <- beta * acc + mu * H               inside the batch
//
// which touches B only once per batch, removing the sample-to-sample
// dependency on B.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "easi/linalg.hpp"
#include "easi/rng.hpp"

namespace easi {

enum class OptimizerKind { Sgd, MomentumSgd, Smbgd };
enum class Nonlinearity { Cubic, Tanh };

template <typename T = float>
struct Hyperparameters {
  T learning_rate = T(0.01);   // mu
  T batch_decay = T(0.5);      // beta: within-batch chaining coefficient
  T momentum = T(0.5);         // gamma: weight on the previous batch's accumulator
  std::size_t batch_size = 8;  // P
  OptimizerKind optimizer = OptimizerKind::Smbgd;
  Nonlinearity nonlinearity = Nonlinearity::Cubic;

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

template <typename T>
void validate(const Hyperparameters<T>& hp) {
  if (!(hp.learning_rate > T(0)))
    throw std::invalid_argument("hyperparameters: learning_rate must be > 0");
  if (!(hp.batch_decay >= T(0) && hp.batch_decay < T(1)))
    throw std::invalid_argument("hyperparameters: batch_decay must be in [0, 1)");
  if (!(hp.momentum >= T(0) && hp.momentum < T(1)))
    throw std::invalid_argument("hyperparameters: momentum must be in [0, 1)");
  if (hp.batch_size < 1)
    throw std::invalid_argument("hyperparameters: batch_size must be >= 1");
}

template <typename T = float>
struct SeparatorState {
  Mat<T> B;               // n x m separation matrix
  Mat<T> grad_acc;        // n x n working accumulator (reset at batch boundaries)
  Mat<T> momentum_carry;  // final accumulator of the previous batch; survives the reset
  Mat<T> velocity;        // n x n, momentum-SGD only
  std::size_t batch_pos = 0;    // sample index within the current batch, [0, P)
  std::uint64_t batch_index = 0;  // completed mini-batches
};

template <typename T = float>
struct SampleResult {
  Vec<T> y;         // separated outputs for this sample
  Mat<T> gradient;  // instantaneous relative gradient H
  bool updated = false;  // whether B changed on this step
};

/// Fresh state with B drawn i.i.d. uniform on [-0.5, 0.5] from the seed and
/// all accumulators zeroed. Requires 1 <= n <= m.
template <typename T = float>
SeparatorState<T> init_separator(std::size_t n, std::size_t m, const Hyperparameters<T>& hp,
                                 std::uint64_t seed) {
  if (n == 0 || n > m)
    throw std::invalid_argument("init_separator: need 1 <= n <= m, got n=" + std::to_string(n) +
                                " m=" + std::to_string(m));
  validate(hp);
  SeparatorState<T> st;
  st.B = Mat<T>(n, m);
  SplitMix rng(seed);
  for (T& b : st.B.data()) b = static_cast<T>(rng.next_unit() - 0.5);
  st.grad_acc = Mat<T>(n, n);
  st.momentum_carry = Mat<T>(n, n);
  st.velocity = Mat<T>(n, n);
  return st;
}

template <typename T>
Vec<T> apply_nonlinearity(const Vec<T>& y, Nonlinearity kind) {
  Vec<T> g(y.len());
  for (std::size_t i = 0; i < y.len(); ++i)
    g[i] = kind == Nonlinearity::Cubic ? y[i] * y[i] * y[i] : std::tanh(y[i]);
  return g;
}

/// H = y y' - I + g y' - y g'. The symmetric part pulls the outputs toward
/// unit covariance, the antisymmetric part decorrelates them through the
/// nonlinearity.
template <typename T>
Mat<T> relative_gradient(const Vec<T>& y, const Vec<T>& gy) {
  if (y.len() != gy.len())
    throw std::invalid_argument("relative_gradient: y and g(y) lengths differ");
  const std::size_t n = y.len();
  const Mat<T> whitening = mat_combine(T(1), outer(y, y), T(-1), Mat<T>::identity(n));
  const Mat<T> separation = mat_combine(T(1), outer(gy, y), T(-1), outer(y, gy));
  return mat_combine(T(1), whitening, T(1), separation);
}

namespace detail {

// B <- (I - D) B. One shared path so each update rule performs the exact
// same arithmetic on equal D.
template <typename T>
void multiplicative_update(Mat<T>& B, const Mat<T>& D) {
  B = matmul(mat_combine(T(1), Mat<T>::identity(D.rows()), T(-1), D), B);
}

// coeff * acc + mu * H; a zero coeff skips the accumulator term entirely so
// the degenerate rules stay bit-identical to their per-sample counterparts.
template <typename T>
Mat<T> blend(T coeff, const Mat<T>& acc, T mu, const Mat<T>& grad) {
  if (coeff == T(0)) return scale(mu, grad);
  return mat_combine(coeff, acc, mu, grad);
}

template <typename T>
void check_gradient_shape(const SeparatorState<T>& st, const Mat<T>& grad) {
  if (grad.rows() != st.grad_acc.rows() || grad.cols() != st.grad_acc.cols())
    throw std::invalid_argument("optimizer update: gradient shape mismatch");
}

}  // namespace detail

/// Vanilla rule: B <- (I - mu H) B on every sample.
template <typename T>
void sgd_update(SeparatorState<T>& st, const Mat<T>& grad, const Hyperparameters<T>& hp) {
  detail::check_gradient_shape(st, grad);
  detail::multiplicative_update(st.B, scale(hp.learning_rate, grad));
}

/// velocity <- gamma velocity + mu H; B <- (I - velocity) B on every sample.
template <typename T>
void momentum_update(SeparatorState<T>& st, const Mat<T>& grad, const Hyperparameters<T>& hp) {
  detail::check_gradient_shape(st, grad);
  st.velocity = detail::blend(hp.momentum, st.velocity, hp.learning_rate, grad);
  detail::multiplicative_update(st.B, st.velocity);
}

/// Accumulates one sample of the current batch. The first sample folds in
/// the previous batch's final accumulator scaled by gamma (zero weight for
/// the very first batch); later samples chain with beta. Does not advance
/// batch_pos; the step loop owns that.
template <typename T>
void smbgd_accumulate(SeparatorState<T>& st, const Mat<T>& grad, const Hyperparameters<T>& hp) {
  detail::check_gradient_shape(st, grad);
  if (st.batch_pos == 0) {
    const T carry = st.batch_index == 0 ? T(0) : hp.momentum;
    st.grad_acc = detail::blend(carry, st.momentum_carry, hp.learning_rate, grad);
  } else {
    st.grad_acc = detail::blend(hp.batch_decay, st.grad_acc, hp.learning_rate, grad);
  }
}

/// Applies the accumulated batch update: B <- (I - acc) B. The accumulator
/// is copied into momentum_carry before being reset, so the next batch's
/// gamma term sees the pre-reset value.
template <typename T>
void commit_batch(SeparatorState<T>& st) {
  detail::multiplicative_update(st.B, st.grad_acc);
  st.momentum_carry = st.grad_acc;
  st.grad_acc = Mat<T>(st.grad_acc.rows(), st.grad_acc.cols());
  st.batch_pos = 0;
  ++st.batch_index;
}

/// One sample through the loop: separate, apply the nonlinearity, form the
/// relative gradient, dispatch to the active rule. Under SMBGD the result's
/// updated flag is true only on the sample that completes a batch.
template <typename T>
SampleResult<T> step_sample(SeparatorState<T>& st, const Vec<T>& x, const Hyperparameters<T>& hp) {
  if (x.len() != st.B.cols())
    throw std::invalid_argument("step_sample: input length " + std::to_string(x.len()) +
                                " does not match m=" + std::to_string(st.B.cols()));
  if (!all_finite(x)) throw std::invalid_argument("step_sample: non-finite input sample");

  SampleResult<T> r;
  r.y = matvec(st.B, x);
  const Vec<T> gy = apply_nonlinearity(r.y, hp.nonlinearity);
  r.gradient = relative_gradient(r.y, gy);
  r.updated = true;
  switch (hp.optimizer) {
    case OptimizerKind::Sgd:
      sgd_update(st, r.gradient, hp);
      break;
    case OptimizerKind::MomentumSgd:
      momentum_update(st, r.gradient, hp);
      break;
    case OptimizerKind::Smbgd:
      smbgd_accumulate(st, r.gradient, hp);
      if (st.batch_pos + 1 == hp.batch_size) {
        commit_batch(st);
      } else {
        ++st.batch_pos;
        r.updated = false;
      }
      break;
  }
  return r;
}

// A run whose separation matrix leaves this box is treated as diverged and
// terminated by the harness rather than propagated further.
inline constexpr double kDivergenceLimit = 1e6;

template <typename T>
bool has_diverged(const Mat<T>& B) {
  for (const T v : B.data()) {
    const double d = static_cast<double>(v);
    if (!std::isfinite(d) || std::abs(d) > kDivergenceLimit) return true;
  }
  return false;
}

}  // namespace easi

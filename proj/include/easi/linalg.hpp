#pragma once

// Small dense row-major kernels. The separation problems this library
// targets have a handful of rows and columns, so everything is a plain
// loop over contiguous storage; the default scalar is float to match a
// 32-bit datapath, with double instantiations used by metrics and test
// oracles.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace easi {

template <typename T = float>
class Vec {
 public:
  Vec() = default;

  /// Zero vector of the given length.
  explicit Vec(std::size_t len) : data_(check_len(len), T(0)) {}

  /// Takes ownership of the entries; rejects empty or non-finite data.
  explicit Vec(std::vector<T> data) : data_(std::move(data)) {
    check_len(data_.size());
    require_finite();
  }

  Vec(std::initializer_list<T> entries) : Vec(std::vector<T>(entries)) {}

  std::size_t len() const { return data_.size(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Vec& a, const Vec& b) { return a.data_ == b.data_; }

 private:
  static std::size_t check_len(std::size_t len) {
    if (len == 0) throw std::invalid_argument("Vec: length must be >= 1");
    return len;
  }
  void require_finite() const {
    for (const T v : data_)
      if (!std::isfinite(static_cast<double>(v)))
        throw std::invalid_argument("Vec: non-finite entry");
  }

  std::vector<T> data_;
};

template <typename T = float>
class Mat {
 public:
  Mat() = default;

  /// Zero matrix of the given shape.
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(check_shape(rows, cols), T(0)) {}

  /// Takes ownership of row-major entries; rejects shape/length mismatch
  /// and non-finite data.
  Mat(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != check_shape(rows, cols))
      throw std::invalid_argument("Mat: data length does not match shape");
    require_finite();
  }

  Mat(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows.size() ? rows.begin()->size() : 0;
    check_shape(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("Mat: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
    require_finite();
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  static std::size_t check_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("Mat: shape must be >= 1x1");
    return rows * cols;
  }
  void require_finite() const {
    for (const T v : data_)
      if (!std::isfinite(static_cast<double>(v)))
        throw std::invalid_argument("Mat: non-finite entry");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
bool all_finite(const Vec<T>& v) {
  for (const T x : v.data())
    if (!std::isfinite(static_cast<double>(x))) return false;
  return true;
}

template <typename T>
bool all_finite(const Mat<T>& m) {
  for (const T x : m.data())
    if (!std::isfinite(static_cast<double>(x))) return false;
  return true;
}

/// result[i] = sum_j M[i,j] * v[j], accumulated in the matrix scalar type.
template <typename T>
Vec<T> matvec(const Mat<T>& m, const Vec<T>& v) {
  if (m.cols() != v.len())
    throw std::invalid_argument("matvec: matrix has " + std::to_string(m.cols()) +
                                " columns, vector has length " + std::to_string(v.len()));
  Vec<T> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    T acc = T(0);
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

/// result[i,j] = u[i] * v[j].
template <typename T>
Mat<T> outer(const Vec<T>& u, const Vec<T>& v) {
  Mat<T> out(u.len(), v.len());
  for (std::size_t i = 0; i < u.len(); ++i)
    for (std::size_t j = 0; j < v.len(); ++j) out(i, j) = u[i] * v[j];
  return out;
}

/// Element-wise alpha * a + beta * b.
template <typename T>
Mat<T> mat_combine(T alpha, const Mat<T>& a, T beta, const Mat<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("mat_combine: shape mismatch");
  Mat<T> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = alpha * a.data()[i] + beta * b.data()[i];
  return out;
}

/// Element-wise alpha * m.
template <typename T>
Mat<T> scale(T alpha, const Mat<T>& m) {
  Mat<T> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = alpha * m.data()[i];
  return out;
}

template <typename T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul: inner dimensions " + std::to_string(a.cols()) +
                                " and " + std::to_string(b.rows()) + " differ");
  Mat<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T acc = T(0);
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

template <typename T>
Mat<T> transpose(const Mat<T>& m) {
  Mat<T> out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

template <typename To, typename From>
Mat<To> mat_cast(const Mat<From>& m) {
  Mat<To> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i)
    out.data()[i] = static_cast<To>(m.data()[i]);
  return out;
}

template <typename To, typename From>
Vec<To> vec_cast(const Vec<From>& v) {
  Vec<To> out(v.len());
  for (std::size_t i = 0; i < v.len(); ++i) out[i] = static_cast<To>(v[i]);
  return out;
}

}  // namespace easi

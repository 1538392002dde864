#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gslrec::numerics {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Storage size is always rows*cols.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline void check_dims(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("dimension mismatch: " + what);
}

/// y = A x
inline Vector matvec(const Matrix& a, const Vector& x) {
  check_dims(a.cols() == x.size(), "matvec");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.data() + i * a.cols();
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += ai[j] * x[j];
    y[i] = acc;
  }
  return y;
}

/// y = A^T x
inline Vector matvec_transpose(const Matrix& a, const Vector& x) {
  check_dims(a.rows() == x.size(), "matvec_transpose");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.data() + i * a.cols();
    const double xi = x[i];
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += ai[j] * xi;
  }
  return y;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  check_dims(a.cols() == b.rows(), "matmul");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.data() + i * a.cols();
    double* ci = c.data() + i * c.cols();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = ai[k];
      const double* bk = b.data() + k * b.cols();
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

/// C += x y^T
inline void add_outer(Matrix& c, const Vector& x, const Vector& y) {
  check_dims(c.rows() == x.size() && c.cols() == y.size(), "add_outer");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    double* ci = c.data() + i * c.cols();
    for (std::size_t j = 0; j < y.size(); ++j) ci[j] += xi * y[j];
  }
}

inline double dot(const Vector& a, const Vector& b) {
  check_dims(a.size() == b.size(), "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm2_sq(const Vector& v) { return dot(v, v); }
inline double norm2(const Vector& v) { return std::sqrt(norm2_sq(v)); }

inline double norm1(const Vector& v) {
  double acc = 0.0;
  for (double x : v) acc += std::fabs(x);
  return acc;
}

[[nodiscard]] inline Vector add(const Vector& a, const Vector& b) {
  check_dims(a.size() == b.size(), "add");
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

[[nodiscard]] inline Vector sub(const Vector& a, const Vector& b) {
  check_dims(a.size() == b.size(), "sub");
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

[[nodiscard]] inline Vector scale(const Vector& a, double s) {
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

inline bool is_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline bool is_finite(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (double x : m.row(i))
      if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace gslrec::numerics

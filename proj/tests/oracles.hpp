#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gslrec/numerics/matrix.hpp"

namespace oracles {

using gslrec::numerics::Matrix;
using gslrec::numerics::Vector;

/// Dense inverse by Gauss-Jordan elimination with partial pivoting.
inline Matrix gauss_jordan_inverse(Matrix a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("gauss_jordan_inverse: not square");
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) throw std::runtime_error("gauss_jordan_inverse: singular");
    if (pivot != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    const double d = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

/// Central finite-difference gradient of a scalar function.
inline Vector finite_difference_gradient(const std::function<double(const Vector&)>& f,
                                         const Vector& z, double h) {
  Vector g(z.size());
  Vector zp = z;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double zi = z[i];
    zp[i] = zi + h;
    const double fp = f(zp);
    zp[i] = zi - h;
    const double fm = f(zp);
    zp[i] = zi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline double relative_l2_error(const Vector& approx, const Vector& ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = approx[i] - ref[i];
    num += d * d;
    den += ref[i] * ref[i];
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

/// Largest eigenvalue of A^T A by power iteration.
inline double spectral_norm_sq(const Matrix& a, std::size_t iters = 200) {
  Vector v(a.cols(), 1.0);
  double lam = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    Vector w = gslrec::numerics::matvec_transpose(a, gslrec::numerics::matvec(a, v));
    lam = gslrec::numerics::norm2(w);
    if (lam == 0.0) return 0.0;
    for (auto& x : w) x /= lam;
    v = std::move(w);
  }
  return lam;
}

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

/// Proximal-gradient (ISTA) minimizer of lambda*||y - A z||^2 + (1-lambda)*||z||_1.
inline Vector ista_lasso(const Matrix& a, const Vector& y, double lambda,
                         std::size_t max_iters = 50000, double tol = 1e-13) {
  Vector z(a.cols(), 0.0);
  const double lip = 2.0 * lambda * spectral_norm_sq(a) * 1.01;
  if (lip == 0.0) return z;
  const double step = 1.0 / lip;
  double prev_obj = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < max_iters; ++it) {
    Vector r = gslrec::numerics::sub(gslrec::numerics::matvec(a, z), y);
    Vector g = gslrec::numerics::matvec_transpose(a, r);
    for (std::size_t i = 0; i < z.size(); ++i)
      z[i] = soft_threshold(z[i] - step * 2.0 * lambda * g[i], step * (1.0 - lambda));
    const double obj = lambda * gslrec::numerics::norm2_sq(
                           gslrec::numerics::sub(y, gslrec::numerics::matvec(a, z))) +
                       (1.0 - lambda) * gslrec::numerics::norm1(z);
    if (std::fabs(prev_obj - obj) <= tol * std::max(1.0, std::fabs(obj))) break;
    prev_obj = obj;
  }
  return z;
}

/// Spearman rank correlation (average ranks on ties).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * (i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

}  // namespace oracles

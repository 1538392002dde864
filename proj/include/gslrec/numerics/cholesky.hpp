#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "gslrec/numerics/matrix.hpp"

namespace gslrec::numerics {

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
/// M = L L^T. Factoring a non-SPD matrix throws, naming the failing pivot.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const Matrix& m) : l_(m.rows(), m.cols()) {
    if (m.rows() != m.cols()) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = m.rows();
    for (std::size_t j = 0; j < n; ++j) {
      double diag = m(j, j);
      for (std::size_t k = 0; k < j; ++k) diag -= l_(j, k) * l_(j, k);
      if (diag <= 0.0) {
        throw std::runtime_error("cholesky: matrix not positive definite, pivot " +
                                 std::to_string(j) + " = " + std::to_string(diag));
      }
      const double ljj = std::sqrt(diag);
      l_(j, j) = ljj;
      for (std::size_t i = j + 1; i < n; ++i) {
        double acc = m(i, j);
        for (std::size_t k = 0; k < j; ++k) acc -= l_(i, k) * l_(j, k);
        l_(i, j) = acc / ljj;
      }
    }
  }

  std::size_t dim() const { return l_.rows(); }

  /// Solves M v = b by forward/back substitution.
  Vector solve(const Vector& b) const {
    check_dims(b.size() == dim(), "cholesky solve");
    const std::size_t n = dim();
    Vector v(b);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = v[i];
      for (std::size_t k = 0; k < i; ++k) acc -= l_(i, k) * v[k];
      v[i] = acc / l_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double acc = v[ii];
      for (std::size_t k = ii + 1; k < n; ++k) acc -= l_(k, ii) * v[k];
      v[ii] = acc / l_(ii, ii);
    }
    return v;
  }

  const Matrix& lower() const { return l_; }

 private:
  Matrix l_;
};

/// Largest relative asymmetry |m_ij - m_ji| / max|m|.
inline double relative_asymmetry(const Matrix& m) {
  double amax = 0.0, asym = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      amax = std::max(amax, std::fabs(m(i, j)));
      if (j > i) asym = std::max(asym, std::fabs(m(i, j) - m(j, i)));
    }
  return amax == 0.0 ? 0.0 : asym / amax;
}

/// Solves M v = b for symmetric positive definite M via Cholesky factorization.
inline Vector solve_spd(const Matrix& m, const Vector& b) {
  if (m.rows() != m.cols()) throw std::invalid_argument("solve_spd: matrix not square");
  check_dims(m.rows() == b.size(), "solve_spd");
  if (relative_asymmetry(m) > 1e-10)
    throw std::invalid_argument("solve_spd: matrix not symmetric within tolerance");
  return CholeskyFactor(m).solve(b);
}

}  // namespace gslrec::numerics

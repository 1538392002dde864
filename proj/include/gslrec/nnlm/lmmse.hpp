#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gslrec/numerics/cholesky.hpp"
#include "gslrec/numerics/matrix.hpp"
#include "gslrec/sensing/sensing.hpp"

namespace gslrec::nnlm {

using numerics::Matrix;
using numerics::Vector;
using sensing::Datum;

/// Affine estimator x_hat = gain (z - mu_z) + mu_x.
struct LmmseEstimator {
  Matrix gain;  // m x M
  Vector mu_z;
  Vector mu_x;
  double lambda = 0.0;
};

namespace detail {

/// Empirical means and 1/J-normalized (cross-)covariances of a dataset.
struct LmmseStats {
  Vector mu_z;
  Vector mu_x;
  Matrix c_zz;  // M x M
  Matrix c_xz;  // m x M
  std::size_t count = 0;
};

inline LmmseStats compute_stats(const std::vector<Datum>& data) {
  if (data.size() < 2)
    throw std::invalid_argument("fit_lmmse: need at least two samples");
  const std::size_t latent = data.front().z.size();
  const std::size_t ambient = data.front().x.size();
  LmmseStats stats;
  stats.count = data.size();
  stats.mu_z.assign(latent, 0.0);
  stats.mu_x.assign(ambient, 0.0);
  for (const Datum& d : data) {
    numerics::check_dims(d.z.size() == latent && d.x.size() == ambient,
                         "fit_lmmse: inconsistent sample dims");
    for (std::size_t i = 0; i < latent; ++i) stats.mu_z[i] += d.z[i];
    for (std::size_t i = 0; i < ambient; ++i) stats.mu_x[i] += d.x[i];
  }
  const double inv_j = 1.0 / static_cast<double>(data.size());
  for (double& v : stats.mu_z) v *= inv_j;
  for (double& v : stats.mu_x) v *= inv_j;

  stats.c_zz = Matrix(latent, latent);
  stats.c_xz = Matrix(ambient, latent);
  Vector zc(latent), xc(ambient);
  for (const Datum& d : data) {
    for (std::size_t i = 0; i < latent; ++i) zc[i] = d.z[i] - stats.mu_z[i];
    for (std::size_t i = 0; i < ambient; ++i) xc[i] = d.x[i] - stats.mu_x[i];
    numerics::add_outer(stats.c_zz, zc, zc);
    numerics::add_outer(stats.c_xz, xc, zc);
  }
  for (std::size_t i = 0; i < latent * latent; ++i) stats.c_zz.data()[i] *= inv_j;
  for (std::size_t i = 0; i < ambient * latent; ++i) stats.c_xz.data()[i] *= inv_j;
  return stats;
}

/// Solves gain (C_zz + lambda I) = C_xz one gain row at a time against a
/// single Cholesky factorization.
inline LmmseEstimator estimator_from_stats(const LmmseStats& stats, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("fit_lmmse: lambda must be positive");
  const std::size_t latent = stats.mu_z.size();
  const std::size_t ambient = stats.mu_x.size();
  Matrix shifted = stats.c_zz;
  for (std::size_t i = 0; i < latent; ++i) shifted(i, i) += lambda;
  numerics::CholeskyFactor chol(shifted);

  LmmseEstimator est;
  est.lambda = lambda;
  est.mu_z = stats.mu_z;
  est.mu_x = stats.mu_x;
  est.gain = Matrix(ambient, latent);
  Vector row(latent);
  for (std::size_t i = 0; i < ambient; ++i) {
    for (std::size_t j = 0; j < latent; ++j) row[j] = stats.c_xz(i, j);
    Vector solved = chol.solve(row);
    for (std::size_t j = 0; j < latent; ++j) est.gain(i, j) = solved[j];
  }
  return est;
}

}  // namespace detail

inline LmmseEstimator fit_lmmse(const std::vector<Datum>& data, double lambda) {
  return detail::estimator_from_stats(detail::compute_stats(data), lambda);
}

inline Vector lmmse_predict(const LmmseEstimator& est, const Vector& z) {
  numerics::check_dims(z.size() == est.mu_z.size(), "lmmse_predict: z length");
  Vector centered(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) centered[i] = z[i] - est.mu_z[i];
  Vector out = numerics::matvec(est.gain, centered);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += est.mu_x[i];
  return out;
}

/// Mean squared estimator error relative to mean signal energy over the data.
inline double nnlm_value(const std::vector<Datum>& data, const LmmseEstimator& est) {
  if (data.empty()) throw std::invalid_argument("nnlm_value: empty dataset");
  double err = 0.0;
  double energy = 0.0;
  for (const Datum& d : data) {
    const Vector pred = lmmse_predict(est, d.z);
    err += numerics::norm2_sq(numerics::sub(d.x, pred));
    energy += numerics::norm2_sq(d.x);
  }
  if (energy == 0.0) throw std::invalid_argument("nnlm_value: dataset has zero signal energy");
  return err / energy;
}

}  // namespace gslrec::nnlm

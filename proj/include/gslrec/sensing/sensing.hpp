#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gslrec/generative/model.hpp"
#include "gslrec/numerics/matrix.hpp"
#include "gslrec/numerics/rng.hpp"

namespace gslrec::sensing {

using numerics::Matrix;
using numerics::RngStream;
using numerics::Vector;

/// Passing this as snr_db requests exact noise-free measurements.
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Latent vector with exactly k nonzero entries.
struct SparseLatent {
  Vector z;
  std::vector<std::size_t> support;  // sorted ascending
  std::size_t k = 0;
};

/// Support drawn uniformly without replacement, nonzeros i.i.d. standard normal.
inline SparseLatent sample_sparse_latent(std::size_t m_latent, std::size_t k, RngStream& rng) {
  if (k > m_latent)
    throw std::invalid_argument("sample_sparse_latent: k = " + std::to_string(k) +
                                " exceeds dimension " + std::to_string(m_latent));
  std::vector<std::size_t> indices(m_latent);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(m_latent - i));
    std::swap(indices[i], indices[j]);
  }
  SparseLatent out;
  out.k = k;
  out.support.assign(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.support.begin(), out.support.end());
  out.z.assign(m_latent, 0.0);
  for (std::size_t idx : out.support) out.z[idx] = rng.next_normal();
  return out;
}

/// i.i.d. N(0, 1/n) entries so that E|Ax|^2 is close to |x|^2.
inline Matrix build_sensing_matrix(std::size_t n, std::size_t m, RngStream& rng) {
  return numerics::gaussian_matrix(n, m, 1.0 / std::sqrt(static_cast<double>(n)), rng);
}

/// One realized measurement y = Ax + noise together with its noise level.
struct MeasurementSetup {
  Matrix A;
  double snr_db = kNoNoise;
  double sigma = 0.0;
  Vector y;
};

/// Draws additive white Gaussian noise scaled so that |Ax|^2 / (n sigma^2)
/// equals the requested SNR for this very realization. snr_db = kNoNoise
/// returns y = Ax untouched.
inline MeasurementSetup measure(const Matrix& a, const Vector& x, double snr_db, RngStream& rng) {
  numerics::check_dims(a.cols() == x.size(), "measure: A columns vs x");
  MeasurementSetup setup;
  setup.A = a;
  setup.snr_db = snr_db;
  setup.y = numerics::matvec(a, x);
  if (std::isinf(snr_db) && snr_db > 0.0) {
    setup.sigma = 0.0;
    return setup;
  }
  if (!std::isfinite(snr_db)) throw std::invalid_argument("measure: snr_db must be finite");
  const double power = numerics::norm2_sq(setup.y);
  if (power == 0.0)
    throw std::runtime_error("measure: Ax is zero, SNR is undefined at any finite level");
  const double n = static_cast<double>(a.rows());
  setup.sigma = std::sqrt(power / (n * std::pow(10.0, snr_db / 10.0)));
  for (double& yi : setup.y) yi += setup.sigma * rng.next_normal();
  return setup;
}

/// One latent/signal pair from the generating model.
struct Datum {
  Vector z;
  Vector x;
};

enum class LatentKind { dense_gaussian, sparse };

/// J pairs (z_j, x_j) with x_j = f(B z_j). sparsity_k is used only for
/// LatentKind::sparse.
inline std::vector<Datum> generate_dataset(const generative::GenerativeMap& model,
                                           const generative::MixingMatrix& b, std::size_t j_count,
                                           LatentKind kind, std::size_t sparsity_k,
                                           RngStream& rng) {
  if (j_count == 0) throw std::invalid_argument("generate_dataset: need at least one sample");
  std::vector<Datum> data;
  data.reserve(j_count);
  for (std::size_t j = 0; j < j_count; ++j) {
    Datum d;
    if (kind == LatentKind::dense_gaussian)
      d.z = numerics::gaussian_vector(model.latent_dim, 1.0, rng);
    else
      d.z = sample_sparse_latent(model.latent_dim, sparsity_k, rng).z;
    d.x = generative::forward(model, b, d.z);
    data.push_back(std::move(d));
  }
  return data;
}

}  // namespace gslrec::sensing

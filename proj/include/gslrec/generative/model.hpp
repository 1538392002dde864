#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gslrec/generative/layers.hpp"
#include "gslrec/generative/normal.hpp"
#include "gslrec/numerics/rng.hpp"

namespace gslrec::generative {

using numerics::RngStream;

/// Mixing matrix with unit-norm columns. Construct through normalize_columns
/// or from a matrix whose columns are already normalized.
class MixingMatrix {
 public:
  explicit MixingMatrix(Matrix b) : b_(std::move(b)) {
    for (std::size_t j = 0; j < b_.cols(); ++j) {
      double nrm_sq = 0.0;
      for (std::size_t i = 0; i < b_.rows(); ++i) nrm_sq += b_(i, j) * b_(i, j);
      if (std::fabs(std::sqrt(nrm_sq) - 1.0) > 1e-12)
        throw std::invalid_argument("MixingMatrix: column " + std::to_string(j) +
                                    " is not unit norm");
    }
  }

  static MixingMatrix identity(std::size_t n) { return MixingMatrix(Matrix::identity(n)); }

  const Matrix& matrix() const { return b_; }
  std::size_t rows() const { return b_.rows(); }
  std::size_t cols() const { return b_.cols(); }

 private:
  Matrix b_;
};

/// Scales every column of B to unit l2 norm. A zero column is an error.
inline MixingMatrix normalize_columns(const Matrix& b) {
  Matrix out = b;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double nrm_sq = 0.0;
    for (std::size_t i = 0; i < b.rows(); ++i) nrm_sq += b(i, j) * b(i, j);
    const double nrm = std::sqrt(nrm_sq);
    if (nrm == 0.0)
      throw std::invalid_argument("normalize_columns: column " + std::to_string(j) + " is zero");
    for (std::size_t i = 0; i < b.rows(); ++i) out(i, j) = b(i, j) / nrm;
  }
  return MixingMatrix(std::move(out));
}

enum class ModelKind { identity, one_layer, rnvp, gauss_cdf };

inline std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::identity:
      return "identity";
    case ModelKind::one_layer:
      return "one_layer";
    case ModelKind::rnvp:
      return "rnvp";
    case ModelKind::gauss_cdf:
      return "gauss_cdf";
  }
  throw std::logic_error("unknown model kind");
}

inline ModelKind model_kind_from_name(const std::string& name) {
  if (name == "identity") return ModelKind::identity;
  if (name == "one_layer") return ModelKind::one_layer;
  if (name == "rnvp") return ModelKind::rnvp;
  if (name == "gauss_cdf") return ModelKind::gauss_cdf;
  throw std::invalid_argument("unknown model kind: " + name);
}

struct ModelSpec {
  ModelKind kind = ModelKind::identity;
  std::size_t latent_dim = 0;   // dimension of z
  std::size_t ambient_dim = 0;  // dimension of f(Bz)
  std::size_t n_coupling = 0;   // rnvp only
  Activation activation = Activation::identity;  // one_layer only
};

/// Differentiable generative map f applied to the mixed latent Bz. The map
/// itself acts on ambient_dim-sized vectors; latent_dim records the size of z.
struct GenerativeMap {
  ModelKind kind = ModelKind::identity;
  std::size_t latent_dim = 0;
  std::size_t ambient_dim = 0;
  std::vector<DenseLayer> dense_layers;        // one_layer
  std::vector<CouplingLayer> coupling_layers;  // rnvp
  std::uint64_t build_seed = 0;    // audit trail of the rng used to draw parameters
  std::uint64_t build_stream = 0;
};

namespace detail {

inline std::vector<DenseLayer> coupling_net(std::size_t width, RngStream& rng) {
  // Two dense layers of equal width: SELU hidden, linear output. Weights are
  // N(0, 1/fan_in), biases zero (self-normalizing initialization).
  const double std_dev = 1.0 / std::sqrt(static_cast<double>(width));
  std::vector<DenseLayer> net;
  net.push_back({numerics::gaussian_matrix(width, width, std_dev, rng), Vector(width, 0.0),
                 Activation::selu});
  net.push_back({numerics::gaussian_matrix(width, width, std_dev, rng), Vector(width, 0.0),
                 Activation::identity});
  return net;
}

inline std::vector<bool> half_mask(std::size_t dim, bool pass_first_half) {
  std::vector<bool> mask(dim);
  for (std::size_t i = 0; i < dim; ++i) mask[i] = (i < dim / 2) == pass_first_half;
  return mask;
}

}  // namespace detail

inline GenerativeMap build_model(const ModelSpec& spec, RngStream& rng) {
  if (spec.latent_dim == 0 || spec.ambient_dim == 0)
    throw std::invalid_argument("build_model: zero dimension");
  GenerativeMap map;
  map.kind = spec.kind;
  map.latent_dim = spec.latent_dim;
  map.ambient_dim = spec.ambient_dim;
  map.build_seed = rng.seed();
  map.build_stream = rng.stream_id();
  switch (spec.kind) {
    case ModelKind::identity:
      break;
    case ModelKind::gauss_cdf:
      if (spec.ambient_dim != spec.latent_dim)
        throw std::invalid_argument("build_model: gauss_cdf requires m == M");
      break;
    case ModelKind::one_layer: {
      if (spec.ambient_dim != spec.latent_dim)
        throw std::invalid_argument("build_model: one_layer requires m == M");
      const std::size_t m = spec.ambient_dim;
      const double std_dev = 1.0 / std::sqrt(static_cast<double>(m));
      map.dense_layers.push_back({numerics::gaussian_matrix(m, m, std_dev, rng),
                                  Vector(m, 0.0), spec.activation});
      break;
    }
    case ModelKind::rnvp: {
      if (spec.ambient_dim != spec.latent_dim)
        throw std::invalid_argument("build_model: rnvp requires m == M");
      if (spec.ambient_dim % 2 != 0)
        throw std::invalid_argument("build_model: rnvp requires even dimension");
      if (spec.n_coupling == 0)
        throw std::invalid_argument("build_model: rnvp requires n_coupling >= 1");
      const std::size_t half = spec.ambient_dim / 2;
      for (std::size_t l = 0; l < spec.n_coupling; ++l) {
        CouplingLayer layer;
        layer.mask = detail::half_mask(spec.ambient_dim, l % 2 == 0);
        layer.scale_net = detail::coupling_net(half, rng);
        layer.shift_net = detail::coupling_net(half, rng);
        map.coupling_layers.push_back(std::move(layer));
      }
      break;
    }
  }
  return map;
}

/// Evaluates the map f alone on a mixed vector v = Bz.
inline Vector evaluate(const GenerativeMap& map, const Vector& v) {
  numerics::check_dims(v.size() == map.ambient_dim, "evaluate: input size");
  switch (map.kind) {
    case ModelKind::identity:
      return v;
    case ModelKind::one_layer:
      return net_forward(map.dense_layers, v);
    case ModelKind::rnvp: {
      Vector cur = v;
      for (const auto& layer : map.coupling_layers) cur = coupling_forward(layer, cur);
      return cur;
    }
    case ModelKind::gauss_cdf: {
      Vector out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) out[i] = normal_cdf(v[i]);
      return out;
    }
  }
  throw std::logic_error("unknown model kind");
}

/// x = f(Bz).
inline Vector forward(const GenerativeMap& map, const MixingMatrix& b, const Vector& z) {
  numerics::check_dims(z.size() == map.latent_dim && b.cols() == map.latent_dim &&
                           b.rows() == map.ambient_dim,
                       "forward");
  return evaluate(map, numerics::matvec(b.matrix(), z));
}

/// Gradient of <u, f(v)> with respect to v (the map alone, no mixing).
inline Vector evaluate_vjp(const GenerativeMap& map, const Vector& v, const Vector& u) {
  numerics::check_dims(v.size() == map.ambient_dim && u.size() == map.ambient_dim, "evaluate_vjp");
  switch (map.kind) {
    case ModelKind::identity:
      return u;
    case ModelKind::one_layer:
      return net_vjp(map.dense_layers, v, u);
    case ModelKind::rnvp: {
      std::vector<Vector> inputs;
      inputs.reserve(map.coupling_layers.size());
      Vector cur = v;
      for (const auto& layer : map.coupling_layers) {
        inputs.push_back(cur);
        cur = coupling_forward(layer, cur);
      }
      Vector bar = u;
      for (std::size_t l = map.coupling_layers.size(); l-- > 0;)
        bar = coupling_vjp(map.coupling_layers[l], inputs[l], bar);
      return bar;
    }
    case ModelKind::gauss_cdf: {
      Vector bar(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) bar[i] = u[i] * normal_pdf(v[i]);
      return bar;
    }
  }
  throw std::logic_error("unknown model kind");
}

/// Gradient of <u, f(Bz)> with respect to z.
inline Vector vjp(const GenerativeMap& map, const MixingMatrix& b, const Vector& z,
                  const Vector& u) {
  numerics::check_dims(z.size() == map.latent_dim && u.size() == map.ambient_dim, "vjp");
  Vector v = numerics::matvec(b.matrix(), z);
  return numerics::matvec_transpose(b.matrix(), evaluate_vjp(map, v, u));
}

/// Inverse of f alone (pre-mixing). Defined for the invertible kinds.
inline Vector inverse(const GenerativeMap& map, const Vector& x) {
  numerics::check_dims(x.size() == map.ambient_dim, "inverse");
  switch (map.kind) {
    case ModelKind::rnvp: {
      Vector cur = x;
      for (std::size_t l = map.coupling_layers.size(); l-- > 0;)
        cur = coupling_inverse(map.coupling_layers[l], cur);
      return cur;
    }
    case ModelKind::gauss_cdf: {
      Vector out(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && x[i] < 1.0))
          throw std::invalid_argument("inverse: gauss_cdf input outside (0, 1) at index " +
                                      std::to_string(i));
        out[i] = normal_quantile(x[i]);
      }
      return out;
    }
    default:
      throw std::invalid_argument("inverse: map kind is not invertible");
  }
}

}  // namespace gslrec::generative

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "gslrec/generative/model.hpp"
#include "gslrec/numerics/matrix.hpp"

namespace gslrec::reconstruct {

using numerics::Matrix;
using numerics::Vector;

enum class PenaltyKind { l1_latent, l2_latent, reweighted_l1 };

inline const char* penalty_name(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::l1_latent: return "l1";
    case PenaltyKind::l2_latent: return "l2";
    case PenaltyKind::reweighted_l1: return "reweighted_l1";
  }
  return "unknown";
}

/// Objective family: lambda * |y - A f(Bz)|^2 + (1 - lambda) * penalty(z),
/// where the penalty is |z|_1, |z|_2^2, or |Wz|_1 with diagonal nonnegative W.
struct LossSpec {
  PenaltyKind penalty = PenaltyKind::l1_latent;
  double lambda = 0.9;
  std::optional<Vector> weights;  // diagonal of W, reweighted_l1 only
};

inline void validate_loss_spec(const LossSpec& spec, std::size_t latent_dim) {
  if (!(spec.lambda >= 0.0 && spec.lambda <= 1.0))
    throw std::invalid_argument("loss spec: lambda must lie in [0, 1], got " +
                                std::to_string(spec.lambda));
  const bool reweighted = spec.penalty == PenaltyKind::reweighted_l1;
  if (reweighted != spec.weights.has_value())
    throw std::invalid_argument(
        "loss spec: weights must be present exactly for the reweighted penalty");
  if (spec.weights) {
    if (spec.weights->size() != latent_dim)
      throw std::invalid_argument("loss spec: weights length does not match latent dimension");
    for (double w : *spec.weights)
      if (!(w >= 0.0)) throw std::invalid_argument("loss spec: weights must be nonnegative");
  }
}

/// Residual and penalty parts of the objective, kept separate so traces can
/// report both.
struct LossTerms {
  double residual_sq = 0.0;  // |y - A f(Bz)|^2
  double penalty = 0.0;      // unweighted-by-lambda penalty value
  double total = 0.0;        // lambda * residual_sq + (1 - lambda) * penalty
};

namespace detail {

inline double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct LossEvaluation {
  LossTerms terms;
  Vector grad;  // empty unless requested
};

/// Shared evaluation path so that loss_eval, loss_grad, and the solver all
/// perform identical arithmetic.
inline LossEvaluation evaluate_loss(const LossSpec& spec, const generative::GenerativeMap& model,
                                    const generative::MixingMatrix& b, const Matrix& a,
                                    const Vector& y, const Vector& z, bool want_grad) {
  validate_loss_spec(spec, model.latent_dim);
  numerics::check_dims(z.size() == model.latent_dim, "loss: z length");
  numerics::check_dims(a.cols() == model.ambient_dim, "loss: A columns vs model output");
  numerics::check_dims(y.size() == a.rows(), "loss: y length vs A rows");
  numerics::check_dims(b.rows() == model.ambient_dim && b.cols() == model.latent_dim,
                       "loss: B shape");

  const Vector v = numerics::matvec(b.matrix(), z);
  const Vector fx = generative::evaluate(model, v);
  Vector r = numerics::matvec(a, fx);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];

  LossEvaluation out;
  out.terms.residual_sq = numerics::norm2_sq(r);
  switch (spec.penalty) {
    case PenaltyKind::l1_latent:
      out.terms.penalty = numerics::norm1(z);
      break;
    case PenaltyKind::l2_latent:
      out.terms.penalty = numerics::norm2_sq(z);
      break;
    case PenaltyKind::reweighted_l1: {
      double acc = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) acc += (*spec.weights)[i] * std::fabs(z[i]);
      out.terms.penalty = acc;
      break;
    }
  }
  const double lam = spec.lambda;
  out.terms.total = lam * out.terms.residual_sq + (1.0 - lam) * out.terms.penalty;

  if (want_grad) {
    const Vector u = numerics::scale(numerics::matvec_transpose(a, r), 2.0 * lam);
    out.grad = numerics::matvec_transpose(b.matrix(), generative::evaluate_vjp(model, v, u));
    for (std::size_t i = 0; i < z.size(); ++i) {
      double g_pen = 0.0;
      switch (spec.penalty) {
        case PenaltyKind::l1_latent: g_pen = sign_of(z[i]); break;
        case PenaltyKind::l2_latent: g_pen = 2.0 * z[i]; break;
        case PenaltyKind::reweighted_l1: g_pen = (*spec.weights)[i] * sign_of(z[i]); break;
      }
      out.grad[i] += (1.0 - lam) * g_pen;
    }
  }
  return out;
}

}  // namespace detail

inline LossTerms loss_terms(const LossSpec& spec, const generative::GenerativeMap& model,
                            const generative::MixingMatrix& b, const Matrix& a, const Vector& y,
                            const Vector& z) {
  return detail::evaluate_loss(spec, model, b, a, y, z, false).terms;
}

inline double loss_eval(const LossSpec& spec, const generative::GenerativeMap& model,
                        const generative::MixingMatrix& b, const Matrix& a, const Vector& y,
                        const Vector& z) {
  return loss_terms(spec, model, b, a, y, z).total;
}

/// Subgradient of the objective; sign(0) taken as 0 in the l1 penalties.
inline Vector loss_grad(const LossSpec& spec, const generative::GenerativeMap& model,
                        const generative::MixingMatrix& b, const Matrix& a, const Vector& y,
                        const Vector& z) {
  return detail::evaluate_loss(spec, model, b, a, y, z, true).grad;
}

}  // namespace gslrec::reconstruct

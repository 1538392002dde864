#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gslrec/generative/model.hpp"
#include "gslrec/numerics/cholesky.hpp"
#include "gslrec/numerics/rng.hpp"
#include "gslrec/reconstruct/adam.hpp"
#include "gslrec/reconstruct/loss.hpp"

namespace gslrec::reconstruct {

using numerics::RngStream;

struct SolveOptions {
  double eta = 1e-2;
  std::size_t max_iters = 5000;
  double tol = 1e-7;                 // relative loss change over a 50-iteration window
  std::optional<Vector> z0;          // defaults to the origin
  std::size_t restarts = 0;          // extra random starts beyond the z0 run
  RngStream* restart_rng = nullptr;  // required when restarts > 0
  bool record_terms = false;         // keep residual/penalty split per iteration
};

inline constexpr std::size_t kConvergenceWindow = 50;
inline constexpr double kRestartStd = 0.31622776601683794;  // sqrt(0.1)

struct ReconstructionResult {
  Vector z_hat;
  Vector x_hat;
  std::vector<double> loss_trace;  // per-iterate losses, then the loss at z_hat
  std::size_t iterations_run = 0;  // gradient steps taken in the winning run
  bool converged = false;
  double runtime_ms = 0.0;
  std::vector<LossTerms> term_trace;  // filled when record_terms is set
};

namespace detail {

inline ReconstructionResult run_adam_search(const Vector& y, const Matrix& a,
                                            const generative::GenerativeMap& model,
                                            const generative::MixingMatrix& b,
                                            const LossSpec& spec, const SolveOptions& opts,
                                            Vector z) {
  ReconstructionResult res;
  AdamState state = make_adam_state(z.size(), opts.eta);
  double best_loss = std::numeric_limits<double>::infinity();
  Vector best_z = z;
  std::size_t steps = 0;
  for (std::size_t k = 0;; ++k) {
    LossEvaluation eval = evaluate_loss(spec, model, b, a, y, z, true);
    const double loss = eval.terms.total;
    if (!std::isfinite(loss))
      throw std::runtime_error("reconstruct: non-finite loss at iteration " + std::to_string(k));
    res.loss_trace.push_back(loss);
    if (opts.record_terms) res.term_trace.push_back(eval.terms);
    if (loss < best_loss) {
      best_loss = loss;
      best_z = z;
    }
    if (k >= kConvergenceWindow) {
      const double prev = res.loss_trace[k - kConvergenceWindow];
      const double denom = std::max(std::fabs(prev), std::numeric_limits<double>::min());
      if (std::fabs(loss - prev) / denom < opts.tol) {
        res.converged = true;
        break;
      }
    }
    if (k == opts.max_iters) break;
    z = adam_step(state, eval.grad, z);
    ++steps;
  }
  res.iterations_run = steps;
  res.z_hat = std::move(best_z);
  res.loss_trace.push_back(best_loss);
  if (opts.record_terms) {
    LossTerms best_terms = loss_terms(spec, model, b, a, y, res.z_hat);
    res.term_trace.push_back(best_terms);
  }
  return res;
}

}  // namespace detail

/// Gradient search for argmin_z of the configured loss, started at opts.z0
/// (the origin by default). Returns the lowest-loss iterate seen; with
/// restarts, the best run wins.
inline ReconstructionResult reconstruct(const Vector& y, const Matrix& a,
                                        const generative::GenerativeMap& model,
                                        const generative::MixingMatrix& b, const LossSpec& spec,
                                        const SolveOptions& opts = {}) {
  if (opts.max_iters < 1) throw std::invalid_argument("reconstruct: max_iters must be >= 1");
  if (opts.restarts > 0 && opts.restart_rng == nullptr)
    throw std::invalid_argument("reconstruct: restarts require a restart rng");
  Vector z0 = opts.z0.value_or(Vector(model.latent_dim, 0.0));
  numerics::check_dims(z0.size() == model.latent_dim, "reconstruct: z0 length");

  const auto tick = std::chrono::steady_clock::now();
  ReconstructionResult best = detail::run_adam_search(y, a, model, b, spec, opts, z0);
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    Vector start =
        numerics::gaussian_vector(model.latent_dim, kRestartStd, *opts.restart_rng);
    ReconstructionResult cand =
        detail::run_adam_search(y, a, model, b, spec, opts, std::move(start));
    if (cand.loss_trace.back() < best.loss_trace.back()) best = std::move(cand);
  }
  best.x_hat = generative::forward(model, b, best.z_hat);
  best.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - tick).count();
  return best;
}

inline constexpr double kReweightEpsilon = 0.1;

/// Next reweighting diagonal from a solution estimate: w_i = 1 / (|z_i| + eps).
inline Vector reweight_from(const Vector& z_hat, double eps = kReweightEpsilon) {
  Vector w(z_hat.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / (std::fabs(z_hat[i]) + eps);
  return w;
}

/// Iteratively reweighted l1 search: starts with W = I and re-solves with
/// weights derived from the previous solution. Returns the last inner result.
inline ReconstructionResult reweighted_l1_reconstruct(const Vector& y, const Matrix& a,
                                                      const generative::GenerativeMap& model,
                                                      const generative::MixingMatrix& b,
                                                      double beta, const SolveOptions& opts,
                                                      std::size_t outer_iters) {
  if (outer_iters < 1)
    throw std::invalid_argument("reweighted_l1_reconstruct: outer_iters must be >= 1");
  LossSpec spec;
  spec.penalty = PenaltyKind::reweighted_l1;
  spec.lambda = beta;
  spec.weights = Vector(model.latent_dim, 1.0);
  ReconstructionResult res;
  for (std::size_t t = 0; t < outer_iters; ++t) {
    res = reconstruct(y, a, model, b, spec, opts);
    spec.weights = reweight_from(res.z_hat);
  }
  return res;
}

/// Closed-form x_hat = (kappa A^T A + (1 - kappa) I)^{-1} kappa A^T y.
inline Vector ridge_baseline(const Vector& y, const Matrix& a, double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0))
    throw std::invalid_argument("ridge_baseline: kappa must lie in [0, 1]");
  numerics::check_dims(y.size() == a.rows(), "ridge_baseline: y length vs A rows");
  const std::size_t m = a.cols();
  Matrix gram = numerics::matmul(numerics::transpose(a), a);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      gram(i, j) = kappa * gram(i, j) + (i == j ? 1.0 - kappa : 0.0);
  const Vector rhs = numerics::scale(numerics::matvec_transpose(a, y), kappa);
  return numerics::solve_spd(gram, rhs);
}

}  // namespace gslrec::reconstruct

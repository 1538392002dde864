#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "gslrec/numerics/matrix.hpp"

namespace gslrec::reconstruct {

using numerics::Vector;

struct AdamState {
  std::size_t step = 0;
  Vector first_moment;
  Vector second_moment;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double eta = 1e-2;
};

inline AdamState make_adam_state(std::size_t dim, double eta) {
  AdamState state;
  state.first_moment.assign(dim, 0.0);
  state.second_moment.assign(dim, 0.0);
  state.eta = eta;
  return state;
}

/// One bias-corrected ADAM update; mutates the moment estimates and returns
/// the next iterate.
inline Vector adam_step(AdamState& state, const Vector& grad, const Vector& z) {
  numerics::check_dims(grad.size() == z.size() && state.first_moment.size() == z.size() &&
                           state.second_moment.size() == z.size(),
                       "adam_step");
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double corr1 = 1.0 - std::pow(state.beta1, t);
  const double corr2 = 1.0 - std::pow(state.beta2, t);
  Vector next(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * grad[i];
    v = state.beta2 * v + (1.0 - state.beta2) * grad[i] * grad[i];
    const double m_hat = m / corr1;
    const double v_hat = v / corr2;
    next[i] = z[i] - state.eta * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
  return next;
}

}  // namespace gslrec::reconstruct

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace gslrec::generative {

enum class Activation { identity, sigmoid, exp, selu };

/// Inputs to exponentials are clamped to this range so untrained random
/// networks cannot overflow.
inline constexpr double kExpClamp = 10.0;

inline constexpr double kSeluAlpha = 1.6732632423543772848170429916717;
inline constexpr double kSeluScale = 1.0507009873554804934193349852946;

inline double clamp_exp_arg(double x) {
  return x > kExpClamp ? kExpClamp : (x < -kExpClamp ? -kExpClamp : x);
}

inline double apply_activation(Activation act, double x) {
  switch (act) {
    case Activation::identity:
      return x;
    case Activation::sigmoid:
      if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
      {
        const double e = std::exp(x);
        return e / (1.0 + e);
      }
    case Activation::exp:
      return std::exp(clamp_exp_arg(x));
    case Activation::selu:
      return x > 0.0 ? kSeluScale * x : kSeluScale * kSeluAlpha * std::expm1(x);
  }
  throw std::logic_error("unknown activation");
}

/// Derivative with respect to the pre-activation. For the clamped exp the
/// derivative is zero outside the clamp window, matching the actual forward.
inline double activation_derivative(Activation act, double x) {
  switch (act) {
    case Activation::identity:
      return 1.0;
    case Activation::sigmoid: {
      const double s = apply_activation(Activation::sigmoid, x);
      return s * (1.0 - s);
    }
    case Activation::exp:
      return (x > -kExpClamp && x < kExpClamp) ? std::exp(x) : 0.0;
    case Activation::selu:
      return x > 0.0 ? kSeluScale : kSeluScale * kSeluAlpha * std::exp(x);
  }
  throw std::logic_error("unknown activation");
}

inline std::string activation_name(Activation act) {
  switch (act) {
    case Activation::identity:
      return "identity";
    case Activation::sigmoid:
      return "sigmoid";
    case Activation::exp:
      return "exp";
    case Activation::selu:
      return "selu";
  }
  throw std::logic_error("unknown activation");
}

inline Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "exp") return Activation::exp;
  if (name == "selu") return Activation::selu;
  throw std::invalid_argument("unknown activation: " + name);
}

}  // namespace gslrec::generative

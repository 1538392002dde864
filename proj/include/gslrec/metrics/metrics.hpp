#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gslrec/numerics/matrix.hpp"

namespace gslrec::metrics {

using numerics::Vector;

/// SRNR values are clipped to this range so that exact reconstructions (and
/// degenerate failures) still produce finite CSV entries.
inline constexpr double kSrnrCapDb = 300.0;

struct EvalSummary {
  double srnr_db = 0.0;
  double asce = 0.0;
  std::size_t trials = 0;
};

/// 10 log10( mean |x|^2 / mean |x - x_hat|^2 ) over the pairs, in decibels.
/// The two means are formed separately before dividing.
inline double srnr(const std::vector<std::pair<Vector, Vector>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("srnr: need at least one pair");
  double signal = 0.0;
  double error = 0.0;
  for (const auto& [x, x_hat] : pairs) {
    numerics::check_dims(x.size() == x_hat.size(), "srnr: pair dims");
    signal += numerics::norm2_sq(x);
    error += numerics::norm2_sq(numerics::sub(x, x_hat));
  }
  signal /= static_cast<double>(pairs.size());
  error /= static_cast<double>(pairs.size());
  if (error == 0.0) return kSrnrCapDb;
  if (signal == 0.0) return -kSrnrCapDb;
  return std::clamp(10.0 * std::log10(signal / error), -kSrnrCapDb, kSrnrCapDb);
}

/// Indices of the k largest-amplitude entries, ties broken by lower index;
/// returned sorted ascending.
inline std::vector<std::size_t> topk_support(const Vector& z, std::size_t k) {
  if (k < 1 || k > z.size())
    throw std::invalid_argument("topk_support: k must lie in [1, len(z)]");
  std::vector<std::size_t> order(z.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&z](std::size_t a, std::size_t b) {
    return std::fabs(z[a]) > std::fabs(z[b]);
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

/// 1 - (1/k) * mean |topk(z) intersect topk(z_hat)| over the pairs.
inline double asce(const std::vector<std::pair<Vector, Vector>>& pairs, std::size_t k) {
  if (pairs.empty()) throw std::invalid_argument("asce: need at least one pair");
  double overlap_sum = 0.0;
  for (const auto& [z, z_hat] : pairs) {
    auto s_true = topk_support(z, k);
    auto s_est = topk_support(z_hat, k);
    std::vector<std::size_t> common;
    std::set_intersection(s_true.begin(), s_true.end(), s_est.begin(), s_est.end(),
                          std::back_inserter(common));
    overlap_sum += static_cast<double>(common.size());
  }
  return 1.0 - overlap_sum / (static_cast<double>(k) * static_cast<double>(pairs.size()));
}

}  // namespace gslrec::metrics

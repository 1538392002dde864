#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gslrec/generative/model.hpp"
#include "gslrec/nnlm/lmmse.hpp"
#include "gslrec/numerics/rng.hpp"
#include "gslrec/sensing/sensing.hpp"

namespace gslrec::nnlm {

using numerics::RngStream;

inline constexpr std::size_t kCvFolds = 5;

/// Nine logarithmically spaced ridge levels in [1e-8, 1].
inline std::vector<double> default_lambda_grid() {
  std::vector<double> grid(9);
  for (int i = 0; i < 9; ++i) grid[static_cast<std::size_t>(i)] = std::pow(10.0, i - 8);
  return grid;
}

struct NnlmScore {
  double train_nnlm = 0.0;
  double test_nnlm = 0.0;
  double chosen_lambda = 0.0;
};

struct NnlmReport {
  std::vector<std::size_t> j_values;
  std::vector<double> train_nnlm;
  std::vector<double> test_nnlm;
  std::vector<double> chosen_lambda;
  std::string model_label;
};

namespace detail {

/// Contiguous 5-fold split; fold f covers [f J / 5, (f+1) J / 5).
inline std::pair<std::size_t, std::size_t> fold_bounds(std::size_t j_total, std::size_t fold) {
  return {fold * j_total / kCvFolds, (fold + 1) * j_total / kCvFolds};
}

inline double cross_validated_lambda(const std::vector<sensing::Datum>& train,
                                     const std::vector<double>& lambda_grid) {
  std::vector<double> cv_err(lambda_grid.size(), 0.0);
  for (std::size_t f = 0; f < kCvFolds; ++f) {
    const auto [lo, hi] = fold_bounds(train.size(), f);
    if (lo == hi) continue;
    std::vector<sensing::Datum> held(train.begin() + static_cast<std::ptrdiff_t>(lo),
                                     train.begin() + static_cast<std::ptrdiff_t>(hi));
    std::vector<sensing::Datum> rest;
    rest.reserve(train.size() - held.size());
    rest.insert(rest.end(), train.begin(), train.begin() + static_cast<std::ptrdiff_t>(lo));
    rest.insert(rest.end(), train.begin() + static_cast<std::ptrdiff_t>(hi), train.end());
    const LmmseStats stats = compute_stats(rest);
    for (std::size_t li = 0; li < lambda_grid.size(); ++li)
      cv_err[li] += nnlm_value(held, estimator_from_stats(stats, lambda_grid[li]));
  }
  std::size_t best = 0;
  for (std::size_t li = 1; li < lambda_grid.size(); ++li)
    if (cv_err[li] < cv_err[best]) best = li;  // ties keep the earliest grid entry
  return lambda_grid[best];
}

}  // namespace detail

/// Draws dense-Gaussian-latent train and test sets from the model, picks the
/// ridge level by 5-fold cross-validation on the training set, and reports
/// train and test NNLM under that level.
inline NnlmScore nnlm_score(const generative::GenerativeMap& model,
                            const generative::MixingMatrix& b, std::size_t j_train,
                            std::size_t j_test, const std::vector<double>& lambda_grid,
                            const RngStream& rng) {
  if (j_train < 2 * kCvFolds)
    throw std::invalid_argument("nnlm_score: need at least " + std::to_string(2 * kCvFolds) +
                                " training samples for " + std::to_string(kCvFolds) +
                                "-fold cross-validation");
  if (j_test < 1) throw std::invalid_argument("nnlm_score: need at least one test sample");
  if (lambda_grid.empty()) throw std::invalid_argument("nnlm_score: empty lambda grid");
  for (double l : lambda_grid)
    if (!(l > 0.0)) throw std::invalid_argument("nnlm_score: lambda grid must be positive");

  RngStream train_rng = rng.derived(1);
  RngStream test_rng = rng.derived(2);
  const auto train =
      sensing::generate_dataset(model, b, j_train, sensing::LatentKind::dense_gaussian, 0,
                                train_rng);
  const auto test = sensing::generate_dataset(model, b, j_test,
                                              sensing::LatentKind::dense_gaussian, 0, test_rng);

  NnlmScore score;
  score.chosen_lambda = detail::cross_validated_lambda(train, lambda_grid);
  const LmmseEstimator est = fit_lmmse(train, score.chosen_lambda);
  score.train_nnlm = nnlm_value(train, est);
  score.test_nnlm = nnlm_value(test, est);
  return score;
}

/// One nnlm_score per dataset size, each from its own derived stream.
inline NnlmReport nnlm_curve(const generative::GenerativeMap& model,
                             const generative::MixingMatrix& b,
                             const std::vector<std::size_t>& j_values, std::size_t j_test,
                             const std::vector<double>& lambda_grid, const RngStream& rng) {
  if (j_values.empty()) throw std::invalid_argument("nnlm_curve: empty J sequence");
  for (std::size_t i = 1; i < j_values.size(); ++i)
    if (j_values[i] <= j_values[i - 1])
      throw std::invalid_argument("nnlm_curve: J values must be strictly increasing");
  NnlmReport report;
  report.j_values = j_values;
  for (std::size_t i = 0; i < j_values.size(); ++i) {
    const NnlmScore s =
        nnlm_score(model, b, j_values[i], j_test, lambda_grid, rng.derived(i));
    report.train_nnlm.push_back(s.train_nnlm);
    report.test_nnlm.push_back(s.test_nnlm);
    report.chosen_lambda.push_back(s.chosen_lambda);
  }
  return report;
}

}  // namespace gslrec::nnlm

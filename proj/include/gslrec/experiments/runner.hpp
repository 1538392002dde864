#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "gslrec/experiments/config.hpp"
#include "gslrec/generative/model.hpp"
#include "gslrec/metrics/metrics.hpp"
#include "gslrec/nnlm/score.hpp"
#include "gslrec/numerics/rng.hpp"
#include "gslrec/reconstruct/solver.hpp"
#include "gslrec/sensing/sensing.hpp"

namespace gslrec::experiments {

using numerics::Matrix;
using numerics::RngStream;
using numerics::Vector;

struct ResultRow {
  std::string study;
  std::string model_label;
  double alpha = 0.0;
  double lambda = 0.0;
  std::string penalty;
  std::size_t trial = 0;
  std::uint64_t stream = 0;  // derived stream id of the trial, "seed" column
  double srnr_db = 0.0;
  double asce = 0.0;
  std::size_t iterations = 0;
  double final_loss = 0.0;
  double runtime_ms = 0.0;  // kept in memory only; excluded from CSV output
};

namespace detail {

// Stream-id namespaces. A leading discriminator keeps hash inputs of
// different lengths from ever colliding.
inline constexpr std::uint64_t kBuildDomain = 1;
inline constexpr std::uint64_t kTrialDomain = 2;
inline constexpr std::uint64_t kNnlmDomain = 3;
inline constexpr std::uint64_t kShowcaseDomain = 4;

struct BuiltModel {
  generative::GenerativeMap map;
  generative::MixingMatrix b = generative::MixingMatrix::identity(1);
};

/// One model and mixing matrix per (study, model index); trials reuse them.
inline BuiltModel build_study_model(const ExperimentConfig& cfg, std::size_t model_index) {
  RngStream rng(cfg.seed, numerics::combine_stream_id(
                              {kBuildDomain, study_tag(cfg.study), model_index}));
  BuiltModel built;
  built.map = generative::build_model(cfg.models[model_index].spec, rng);
  built.b = generative::normalize_columns(
      numerics::gaussian_matrix(cfg.m, cfg.latent_dim, 1.0, rng));
  return built;
}

/// Measurement row count for a sub-sampling ratio.
inline std::size_t rows_for_alpha(double alpha, std::size_t m) {
  const auto n = static_cast<std::size_t>(std::lround(alpha * static_cast<double>(m)));
  return n < 1 ? 1 : n;
}

struct TrialData {
  sensing::SparseLatent latent;
  Vector x;
  Matrix a;
  Vector y;
};

/// Draws the shared per-trial data: sensing matrix, sparse latent, signal,
/// noisy measurement. The stream depends on the grid point but not on the
/// penalty, so penalties within a trial see identical data.
inline TrialData make_trial_data(const ExperimentConfig& cfg, const BuiltModel& built,
                                 double alpha, std::uint64_t stream_id) {
  const RngStream trial_rng(cfg.seed, stream_id);
  RngStream a_rng = trial_rng.derived(0);
  RngStream z_rng = trial_rng.derived(1);
  RngStream noise_rng = trial_rng.derived(2);

  TrialData data;
  data.a = sensing::build_sensing_matrix(rows_for_alpha(alpha, cfg.m), cfg.m, a_rng);
  data.latent = sensing::sample_sparse_latent(cfg.latent_dim, cfg.k_sparsity, z_rng);
  data.x = generative::forward(built.map, built.b, data.latent.z);
  data.y = sensing::measure(data.a, data.x, cfg.snr_db, noise_rng).y;
  return data;
}

}  // namespace detail

/// Task order is model, alpha, lambda, penalty, trial; rows keep that order
/// regardless of how many workers execute them.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg,
                                             std::size_t workers = 1) {
  validate_config(cfg);
  if (cfg.study != Study::lambda_sweep && cfg.study != Study::comparison)
    throw std::invalid_argument("run_experiment: study " + study_name(cfg.study) +
                                " is not a reconstruction sweep");
  if (workers < 1) workers = 1;

  const auto penalties = penalties_for(cfg.study);
  struct Task {
    std::size_t mi, ai, li, pi, trial;
  };
  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi)
    for (std::size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai)
      for (std::size_t li = 0; li < cfg.lambda_grid.size(); ++li)
        for (std::size_t pi = 0; pi < penalties.size(); ++pi)
          for (std::size_t t = 0; t < cfg.trials; ++t) tasks.push_back({mi, ai, li, pi, t});

  std::vector<detail::BuiltModel> built;
  built.reserve(cfg.models.size());
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi)
    built.push_back(detail::build_study_model(cfg, mi));

  std::vector<ResultRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        const Task& task = tasks[i];
        const double alpha = cfg.alpha_grid[task.ai];
        const double lambda = cfg.lambda_grid[task.li];
        const std::uint64_t stream_id = numerics::combine_stream_id(
            {detail::kTrialDomain, study_tag(cfg.study), task.mi, task.ai, task.li,
             task.trial});
        const detail::TrialData data =
            detail::make_trial_data(cfg, built[task.mi], alpha, stream_id);

        reconstruct::LossSpec loss{penalties[task.pi], lambda, std::nullopt};
        reconstruct::SolveOptions opts;
        opts.eta = cfg.solver.eta;
        opts.max_iters = cfg.solver.max_iters;
        opts.tol = cfg.solver.tol;
        const auto res =
            reconstruct::reconstruct(data.y, data.a, built[task.mi].map, built[task.mi].b,
                                     loss, opts);

        ResultRow row;
        row.study = study_name(cfg.study);
        row.model_label = cfg.models[task.mi].label;
        row.alpha = alpha;
        row.lambda = lambda;
        row.penalty = reconstruct::penalty_name(penalties[task.pi]);
        row.trial = task.trial;
        row.stream = stream_id;
        row.srnr_db = metrics::srnr({{data.x, res.x_hat}});
        row.asce = metrics::asce({{data.latent.z, res.z_hat}}, cfg.k_sparsity);
        row.iterations = res.iterations_run;
        row.final_loss = res.loss_trace.back();
        row.runtime_ms = res.runtime_ms;
        rows[i] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

/// One train/test NNLM curve per configured model.
inline std::vector<nnlm::NnlmReport> run_nnlm_study(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.study != Study::nnlm)
    throw std::invalid_argument("run_nnlm_study: config study is " + study_name(cfg.study));
  std::vector<nnlm::NnlmReport> reports;
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
    const detail::BuiltModel built = detail::build_study_model(cfg, mi);
    const RngStream rng(cfg.seed, numerics::combine_stream_id(
                                      {detail::kNnlmDomain, study_tag(cfg.study), mi}));
    nnlm::NnlmReport report = nnlm::nnlm_curve(built.map, built.b, cfg.j_values, cfg.j_test,
                                               cfg.lmmse_lambda_grid, rng);
    report.model_label = cfg.models[mi].label;
    reports.push_back(std::move(report));
  }
  return reports;
}

/// Everything produced by one showcased reconstruction run.
struct ShowcaseResult {
  std::string model_label;
  double alpha = 0.0;
  double lambda = 0.0;
  Vector z, z_hat;
  Vector x, x_hat;
  Vector y, y_hat;
  std::vector<double> loss_trace;
  std::size_t iterations = 0;
  bool converged = false;
  double srnr_db = 0.0;
  double asce = 0.0;
};

/// Single reconstruction at an explicit grid point using the first model.
inline ShowcaseResult run_showcase(const ExperimentConfig& cfg, double alpha, double lambda) {
  validate_config(cfg);
  if (cfg.study != Study::showcase)
    throw std::invalid_argument("run_showcase: config study is " + study_name(cfg.study));
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("run_showcase: alpha must lie in (0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("run_showcase: lambda must lie in [0, 1]");

  const detail::BuiltModel built = detail::build_study_model(cfg, 0);
  const std::uint64_t stream_id =
      numerics::combine_stream_id({detail::kShowcaseDomain, study_tag(cfg.study)});
  const detail::TrialData data = detail::make_trial_data(cfg, built, alpha, stream_id);

  reconstruct::LossSpec loss{reconstruct::PenaltyKind::l1_latent, lambda, std::nullopt};
  reconstruct::SolveOptions opts;
  opts.eta = cfg.solver.eta;
  opts.max_iters = cfg.solver.max_iters;
  opts.tol = cfg.solver.tol;
  const auto res = reconstruct::reconstruct(data.y, data.a, built.map, built.b, loss, opts);

  ShowcaseResult out;
  out.model_label = cfg.models.front().label;
  out.alpha = alpha;
  out.lambda = lambda;
  out.z = data.latent.z;
  out.z_hat = res.z_hat;
  out.x = data.x;
  out.x_hat = res.x_hat;
  out.y = data.y;
  out.y_hat = numerics::matvec(data.a, res.x_hat);
  out.loss_trace = res.loss_trace;
  out.iterations = res.iterations_run;
  out.converged = res.converged;
  out.srnr_db = metrics::srnr({{data.x, res.x_hat}});
  out.asce = metrics::asce({{data.latent.z, res.z_hat}}, cfg.k_sparsity);
  return out;
}

}  // namespace gslrec::experiments

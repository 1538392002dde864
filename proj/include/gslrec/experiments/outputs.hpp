#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "gslrec/experiments/config.hpp"
#include "gslrec/experiments/csv.hpp"
#include "gslrec/experiments/runner.hpp"
#include "gslrec/experiments/svg.hpp"
#include "gslrec/nnlm/score.hpp"

namespace gslrec::experiments {

inline constexpr const char* kOutputDirEnvVar = "GSLREC_OUTPUT_DIR";

/// Output directory precedence: command-line override, then the environment
/// variable, then the config value. Creates the directory.
inline std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg,
                                                const std::string& cli_override = "") {
  std::filesystem::path dir;
  if (!cli_override.empty()) {
    dir = cli_override;
  } else if (const char* env = std::getenv(kOutputDirEnvVar); env && *env) {
    dir = env;
  } else {
    dir = cfg.output_dir;
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output dir " + dir.string() + ": " +
                                   ec.message());
  return dir;
}

/// Mean SRNR/ASCE/iterations over the trials of one grid point.
struct AggregateRow {
  std::string study;
  std::string model_label;
  double alpha = 0.0;
  double lambda = 0.0;
  std::string penalty;
  std::size_t trials = 0;
  double mean_srnr_db = 0.0;
  double mean_asce = 0.0;
  double mean_iterations = 0.0;
};

/// Groups rows by (model, alpha, lambda, penalty) preserving first-seen
/// order, which is the deterministic task order of run_experiment.
inline std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, double, double, std::string>;
  std::vector<Key> order;
  std::map<Key, AggregateRow> groups;
  for (const ResultRow& r : rows) {
    Key key{r.model_label, r.alpha, r.lambda, r.penalty};
    auto it = groups.find(key);
    if (it == groups.end()) {
      order.push_back(key);
      AggregateRow agg;
      agg.study = r.study;
      agg.model_label = r.model_label;
      agg.alpha = r.alpha;
      agg.lambda = r.lambda;
      agg.penalty = r.penalty;
      it = groups.emplace(key, std::move(agg)).first;
    }
    AggregateRow& agg = it->second;
    agg.trials += 1;
    agg.mean_srnr_db += r.srnr_db;
    agg.mean_asce += r.asce;
    agg.mean_iterations += static_cast<double>(r.iterations);
  }
  std::vector<AggregateRow> out;
  out.reserve(order.size());
  for (const Key& key : order) {
    AggregateRow agg = groups.at(key);
    const auto t = static_cast<double>(agg.trials);
    agg.mean_srnr_db /= t;
    agg.mean_asce /= t;
    agg.mean_iterations /= t;
    out.push_back(std::move(agg));
  }
  return out;
}

inline void write_results_csv(const std::vector<ResultRow>& rows,
                              const std::filesystem::path& path) {
  CsvWriter csv(path.string());
  csv.row({"study", "model", "alpha", "lambda", "penalty", "trial", "seed", "srnr_db", "asce",
           "iterations", "final_loss"});
  for (const ResultRow& r : rows)
    csv.row({r.study, r.model_label, format_double(r.alpha), format_double(r.lambda),
             r.penalty, format_count(r.trial), format_count(r.stream),
             format_double(r.srnr_db), format_double(r.asce), format_count(r.iterations),
             format_double(r.final_loss)});
  csv.close();
}

inline void write_aggregate_csv(const std::vector<AggregateRow>& aggs,
                                const std::filesystem::path& path) {
  CsvWriter csv(path.string());
  csv.row({"study", "model", "alpha", "lambda", "penalty", "trials", "mean_srnr_db",
           "mean_asce", "mean_iterations"});
  for (const AggregateRow& a : aggs)
    csv.row({a.study, a.model_label, format_double(a.alpha), format_double(a.lambda),
             a.penalty, format_count(a.trials), format_double(a.mean_srnr_db),
             format_double(a.mean_asce), format_double(a.mean_iterations)});
  csv.close();
}

namespace detail {

/// Per-alpha series values for plotting: picks, at each alpha of one
/// (model, penalty) pair, the lambda with the best mean SRNR.
inline std::vector<PlotSeries> comparison_series(const std::vector<AggregateRow>& aggs,
                                                 bool use_asce) {
  std::vector<PlotSeries> series;
  for (const AggregateRow& a : aggs) {
    const std::string label = a.model_label + " " + a.penalty;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const PlotSeries& s) { return s.label == label; });
    if (it == series.end()) {
      series.push_back({label, {}, {}});
      it = series.end() - 1;
    }
    // best-SRNR lambda wins at each alpha; ties keep the earlier grid entry
    const AggregateRow* best = nullptr;
    for (const AggregateRow& c : aggs)
      if (c.model_label == a.model_label && c.penalty == a.penalty && c.alpha == a.alpha &&
          (!best || c.mean_srnr_db > best->mean_srnr_db))
        best = &c;
    if (std::find(it->xs.begin(), it->xs.end(), a.alpha) == it->xs.end()) {
      it->xs.push_back(a.alpha);
      it->ys.push_back(use_asce ? best->mean_asce : best->mean_srnr_db);
    }
  }
  return series;
}

inline std::vector<PlotSeries> sweep_series(const std::vector<AggregateRow>& aggs) {
  std::vector<PlotSeries> series;
  for (const AggregateRow& a : aggs) {
    const std::string label = a.model_label + " lambda=" + format_double(a.lambda);
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const PlotSeries& s) { return s.label == label; });
    if (it == series.end()) {
      series.push_back({label, {}, {}});
      it = series.end() - 1;
    }
    it->xs.push_back(a.alpha);
    it->ys.push_back(a.mean_srnr_db);
  }
  return series;
}

}  // namespace detail

/// Writes results.csv, aggregate.csv, and the study's line plots.
inline void emit_outputs(const std::vector<ResultRow>& rows, const ExperimentConfig& cfg,
                         const std::filesystem::path& dir) {
  if (rows.empty()) throw std::invalid_argument("emit_outputs: no rows");
  write_results_csv(rows, dir / "results.csv");
  const auto aggs = aggregate_rows(rows);
  write_aggregate_csv(aggs, dir / "aggregate.csv");

  if (cfg.study == Study::lambda_sweep) {
    write_line_plot((dir / "srnr_vs_alpha.svg").string(),
                    "Reconstruction quality versus sub-sampling ratio", "alpha", "mean SRNR (dB)",
                    detail::sweep_series(aggs));
  } else {
    write_line_plot((dir / "srnr_vs_alpha.svg").string(),
                    "Penalty comparison versus sub-sampling ratio", "alpha", "mean SRNR (dB)",
                    detail::comparison_series(aggs, false));
    write_line_plot((dir / "asce_vs_alpha.svg").string(),
                    "Support recovery versus sub-sampling ratio", "alpha", "mean ASCE",
                    detail::comparison_series(aggs, true));
  }
}

/// CSV layout: model,J,split,nnlm,lambda with one train and one test row per J.
inline void write_nnlm_csv(const std::vector<nnlm::NnlmReport>& reports,
                           const std::filesystem::path& path) {
  CsvWriter csv(path.string());
  csv.row({"model", "J", "split", "nnlm", "lambda"});
  for (const nnlm::NnlmReport& rep : reports)
    for (std::size_t i = 0; i < rep.j_values.size(); ++i) {
      csv.row({rep.model_label, format_count(rep.j_values[i]), "train",
               format_double(rep.train_nnlm[i]), format_double(rep.chosen_lambda[i])});
      csv.row({rep.model_label, format_count(rep.j_values[i]), "test",
               format_double(rep.test_nnlm[i]), format_double(rep.chosen_lambda[i])});
    }
  csv.close();
}

inline void emit_nnlm_outputs(const std::vector<nnlm::NnlmReport>& reports,
                              const std::filesystem::path& dir) {
  if (reports.empty()) throw std::invalid_argument("emit_nnlm_outputs: no reports");
  write_nnlm_csv(reports, dir / "nnlm.csv");
  std::vector<PlotSeries> series;
  for (const nnlm::NnlmReport& rep : reports) {
    PlotSeries train{rep.model_label + " train", {}, {}};
    PlotSeries test{rep.model_label + " test", {}, {}};
    for (std::size_t i = 0; i < rep.j_values.size(); ++i) {
      train.xs.push_back(static_cast<double>(rep.j_values[i]));
      train.ys.push_back(rep.train_nnlm[i]);
      test.xs.push_back(static_cast<double>(rep.j_values[i]));
      test.ys.push_back(rep.test_nnlm[i]);
    }
    series.push_back(std::move(train));
    series.push_back(std::move(test));
  }
  write_line_plot((dir / "nnlm_vs_j.svg").string(), "Non-linearity measure versus dataset size",
                  "J", "NNLM", series, /*log_x=*/true);
}

/// Loss trace plus paired signal/latent/measurement CSVs and overview plots.
inline void emit_showcase_outputs(const ShowcaseResult& sc, const std::filesystem::path& dir) {
  {
    CsvWriter csv((dir / "loss_trace.csv").string());
    csv.row({"iteration", "loss"});
    for (std::size_t i = 0; i < sc.loss_trace.size(); ++i)
      csv.row({format_count(i), format_double(sc.loss_trace[i])});
    csv.close();
  }
  auto write_pair = [&](const char* name, const char* a_col, const char* b_col,
                        const Vector& a, const Vector& b) {
    CsvWriter csv((dir / name).string());
    csv.row({"index", a_col, b_col});
    for (std::size_t i = 0; i < a.size(); ++i)
      csv.row({format_count(i), format_double(a[i]), format_double(b[i])});
    csv.close();
  };
  write_pair("signals.csv", "x", "x_hat", sc.x, sc.x_hat);
  write_pair("latents.csv", "z", "z_hat", sc.z, sc.z_hat);
  write_pair("measurements.csv", "y", "y_hat", sc.y, sc.y_hat);

  PlotSeries loss{"loss", {}, {}};
  for (std::size_t i = 0; i < sc.loss_trace.size(); ++i) {
    loss.xs.push_back(static_cast<double>(i));
    loss.ys.push_back(sc.loss_trace[i]);
  }
  write_line_plot((dir / "loss_trace.svg").string(), "Objective per gradient step", "iteration",
                  "loss", {loss});

  auto index_series = [](const char* label, const Vector& v) {
    PlotSeries s{label, {}, {}};
    for (std::size_t i = 0; i < v.size(); ++i) {
      s.xs.push_back(static_cast<double>(i));
      s.ys.push_back(v[i]);
    }
    return s;
  };
  write_line_plot((dir / "signals.svg").string(), "Ambient signal and reconstruction", "index",
                  "value", {index_series("x", sc.x), index_series("x_hat", sc.x_hat)});
  write_line_plot((dir / "latents.svg").string(), "Sparse latent and estimate", "index", "value",
                  {index_series("z", sc.z), index_series("z_hat", sc.z_hat)});
}

}  // namespace gslrec::experiments

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gslrec/generative/model.hpp"
#include "gslrec/nnlm/score.hpp"
#include "gslrec/reconstruct/loss.hpp"

namespace gslrec::experiments {

enum class Study { nnlm, lambda_sweep, comparison, showcase };

inline std::string study_name(Study s) {
  switch (s) {
    case Study::nnlm: return "nnlm";
    case Study::lambda_sweep: return "lambda-sweep";
    case Study::comparison: return "comparison";
    case Study::showcase: return "showcase";
  }
  throw std::logic_error("unknown study");
}

inline Study study_from_name(const std::string& name) {
  if (name == "nnlm") return Study::nnlm;
  if (name == "lambda-sweep") return Study::lambda_sweep;
  if (name == "comparison") return Study::comparison;
  if (name == "showcase") return Study::showcase;
  throw std::invalid_argument("unknown study: " + name);
}

/// Numeric tag feeding the per-task stream hash so studies never share draws.
inline std::uint64_t study_tag(Study s) { return static_cast<std::uint64_t>(s) + 1; }

struct ModelEntry {
  generative::ModelSpec spec;
  std::string label;
};

struct SolverOpts {
  double eta = 1e-2;
  std::size_t max_iters = 5000;
  double tol = 1e-7;
};

struct ExperimentConfig {
  Study study = Study::comparison;
  std::vector<ModelEntry> models;
  std::size_t m = 0;
  std::size_t latent_dim = 0;  // "M" in the config file
  std::size_t k_sparsity = 0;  // "K"
  double snr_db = 30.0;
  std::vector<double> alpha_grid;
  std::vector<double> lambda_grid;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  SolverOpts solver;
  std::string output_dir;
  // nnlm study only
  std::vector<std::size_t> j_values{256, 512, 1024, 2048, 4096};
  std::size_t j_test = 1024;
  std::vector<double> lmmse_lambda_grid = nnlm::default_lambda_grid();
};

/// Penalties exercised by each reconstruction study.
inline std::vector<reconstruct::PenaltyKind> penalties_for(Study s) {
  if (s == Study::comparison)
    return {reconstruct::PenaltyKind::l1_latent, reconstruct::PenaltyKind::l2_latent};
  return {reconstruct::PenaltyKind::l1_latent};
}

namespace detail {

inline std::string default_label(const generative::ModelSpec& spec) {
  switch (spec.kind) {
    case generative::ModelKind::rnvp:
      return "rnvp_nc" + std::to_string(spec.n_coupling);
    case generative::ModelKind::one_layer:
      return "one_layer_" + generative::activation_name(spec.activation);
    default:
      return generative::model_kind_name(spec.kind);
  }
}

inline void require_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw std::invalid_argument("unknown key \"" + item.key() + "\" in " + where);
}

}  // namespace detail

/// Parses a config file. Structural problems (bad JSON, unknown keys, wrong
/// value types) throw immediately; range checking happens in validate_config.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  detail::require_keys(j, {"study", "models", "m", "M", "K", "snr_db", "alpha-grid",
                           "lambda-grid", "trials", "seed", "solver-opts", "output-dir",
                           "j-values", "j-test", "lmmse-lambda-grid"},
                       "config");
  ExperimentConfig cfg;
  cfg.study = study_from_name(j.at("study").get<std::string>());
  cfg.m = j.at("m").get<std::size_t>();
  cfg.latent_dim = j.at("M").get<std::size_t>();
  cfg.k_sparsity = j.at("K").get<std::size_t>();
  cfg.snr_db = j.at("snr_db").get<double>();
  cfg.alpha_grid = j.at("alpha-grid").get<std::vector<double>>();
  cfg.lambda_grid = j.at("lambda-grid").get<std::vector<double>>();
  cfg.trials = j.at("trials").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.output_dir = j.at("output-dir").get<std::string>();

  const auto& so = j.at("solver-opts");
  detail::require_keys(so, {"eta", "max-iters", "tol"}, "solver-opts");
  cfg.solver.eta = so.at("eta").get<double>();
  cfg.solver.max_iters = so.at("max-iters").get<std::size_t>();
  cfg.solver.tol = so.at("tol").get<double>();

  for (const auto& jm : j.at("models")) {
    detail::require_keys(jm, {"kind", "n-coupling", "activation", "label"}, "models entry");
    ModelEntry entry;
    entry.spec.kind = generative::model_kind_from_name(jm.at("kind").get<std::string>());
    entry.spec.latent_dim = cfg.latent_dim;
    entry.spec.ambient_dim = cfg.m;
    if (jm.contains("n-coupling")) entry.spec.n_coupling = jm.at("n-coupling").get<std::size_t>();
    if (jm.contains("activation"))
      entry.spec.activation =
          generative::activation_from_name(jm.at("activation").get<std::string>());
    entry.label = jm.contains("label") ? jm.at("label").get<std::string>()
                                       : detail::default_label(entry.spec);
    cfg.models.push_back(std::move(entry));
  }

  if (j.contains("j-values")) cfg.j_values = j.at("j-values").get<std::vector<std::size_t>>();
  if (j.contains("j-test")) cfg.j_test = j.at("j-test").get<std::size_t>();
  if (j.contains("lmmse-lambda-grid"))
    cfg.lmmse_lambda_grid = j.at("lmmse-lambda-grid").get<std::vector<double>>();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config parse error in " + path + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config field error in " + path + ": " + e.what());
  }
}

/// Checks every range constraint and reports all violations in one error.
inline void validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> bad;
  if (cfg.models.empty()) bad.push_back("models: at least one model required");
  for (std::size_t i = 0; i < cfg.models.size(); ++i) {
    const auto& spec = cfg.models[i].spec;
    const std::string where = "models[" + std::to_string(i) + "]";
    if (spec.kind == generative::ModelKind::rnvp) {
      if (spec.n_coupling < 1) bad.push_back(where + ": rnvp needs n-coupling >= 1");
      if (cfg.latent_dim % 2 != 0) bad.push_back(where + ": rnvp needs even M");
    }
    if (spec.kind != generative::ModelKind::identity && cfg.m != cfg.latent_dim)
      bad.push_back(where + ": " + generative::model_kind_name(spec.kind) + " needs m == M");
  }
  if (cfg.m == 0) bad.push_back("m: must be positive");
  if (cfg.latent_dim == 0) bad.push_back("M: must be positive");
  if (cfg.k_sparsity == 0 || cfg.k_sparsity > cfg.latent_dim)
    bad.push_back("K: must satisfy 1 <= K <= M");
  if (std::isnan(cfg.snr_db)) bad.push_back("snr_db: must not be NaN");
  if (cfg.alpha_grid.empty()) bad.push_back("alpha-grid: must be non-empty");
  for (double a : cfg.alpha_grid)
    if (!(a > 0.0 && a <= 1.0)) {
      bad.push_back("alpha-grid: entries must lie in (0, 1]");
      break;
    }
  if (cfg.lambda_grid.empty()) bad.push_back("lambda-grid: must be non-empty");
  for (double l : cfg.lambda_grid)
    if (!(l >= 0.0 && l <= 1.0)) {
      bad.push_back("lambda-grid: entries must lie in [0, 1]");
      break;
    }
  if (cfg.trials < 1) bad.push_back("trials: must be >= 1");
  if (!(cfg.solver.eta > 0.0)) bad.push_back("solver-opts.eta: must be positive");
  if (cfg.solver.max_iters < 1) bad.push_back("solver-opts.max-iters: must be >= 1");
  if (!(cfg.solver.tol >= 0.0)) bad.push_back("solver-opts.tol: must be >= 0");
  if (cfg.output_dir.empty()) bad.push_back("output-dir: must be non-empty");
  if (cfg.study == Study::nnlm) {
    if (cfg.j_values.empty()) bad.push_back("j-values: must be non-empty");
    for (std::size_t i = 1; i < cfg.j_values.size(); ++i)
      if (cfg.j_values[i] <= cfg.j_values[i - 1]) {
        bad.push_back("j-values: must be strictly increasing");
        break;
      }
    if (cfg.j_test < 1) bad.push_back("j-test: must be >= 1");
    if (cfg.lmmse_lambda_grid.empty()) bad.push_back("lmmse-lambda-grid: must be non-empty");
    for (double l : cfg.lmmse_lambda_grid)
      if (!(l > 0.0)) {
        bad.push_back("lmmse-lambda-grid: entries must be positive");
        break;
      }
  }
  if (!bad.empty()) {
    std::string msg = "invalid config:";
    for (const std::string& b : bad) msg += "\n  " + b;
    throw std::invalid_argument(msg);
  }
}

}  // namespace gslrec::experiments

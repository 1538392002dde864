#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "gslrec/experiments/config.hpp"
#include "gslrec/experiments/outputs.hpp"
#include "gslrec/experiments/runner.hpp"

namespace experiments = gslrec::experiments;

namespace {

int run_command(const std::string& config_path, std::size_t workers,
                const std::string& out_override) {
  const auto cfg = experiments::load_config(config_path);
  experiments::validate_config(cfg);
  const auto dir = experiments::resolve_output_dir(cfg, out_override);
  if (cfg.study == experiments::Study::showcase) {
    std::fprintf(stderr, "config study is \"showcase\"; use the showcase subcommand\n");
    return 1;
  }
  if (cfg.study == experiments::Study::nnlm) {
    const auto reports = experiments::run_nnlm_study(cfg);
    experiments::emit_nnlm_outputs(reports, dir);
    std::printf("nnlm study: %zu models -> %s\n", reports.size(), dir.string().c_str());
    return 0;
  }
  const auto rows = experiments::run_experiment(cfg, workers);
  experiments::emit_outputs(rows, cfg, dir);
  std::printf("%s study: %zu rows -> %s\n", experiments::study_name(cfg.study).c_str(),
              rows.size(), dir.string().c_str());
  return 0;
}

int nnlm_command(const std::string& config_path) {
  const auto cfg = experiments::load_config(config_path);
  experiments::validate_config(cfg);
  if (cfg.study != experiments::Study::nnlm) {
    std::fprintf(stderr, "nnlm subcommand needs a config with study \"nnlm\" (got \"%s\")\n",
                 experiments::study_name(cfg.study).c_str());
    return 1;
  }
  const auto dir = experiments::resolve_output_dir(cfg);
  const auto reports = experiments::run_nnlm_study(cfg);
  experiments::emit_nnlm_outputs(reports, dir);
  std::printf("nnlm study: %zu models -> %s\n", reports.size(), dir.string().c_str());
  return 0;
}

int showcase_command(const std::string& config_path, double alpha, double lambda) {
  const auto cfg = experiments::load_config(config_path);
  experiments::validate_config(cfg);
  if (cfg.study != experiments::Study::showcase) {
    std::fprintf(stderr,
                 "showcase subcommand needs a config with study \"showcase\" (got \"%s\")\n",
                 experiments::study_name(cfg.study).c_str());
    return 1;
  }
  const auto dir = experiments::resolve_output_dir(cfg);
  const auto result = experiments::run_showcase(cfg, alpha, lambda);
  experiments::emit_showcase_outputs(result, dir);
  std::printf("showcase: model %s, alpha %g, lambda %g, srnr %.2f dB, asce %.3f -> %s\n",
              result.model_label.c_str(), alpha, lambda, result.srnr_db, result.asce,
              dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-latent generative signal reconstruction experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::size_t workers = 1;
  std::string out_override;
  double alpha = 0.5;
  double lambda = 0.9;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "Path to the experiment config")->required();
  run->add_option("--workers", workers, "Concurrent worker threads");
  run->add_option("--out", out_override, "Output directory override");

  auto* nnlm = app.add_subcommand("nnlm", "Run a non-linearity measurement study");
  nnlm->add_option("--config", config_path, "Path to the experiment config")->required();

  auto* showcase = app.add_subcommand("showcase", "Reconstruct and plot a single realization");
  showcase->add_option("--config", config_path, "Path to the experiment config")->required();
  showcase->add_option("--alpha", alpha, "Sub-sampling ratio n/m");
  showcase->add_option("--lambda", lambda, "Residual weight of the objective");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, workers, out_override);
    if (nnlm->parsed()) return nnlm_command(config_path);
    return showcase_command(config_path, alpha, lambda);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gslrec/experiments/config.hpp"
#include "gslrec/experiments/outputs.hpp"
#include "gslrec/experiments/runner.hpp"

namespace experiments = gslrec::experiments;
namespace generative = gslrec::generative;
namespace fs = std::filesystem;

namespace {

experiments::ExperimentConfig tiny_comparison() {
  experiments::ExperimentConfig cfg;
  cfg.study = experiments::Study::comparison;
  cfg.models.push_back({{generative::ModelKind::identity, 8, 8}, "identity"});
  cfg.models.push_back(
      {{generative::ModelKind::one_layer, 8, 8, 0, generative::Activation::sigmoid}, "sig"});
  cfg.m = 8;
  cfg.latent_dim = 8;
  cfg.k_sparsity = 2;
  cfg.snr_db = 30.0;
  cfg.alpha_grid = {0.25, 0.5, 0.75};
  cfg.lambda_grid = {0.9};
  cfg.trials = 5;
  cfg.seed = 42;
  cfg.solver = {1e-2, 30, 0.0};
  cfg.output_dir = "unused";
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("gslrec_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("grid cardinality fixes the row count", "[experiments]") {
  auto cfg = tiny_comparison();
  auto rows = experiments::run_experiment(cfg);
  // 2 models x 3 alphas x 1 lambda x 2 penalties x 5 trials
  REQUIRE(rows.size() == 60);
  std::map<std::tuple<std::string, double, std::string>, int> per_point;
  for (const auto& r : rows) {
    CHECK(r.study == "comparison");
    CHECK((r.penalty == "l1" || r.penalty == "l2"));
    per_point[{r.model_label, r.alpha, r.penalty}]++;
  }
  REQUIRE(per_point.size() == 12);
  for (const auto& [key, count] : per_point) CHECK(count == 5);
}

TEST_CASE("identical configs give identical csv bytes at any worker count", "[experiments]") {
  auto cfg = tiny_comparison();
  auto rows1 = experiments::run_experiment(cfg, 1);
  auto rows8 = experiments::run_experiment(cfg, 8);
  auto again = experiments::run_experiment(cfg, 1);

  auto d1 = fresh_dir("det1"), d8 = fresh_dir("det8"), d2 = fresh_dir("det2");
  experiments::emit_outputs(rows1, cfg, d1);
  experiments::emit_outputs(rows8, cfg, d8);
  experiments::emit_outputs(again, cfg, d2);
  CHECK(slurp(d1 / "results.csv") == slurp(d8 / "results.csv"));
  CHECK(slurp(d1 / "results.csv") == slurp(d2 / "results.csv"));
  CHECK(slurp(d1 / "aggregate.csv") == slurp(d8 / "aggregate.csv"));
  CHECK(slurp(d1 / "srnr_vs_alpha.svg") == slurp(d8 / "srnr_vs_alpha.svg"));
  fs::remove_all(d1);
  fs::remove_all(d8);
  fs::remove_all(d2);
}

TEST_CASE("penalties inside a trial see the same data stream", "[experiments]") {
  auto cfg = tiny_comparison();
  auto rows = experiments::run_experiment(cfg);
  std::map<std::tuple<std::string, double, double, std::size_t>,
           std::vector<const experiments::ResultRow*>>
      twins;
  for (const auto& r : rows) twins[{r.model_label, r.alpha, r.lambda, r.trial}].push_back(&r);
  REQUIRE(twins.size() == 30);
  for (const auto& [key, group] : twins) {
    REQUIRE(group.size() == 2);
    CHECK(group[0]->stream == group[1]->stream);
    CHECK(group[0]->penalty != group[1]->penalty);
  }
}

TEST_CASE("validation reports every broken field at once", "[experiments]") {
  auto cfg = tiny_comparison();
  cfg.k_sparsity = 99;      // > M
  cfg.alpha_grid = {1.5};   // out of range
  cfg.lambda_grid.clear();  // empty
  cfg.trials = 0;
  cfg.solver.eta = 0.0;
  cfg.output_dir.clear();
  try {
    experiments::validate_config(cfg);
    FAIL("expected validation to throw");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    for (const char* field : {"K:", "alpha-grid:", "lambda-grid:", "trials:",
                              "solver-opts.eta:", "output-dir:"})
      CHECK(msg.find(field) != std::string::npos);
  }
}

TEST_CASE("run_experiment rejects non-sweep studies and invalid configs", "[experiments]") {
  auto cfg = tiny_comparison();
  cfg.study = experiments::Study::nnlm;
  CHECK_THROWS_AS(experiments::run_experiment(cfg), std::invalid_argument);
  auto bad = tiny_comparison();
  bad.k_sparsity = 0;
  CHECK_THROWS_AS(experiments::run_experiment(bad), std::invalid_argument);
}

TEST_CASE("aggregates are recomputable from the raw rows", "[experiments]") {
  auto cfg = tiny_comparison();
  auto rows = experiments::run_experiment(cfg);
  auto aggs = experiments::aggregate_rows(rows);
  REQUIRE(aggs.size() == 12);

  for (const auto& agg : aggs) {
    double srnr = 0.0, asce = 0.0, iters = 0.0;
    std::size_t count = 0;
    for (const auto& r : rows)
      if (r.model_label == agg.model_label && r.alpha == agg.alpha &&
          r.lambda == agg.lambda && r.penalty == agg.penalty) {
        srnr += r.srnr_db;
        asce += r.asce;
        iters += static_cast<double>(r.iterations);
        ++count;
      }
    REQUIRE(count == agg.trials);
    CHECK(agg.mean_srnr_db == Catch::Approx(srnr / count).margin(1e-12));
    CHECK(agg.mean_asce == Catch::Approx(asce / count).margin(1e-12));
    CHECK(agg.mean_iterations == Catch::Approx(iters / count).margin(1e-12));
  }
  CHECK_THROWS_AS(experiments::emit_outputs({}, cfg, fs::temp_directory_path()),
                  std::invalid_argument);
}

TEST_CASE("config files parse, validate, and reject unknown keys", "[experiments]") {
  for (const char* name : {"smoke.json", "lambda_sweep.json", "comparison_protocol.json",
                           "nnlm_protocol.json", "showcase.json"}) {
    auto cfg = experiments::load_config(std::string(TEST_CONFIG_DIR) + "/" + name);
    CHECK_NOTHROW(experiments::validate_config(cfg));
  }

  auto cfg = experiments::load_config(std::string(TEST_CONFIG_DIR) + "/smoke.json");
  CHECK(cfg.study == experiments::Study::comparison);
  CHECK(cfg.models.size() == 2);
  CHECK(cfg.models[1].label == "one_layer_sigmoid");
  CHECK(cfg.models[1].spec.activation == generative::Activation::sigmoid);
  CHECK(cfg.m == 8);
  CHECK(cfg.trials == 2);
  CHECK(cfg.solver.max_iters == 200);

  auto bad_dir = fresh_dir("cfg");
  {
    std::ofstream out(bad_dir / "unknown.json");
    out << R"({"study": "comparison", "typo-key": 1})";
  }
  CHECK_THROWS_AS(experiments::load_config((bad_dir / "unknown.json").string()),
                  std::invalid_argument);
  {
    std::ofstream out(bad_dir / "missing.json");
    out << R"({"study": "comparison"})";
  }
  CHECK_THROWS_AS(experiments::load_config((bad_dir / "missing.json").string()),
                  std::invalid_argument);
  {
    std::ofstream out(bad_dir / "badstudy.json");
    out << R"({"study": "mystery"})";
  }
  CHECK_THROWS_AS(experiments::load_config((bad_dir / "badstudy.json").string()),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiments::load_config((bad_dir / "absent.json").string()),
                  std::runtime_error);
  fs::remove_all(bad_dir);
}

TEST_CASE("nnlm study emits one curve per model with deterministic csv", "[experiments]") {
  experiments::ExperimentConfig cfg;
  cfg.study = experiments::Study::nnlm;
  cfg.models.push_back({{generative::ModelKind::gauss_cdf, 16, 16}, "gc"});
  cfg.models.push_back({{generative::ModelKind::identity, 16, 16}, "id"});
  cfg.m = 16;
  cfg.latent_dim = 16;
  cfg.k_sparsity = 2;
  cfg.alpha_grid = {0.5};
  cfg.lambda_grid = {0.9};
  cfg.trials = 1;
  cfg.seed = 11;
  cfg.output_dir = "unused";
  cfg.j_values = {40, 80};
  cfg.j_test = 30;

  auto reports = experiments::run_nnlm_study(cfg);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].model_label == "gc");
  CHECK(reports[1].model_label == "id");
  for (double v : reports[1].test_nnlm) CHECK(v < 1e-8);

  auto d1 = fresh_dir("nnlm1"), d2 = fresh_dir("nnlm2");
  experiments::emit_nnlm_outputs(reports, d1);
  experiments::emit_nnlm_outputs(experiments::run_nnlm_study(cfg), d2);
  const std::string csv = slurp(d1 / "nnlm.csv");
  CHECK(csv == slurp(d2 / "nnlm.csv"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 2 * 2);
  CHECK(csv.rfind("model,J,split,nnlm,lambda\n", 0) == 0);
  CHECK(fs::exists(d1 / "nnlm_vs_j.svg"));
  fs::remove_all(d1);
  fs::remove_all(d2);

  cfg.study = experiments::Study::comparison;
  CHECK_THROWS_AS(experiments::run_nnlm_study(cfg), std::invalid_argument);
}

TEST_CASE("showcase produces consistent artifacts", "[experiments]") {
  experiments::ExperimentConfig cfg;
  cfg.study = experiments::Study::showcase;
  cfg.models.push_back({{generative::ModelKind::rnvp, 8, 8, 2}, "rnvp2"});
  cfg.m = 8;
  cfg.latent_dim = 8;
  cfg.k_sparsity = 2;
  cfg.snr_db = 30.0;
  cfg.alpha_grid = {0.5};
  cfg.lambda_grid = {0.9};
  cfg.trials = 1;
  cfg.seed = 5;
  cfg.solver = {1e-2, 100, 0.0};
  cfg.output_dir = "unused";

  auto sc = experiments::run_showcase(cfg, 0.5, 0.9);
  CHECK(sc.model_label == "rnvp2");
  REQUIRE(sc.loss_trace.size() >= 2);
  CHECK(sc.loss_trace.back() <= sc.loss_trace.front());
  CHECK(sc.x.size() == 8);
  CHECK(sc.y.size() == 4);
  CHECK(sc.y_hat.size() == 4);

  auto dir = fresh_dir("showcase");
  experiments::emit_showcase_outputs(sc, dir);
  for (const char* name : {"loss_trace.csv", "signals.csv", "latents.csv",
                           "measurements.csv", "loss_trace.svg", "signals.svg", "latents.svg"})
    CHECK(fs::exists(dir / name));
  const std::string signals = slurp(dir / "signals.csv");
  CHECK(std::count(signals.begin(), signals.end(), '\n') == 1 + 8);
  CHECK(signals.rfind("index,x,x_hat\n", 0) == 0);
  fs::remove_all(dir);

  CHECK_THROWS_AS(experiments::run_showcase(cfg, 0.0, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(experiments::run_showcase(cfg, 0.5, 1.5), std::invalid_argument);
  cfg.study = experiments::Study::nnlm;
  CHECK_THROWS_AS(experiments::run_showcase(cfg, 0.5, 0.9), std::invalid_argument);
}

TEST_CASE("csv doubles round-trip through their shortest form", "[experiments]") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e17, 6.02e23, 1e-308, 0.0, -0.0, 123456.789}) {
    const std::string s = experiments::format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
    CHECK(s.find(',') == std::string::npos);
  }
  CHECK(experiments::format_double(0.5) == "0.5");
  CHECK(experiments::format_count(17) == "17");
}

TEST_CASE("output dir resolution prefers flag, then env, then config", "[experiments]") {
  auto cfg = tiny_comparison();
  auto base = fresh_dir("outdir");
  cfg.output_dir = (base / "from_config").string();

  unsetenv(experiments::kOutputDirEnvVar);
  CHECK(experiments::resolve_output_dir(cfg) == fs::path(cfg.output_dir));
  CHECK(fs::exists(base / "from_config"));

  setenv(experiments::kOutputDirEnvVar, (base / "from_env").string().c_str(), 1);
  CHECK(experiments::resolve_output_dir(cfg) == base / "from_env");
  CHECK(experiments::resolve_output_dir(cfg, (base / "from_flag").string()) ==
        base / "from_flag");
  unsetenv(experiments::kOutputDirEnvVar);
  fs::remove_all(base);
}

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "advlab/config.hpp"
#include "advlab/errors.hpp"
#include "advlab/simlab.hpp"
#include "check.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using namespace advlab;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  int threads = 1;
  bool svg = false;
  bool exact_cv = false;
};

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("ADVLAB_OUT"); env && *env) return env;
  return "out";
}

ExperimentConfig load_config(const std::string& experiment,
                             const Options& opt) {
  ExperimentConfig cfg = opt.config_path.empty()
                             ? default_config(experiment)
                             : parse_config_file(opt.config_path);
  for (const auto& kv : opt.sets) apply_override(cfg, kv);
  cfg.validate();
  return cfg;
}

void emit(const std::string& experiment, const ExperimentConfig& cfg,
          const AggregateCurve& curve, const Options& opt) {
  const fs::path dir = resolve_out_dir(opt.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream rc(dir / (experiment + ".resolved-config"),
                     std::ios::binary);
    if (!rc) throw Error("cannot write resolved config");
    rc << serialize_config(cfg);
  }
  const fs::path csv = dir / (experiment + ".csv");
  write_csv(csv.string(), curve);
  std::printf("wrote %s\n", csv.string().c_str());
  if (opt.svg) {
    const fs::path svg = dir / (experiment + ".svg");
    tool::write_svg(svg.string(), curve, experiment);
    std::printf("wrote %s\n", svg.string().c_str());
  }
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "Config file (key=value lines)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out_dir,
                  "Output directory (default $ADVLAB_OUT or ./out)");
  cmd->add_option("--set", opt.sets, "Override, e.g. --set repeats=10");
  cmd->add_option("--threads", opt.threads, "Worker threads for repeats")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--svg", opt.svg, "Also write an SVG line chart");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "advlab: two-stage adversarial training lab for high-dimensional "
      "linear regression"};
  app.require_subcommand(1);
  Options opt;

  auto* fig_compare = app.add_subcommand(
      "fig-compare",
      "Monte Carlo excess risk of clean, vanilla and two-stage training "
      "across aspect ratios");
  auto* fig_theory = app.add_subcommand(
      "fig-theory", "Asymptotic theory curves over the same grid");
  auto* fig_ridge = app.add_subcommand(
      "fig-ridge", "Ridgeless versus grid-best penalty per attack radius");
  auto* fig_lambda = app.add_subcommand(
      "fig-lambda", "Excess risk versus the ridge penalty");
  auto* table_cv = app.add_subcommand(
      "table-cv", "Cross-validation study of the penalty choice");
  auto* check = app.add_subcommand(
      "check", "Run the cross-module invariant suite");
  auto* gen_config = app.add_subcommand(
      "gen-config", "Write the default config for an experiment");

  for (auto* cmd :
       {fig_compare, fig_theory, fig_ridge, fig_lambda, table_cv})
    add_common(cmd, opt);
  table_cv->add_flag("--exact-cv", opt.exact_cv,
                     "Use brute-force leave-one-out refits instead of the "
                     "shortcut");
  check->add_option("--threads", opt.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  std::string gen_name;
  gen_config->add_option("experiment", gen_name,
                         "One of: fig-compare fig-theory fig-ridge "
                         "fig-lambda table-cv")
      ->required();
  gen_config->add_option("--out", opt.out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_config->parsed()) {
      const fs::path dir = resolve_out_dir(opt.out_dir);
      fs::create_directories(dir);
      const fs::path path = dir / (gen_name + ".config");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error("cannot write '" + path.string() + "'");
      out << serialize_config(default_config(gen_name));
      std::printf("wrote %s\n", path.string().c_str());
      return 0;
    }
    if (check->parsed()) return tool::run_check(opt.threads) == 0 ? 0 : 1;

    if (fig_compare->parsed()) {
      const auto cfg = load_config("fig-compare", opt);
      emit("fig-compare", cfg, run_excess_risk_sweep(cfg, opt.threads), opt);
    } else if (fig_theory->parsed()) {
      const auto cfg = load_config("fig-theory", opt);
      emit("fig-theory", cfg, run_theory_curves(cfg), opt);
    } else if (fig_ridge->parsed()) {
      const auto cfg = load_config("fig-ridge", opt);
      emit("fig-ridge", cfg, run_ridge_vs_ridgeless(cfg, opt.threads), opt);
    } else if (fig_lambda->parsed()) {
      const auto cfg = load_config("fig-lambda", opt);
      emit("fig-lambda", cfg, run_lambda_sweep(cfg, opt.threads), opt);
    } else if (table_cv->parsed()) {
      const auto cfg = load_config("table-cv", opt);
      emit("table-cv", cfg,
           run_cv_table(cfg, opt.threads, opt.exact_cv), opt);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

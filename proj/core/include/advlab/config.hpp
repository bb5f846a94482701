#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace advlab {

enum class LambdaPolicy { zero, fixed, best_by_population_risk, cv_selected };
enum class Theta0Mode { spherical, ones };

/// Flat experiment description shared by all subcommands. A config file is
/// plain `key=value` lines; '#' starts a comment; unknown keys are errors.
struct ExperimentConfig {
  int n1 = 100;
  int d = 0;                        // fixed dimension; 0 means use gamma_grid
  std::vector<double> gamma_grid;   // aspect ratios d/n1 to sweep
  std::vector<double> eps_list{0.3};
  std::vector<double> lambda_grid;  // empty = module default grid
  LambdaPolicy lambda_policy = LambdaPolicy::zero;
  double lambda_fixed = 0.0;
  double sigma2 = 0.01;
  Theta0Mode theta0_mode = Theta0Mode::spherical;
  int repeats = 100;
  std::uint64_t master_seed = 20240901;

  /// Throws ConfigError on violated invariants (repeats >= 1, n1 >= 2,
  /// required grids nonempty, nonnegative scalars).
  void validate() const;
};

/// gamma sweep used by the comparison figures: 20 points in [0.1, 5]
/// densified near the interpolation threshold, excluding gamma = 1.
std::vector<double> default_gamma_grid();

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Applies one `key=value` override in place.
void apply_override(ExperimentConfig& cfg, const std::string& kv);

/// Canonical serialization; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

/// Built-in default configs per experiment name: fig-compare, fig-theory,
/// fig-ridge, fig-lambda, table-cv.
ExperimentConfig default_config(const std::string& experiment);

const char* to_string(LambdaPolicy p);
const char* to_string(Theta0Mode m);

}  // namespace advlab

#pragma once

#include <string>
#include <vector>

#include "advlab/config.hpp"

namespace advlab {

struct CurvePoint {
  double x = 0.0;        // gamma, lambda, or eps depending on the experiment
  std::string method;
  double eps = 0.0;
  double lambda = 0.0;
  double mean = 0.0;     // mean excess (or absolute, for table-cv) risk
  double std_err = 0.0;
  int repeats = 0;
};

struct AggregateCurve {
  std::string x_name;    // "gamma", "lambda", or "eps"
  std::vector<CurvePoint> points;
};

/// Monte Carlo comparison of clean ridge, vanilla adversarial training and
/// the two-stage estimator across the aspect-ratio grid. Mean excess
/// adversarial risk with standard errors; identical output for any thread
/// count.
AggregateCurve run_excess_risk_sweep(const ExperimentConfig& cfg,
                                     int threads = 1);

/// Deterministic asymptotic curves over the same grid (no data generation).
/// Points at the ridgeless interpolation pole are skipped.
AggregateCurve run_theory_curves(const ExperimentConfig& cfg);

/// Ridgeless versus grid-best penalty for each attack radius: per gamma,
/// the two-stage excess risk at lambda = 0 and at the lambda minimizing the
/// mean excess risk over the grid.
AggregateCurve run_ridge_vs_ridgeless(const ExperimentConfig& cfg,
                                      int threads = 1);

/// Mean excess adversarial risk of the two-stage estimator versus lambda,
/// one curve per eps.
AggregateCurve run_lambda_sweep(const ExperimentConfig& cfg, int threads = 1);

/// Cross-validation study: per eps, the shortcut-CV training loss at the
/// selected lambda (cv_loss), the population adversarial risk of the
/// selected model (cv_risk), the risk when lambda is selected by clean CV
/// (clean_cv_risk), and the grid-best risk (best_risk). Risks here are
/// absolute, not excess. The lambda column carries the mean selected
/// penalty. use_exact swaps the shortcut for brute-force refits.
AggregateCurve run_cv_table(const ExperimentConfig& cfg, int threads = 1,
                            bool use_exact = false);

/// CSV with header x_value,method,eps,lambda,mean_excess_risk,std_err,repeats
/// and shortest round-trip float formatting.
std::string to_csv(const AggregateCurve& curve);
void write_csv(const std::string& path, const AggregateCurve& curve);

}  // namespace advlab

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "advlab/linmodel.hpp"

namespace advlab {

/// Smallest eps supported by the shortcut coefficients; below it the
/// 1/||theta_tilde - theta_hat|| factors blow up and the classical eps = 0
/// ridge shortcut applies instead.
inline constexpr double kShortcutEpsMin = 1e-6;

/// First-order machinery for the leave-one-out alpha update. All
/// coefficients are specialized to Sigma = I, where theta_tilde, theta_hat
/// and their difference are collinear; the constructor also evaluates the
/// literal matrix forms and checks they agree with the scalar
/// specialization to 1e-12.
///
/// Note the norm factors use s = sqrt(||theta_tilde - theta_hat||^2 +
/// sigma2), matching the sqrt(dist^2 + sigma^2) term of the risk the
/// stationarity condition differentiates; with plain ||theta_tilde -
/// theta_hat|| the update is not first-order exact (the exact-refit ladder
/// test degrades to slope ~1).
struct ShortcutContext {
  Eigen::VectorXd theta_tilde;
  Eigen::VectorXd theta_hat;
  double alpha = 0.0;
  double eps = 0.0;
  double sigma2 = 0.0;
  double A1 = 0.0;        // quadratic-form scalars
  double A2 = 0.0;
  Eigen::VectorXd A3;     // vector term of the projection direction
  Eigen::VectorXd A4;     // linear functionals applied to Delta_j
  Eigen::VectorXd A5;
  Eigen::VectorXd v;      // eps c0 A1 (theta_tilde - theta_hat) + eps c0 A2 theta_tilde + A3
};

ShortcutContext shortcut_coeffs(const Eigen::VectorXd& theta_hat, double alpha,
                                double eps, double sigma2);

/// First-order estimate of alpha^{-j}. delta_j = theta_hat^{-j} - theta_hat
/// (the negative of loo_delta). Clamped at 0.
double alpha_loo(const ShortcutContext& ctx, const Eigen::VectorXd& delta_j);

/// Approximate leave-one-out two-stage estimate
/// theta^{-j} = theta_hat^{-j} / (1 + alpha^{-j}).
Eigen::VectorXd shortcut_loo_estimate(const ShortcutContext& ctx,
                                      const RidgeFit& fit, const Dataset& data,
                                      int j);

/// Shortcut leave-one-out CV of the two-stage estimator; for eps below
/// kShortcutEpsMin this is the classical ridge LOO shortcut
/// (1/n) sum ((y_j - yhat_j)/(1 - S_j))^2.
double shortcut_cv(const Dataset& data, double lambda, double eps,
                   double sigma2);

/// Brute-force oracle: per j, refit ridge on the remaining rows (same
/// n lambda Gram shift), re-solve the fixed point, score the held-out
/// sample.
double exact_cv(const Dataset& data, double lambda, double eps, double sigma2);

struct CvReport {
  std::vector<double> lambda_grid;
  std::vector<double> cv_shortcut;
  std::optional<std::vector<double>> cv_exact;
  double lambda_star = 0.0;  // argmin of cv_shortcut, smallest-lambda ties
  double eps = 0.0;
  double sigma2 = 0.0;
};

CvReport select_lambda(const Dataset& data, std::span<const double> grid,
                       double eps, double sigma2, bool use_exact = false);

/// Default 25-point log grid on [1e-3, 30].
std::vector<double> default_lambda_grid();

}  // namespace advlab

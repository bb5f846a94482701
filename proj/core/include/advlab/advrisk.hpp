#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "advlab/linmodel.hpp"

namespace advlab {

/// E|N(0,1)| = sqrt(2/pi), the Gaussian constant in the adversarial risk.
inline constexpr double kC0 = 0.7978845608028653558798921198687;

struct RiskBreakdown {
  double dist2 = 0.0;   // ||theta - theta_ref||^2 (Sigma = I)
  double norm2 = 0.0;   // ||theta||^2
  double risk = 0.0;    // total R_eps
  double eps = 0.0;
  double sigma2 = 0.0;
};

/// R_eps = dist2 + sigma2 + 2 c0 eps sqrt(norm2) sqrt(dist2 + sigma2)
///       + eps^2 norm2. The additive sigma2 is included uniformly.
RiskBreakdown population_adv_risk(double dist2, double norm2, double sigma2,
                                  double eps);

/// Closed-form l2-ball adversarial squared loss (|x'theta - y| + eps ||theta||)^2.
double adv_loss_pointwise(const Eigen::VectorXd& x, double y,
                          const Eigen::VectorXd& theta, double eps);

struct FixedPointResult {
  double alpha = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool diverged = false;  // no root below 1e8: the minimizer is theta = 0
};

/// Solves alpha + eps c0 alpha h / g(alpha) = eps c0 g(alpha) / h + eps^2
/// with g = sqrt(h^2 alpha^2 + sigma2 (1 + alpha)^2), h = norm_theta, by
/// bracketed bisection. eps = 0 returns alpha = 0 exactly.
FixedPointResult solve_alpha(double norm_theta, double sigma2, double eps,
                             double tol = 1e-10);

/// theta_hat / (1 + alpha); the zero vector when diverged.
Eigen::VectorXd two_stage_map(const Eigen::VectorXd& theta_hat,
                              const FixedPointResult& alpha);

struct RobustModel {
  Eigen::VectorXd theta;
  double risk = 0.0;
};

/// The population risk minimizer theta_eps = theta0 / (1 + alpha(||theta0||))
/// and its risk.
RobustModel best_robust_model(const GroundTruth& truth, double eps);

/// Risk of the best robust model from scalars only (used by the theory path).
double best_robust_risk(double r2, double sigma2, double eps);

/// R_eps(theta, theta0) - R_eps(theta_eps, theta0).
double excess_adv_risk(const Eigen::VectorXd& theta, const GroundTruth& truth,
                       double eps);

/// Scalar form: theta described by (dist2, norm2) relative to theta0.
double excess_adv_risk(double dist2, double norm2, double r2, double sigma2,
                       double eps);

struct McRisk {
  double estimate = 0.0;
  double std_error = 0.0;  // NaN when m < 2 (unusable)
};

/// Monte Carlo estimate of R_eps from m fresh (x, y) draws.
McRisk mc_adv_risk(const Eigen::VectorXd& theta, const GroundTruth& truth,
                   double eps, std::int64_t m, std::uint64_t seed);

}  // namespace advlab

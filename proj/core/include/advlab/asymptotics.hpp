#pragma once

namespace advlab {

/// Companion Stieltjes transform m_gamma(-lambda) of the Marchenko-Pastur
/// law: the positive root of gamma lambda m^2 + (1 - gamma + lambda) m - 1.
/// Requires gamma > 0, lambda > 0.
double stieltjes_m(double gamma, double lambda);

/// d m_gamma(z)/dz at z = -lambda, by implicit differentiation:
///   m' = (gamma m^2 + m) / (2 gamma lambda m + 1 - gamma + lambda).
double stieltjes_m_prime(double gamma, double lambda);

struct CleanLimits {
  double dist2 = 0.0;  // lim ||theta_hat(lambda) - theta0||^2
  double norm2 = 0.0;  // lim ||theta_hat(lambda)||^2
  double inner = 0.0;  // lim theta_hat(lambda)' theta0
};

/// Asymptotic limits of the clean ridge estimate. lambda = 0 uses the
/// closed-form ridgeless limits; gamma = 1 with lambda = 0 throws PoleError.
CleanLimits theory_clean_limits(double gamma, double lambda, double r2,
                                double sigma2);

struct TwoStageLimits {
  double alpha = 0.0;       // limiting shrinkage parameter
  double dist2 = 0.0;       // lim ||theta_tilde - theta0||^2
  double norm2 = 0.0;       // lim ||theta_tilde||^2
  double excess_risk = 0.0; // limiting excess adversarial risk
};

TwoStageLimits theory_two_stage_limits(double gamma, double lambda, double r2,
                                       double sigma2, double eps);

}  // namespace advlab

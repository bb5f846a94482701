#include "advlab/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "advlab/advrisk.hpp"
#include "advlab/errors.hpp"
#include "advlab/linmodel.hpp"

namespace advlab {

double stieltjes_m(double gamma, double lambda) {
  if (gamma <= 0.0) throw ArgumentError("gamma must be positive");
  if (lambda <= 0.0)
    throw ArgumentError("stieltjes_m requires lambda > 0 (ridgeless limits "
                        "live in theory_clean_limits)");
  const double b = 1.0 - gamma + lambda;
  const double disc = std::sqrt(b * b + 4.0 * lambda * gamma);
  // Pick the cancellation-free expression for the positive root.
  return b >= 0.0 ? 2.0 / (b + disc) : (disc - b) / (2.0 * gamma * lambda);
}

double stieltjes_m_prime(double gamma, double lambda) {
  const double m = stieltjes_m(gamma, lambda);
  return (gamma * m * m + m) / (2.0 * gamma * lambda * m + 1.0 - gamma + lambda);
}

namespace {

CleanLimits ridgeless_limits(double gamma, double r2, double sigma2) {
  if (std::abs(gamma - 1.0) < 1e-12)
    throw PoleError("ridgeless risk diverges at the interpolation threshold "
                    "gamma = 1");
  CleanLimits lim;
  if (gamma < 1.0) {
    lim.dist2 = sigma2 * gamma / (1.0 - gamma);
    lim.norm2 = r2 + sigma2 * gamma / (1.0 - gamma);
    lim.inner = r2;
  } else {
    lim.dist2 = r2 * (1.0 - 1.0 / gamma) + sigma2 / (gamma - 1.0);
    lim.norm2 = r2 / gamma + sigma2 / (gamma - 1.0);
    lim.inner = r2 / gamma;
  }
  return lim;
}

}  // namespace

CleanLimits theory_clean_limits(double gamma, double lambda, double r2,
                                double sigma2) {
  if (gamma <= 0.0) throw ArgumentError("gamma must be positive");
  if (lambda < 0.0 || r2 < 0.0 || sigma2 < 0.0)
    throw ArgumentError("lambda, r2, sigma2 must be nonnegative");
  if (lambda < kRidgelessThreshold) return ridgeless_limits(gamma, r2, sigma2);
  const double m = stieltjes_m(gamma, lambda);
  const double mp = stieltjes_m_prime(gamma, lambda);
  CleanLimits lim;
  const double noise = sigma2 * gamma * (m - lambda * mp);
  lim.dist2 = lambda * lambda * r2 * mp + noise;
  lim.norm2 = r2 * (1.0 - 2.0 * lambda * m + lambda * lambda * mp) + noise;
  lim.inner = r2 * (1.0 - lambda * m);
  return lim;
}

TwoStageLimits theory_two_stage_limits(double gamma, double lambda, double r2,
                                       double sigma2, double eps) {
  if (eps < 0.0) throw ArgumentError("eps must be nonnegative");
  const CleanLimits clean = theory_clean_limits(gamma, lambda, r2, sigma2);
  const auto fp = solve_alpha(std::sqrt(clean.norm2), sigma2, eps);
  TwoStageLimits out;
  if (fp.diverged) {
    // theta_tilde = 0 sentinel
    out.alpha = std::numeric_limits<double>::infinity();
    out.dist2 = r2;
    out.norm2 = 0.0;
  } else {
    out.alpha = fp.alpha;
    const double k = 1.0 / (1.0 + fp.alpha);
    out.norm2 = clean.norm2 * k * k;
    out.dist2 = out.norm2 + r2 - 2.0 * clean.inner * k;
  }
  out.excess_risk = excess_adv_risk(out.dist2, out.norm2, r2, sigma2, eps);
  return out;
}

}  // namespace advlab

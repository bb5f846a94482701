#include "advlab/advrisk.hpp"

#include <cmath>
#include <limits>

#include "advlab/errors.hpp"
#include "advlab/rng.hpp"

namespace advlab {

RiskBreakdown population_adv_risk(double dist2, double norm2, double sigma2,
                                  double eps) {
  if (dist2 < 0.0 || norm2 < 0.0 || sigma2 < 0.0 || eps < 0.0)
    throw ArgumentError("population_adv_risk arguments must be nonnegative");
  RiskBreakdown r;
  r.dist2 = dist2;
  r.norm2 = norm2;
  r.eps = eps;
  r.sigma2 = sigma2;
  r.risk = dist2 + sigma2 +
           2.0 * kC0 * eps * std::sqrt(norm2) * std::sqrt(dist2 + sigma2) +
           eps * eps * norm2;
  return r;
}

double adv_loss_pointwise(const Eigen::VectorXd& x, double y,
                          const Eigen::VectorXd& theta, double eps) {
  if (x.size() != theta.size())
    throw ArgumentError("adv_loss_pointwise: dimension mismatch");
  const double a = std::abs(x.dot(theta) - y) + eps * theta.norm();
  return a * a;
}

namespace {

double fixed_point_gap(double alpha, double h, double sigma2, double eps) {
  const double g =
      std::sqrt(h * h * alpha * alpha + sigma2 * (1.0 + alpha) * (1.0 + alpha));
  return alpha + eps * kC0 * alpha * h / g - eps * kC0 * g / h - eps * eps;
}

}  // namespace

FixedPointResult solve_alpha(double norm_theta, double sigma2, double eps,
                             double tol) {
  if (norm_theta < 0.0 || sigma2 < 0.0 || eps < 0.0)
    throw ArgumentError("solve_alpha arguments must be nonnegative");
  FixedPointResult out;
  if (eps == 0.0) return out;  // alpha = 0, f(0) = 0
  if (norm_theta < 1e-10) {
    out.diverged = true;  // degenerate clean estimate, theta_tilde = 0
    return out;
  }
  const double h = norm_theta;
  if (sigma2 == 0.0) {
    // g = h alpha for alpha > 0: the equation is linear. The risk is kinked
    // at alpha = 0 and the minimizer clamps there when eps < c0.
    if (eps * kC0 >= 1.0) {
      out.diverged = true;
      return out;
    }
    out.alpha = std::max(0.0, eps * (eps - kC0) / (1.0 - eps * kC0));
    out.residual = 0.0;
    return out;
  }
  double lo = 0.0, hi = 1.0;
  int iters = 0;
  while (fixed_point_gap(hi, h, sigma2, eps) < 0.0) {
    hi *= 2.0;
    ++iters;
    if (hi > 1e8) {
      out.diverged = true;
      out.iterations = iters;
      return out;
    }
  }
  double mid = 0.5 * (lo + hi);
  for (; iters < 400; ++iters) {
    mid = 0.5 * (lo + hi);
    const double f = fixed_point_gap(mid, h, sigma2, eps);
    if (std::abs(f) < tol || (hi - lo) < 1e-16 * (1.0 + hi)) break;
    if (f < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.alpha = mid;
  out.residual = std::abs(fixed_point_gap(mid, h, sigma2, eps));
  out.iterations = iters;
  return out;
}

Eigen::VectorXd two_stage_map(const Eigen::VectorXd& theta_hat,
                              const FixedPointResult& alpha) {
  if (alpha.diverged) return Eigen::VectorXd::Zero(theta_hat.size());
  return theta_hat / (1.0 + alpha.alpha);
}

RobustModel best_robust_model(const GroundTruth& truth, double eps) {
  const auto fp = solve_alpha(std::sqrt(truth.r2), truth.sigma2, eps);
  RobustModel out;
  out.theta = two_stage_map(truth.theta0, fp);
  const double dist2 = (out.theta - truth.theta0).squaredNorm();
  out.risk =
      population_adv_risk(dist2, out.theta.squaredNorm(), truth.sigma2, eps).risk;
  return out;
}

double best_robust_risk(double r2, double sigma2, double eps) {
  const auto fp = solve_alpha(std::sqrt(r2), sigma2, eps);
  if (fp.diverged) return population_adv_risk(r2, 0.0, sigma2, eps).risk;
  const double k = 1.0 / (1.0 + fp.alpha);
  return population_adv_risk((1.0 - k) * (1.0 - k) * r2, k * k * r2, sigma2, eps)
      .risk;
}

double excess_adv_risk(const Eigen::VectorXd& theta, const GroundTruth& truth,
                       double eps) {
  const double dist2 = (theta - truth.theta0).squaredNorm();
  return excess_adv_risk(dist2, theta.squaredNorm(), truth.r2, truth.sigma2, eps);
}

double excess_adv_risk(double dist2, double norm2, double r2, double sigma2,
                       double eps) {
  return population_adv_risk(dist2, norm2, sigma2, eps).risk -
         best_robust_risk(r2, sigma2, eps);
}

McRisk mc_adv_risk(const Eigen::VectorXd& theta, const GroundTruth& truth,
                   double eps, std::int64_t m, std::uint64_t seed) {
  if (m < 1) throw ArgumentError("mc_adv_risk needs m >= 1");
  if (theta.size() != truth.theta0.size())
    throw ArgumentError("mc_adv_risk: dimension mismatch");
  auto eng = make_engine(seed, /*stream=*/0x6d63ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = truth.d();
  const double sigma = std::sqrt(truth.sigma2);
  const double nt = theta.norm();
  double sum = 0.0, sumsq = 0.0;
  Eigen::VectorXd x(d);
  for (std::int64_t i = 0; i < m; ++i) {
    for (int j = 0; j < d; ++j) x[j] = gauss(eng);
    const double y = x.dot(truth.theta0) + sigma * gauss(eng);
    const double a = std::abs(x.dot(theta) - y) + eps * nt;
    const double loss = a * a;
    sum += loss;
    sumsq += loss * loss;
  }
  McRisk out;
  out.estimate = sum / static_cast<double>(m);
  if (m < 2) {
    out.std_error = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double var =
        (sumsq / static_cast<double>(m) - out.estimate * out.estimate) /
        static_cast<double>(m - 1);
    out.std_error = std::sqrt(std::max(0.0, var));
  }
  return out;
}

}  // namespace advlab

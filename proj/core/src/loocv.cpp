#include "advlab/loocv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "advlab/advrisk.hpp"
#include "advlab/errors.hpp"

namespace advlab {

namespace {

// Literal matrix-form evaluation with Sigma = I, used to cross-check the
// scalar specialization below. M = Sigma + alpha I.
ShortcutContext dense_coeffs(const Eigen::VectorXd& b, double alpha, double eps,
                             double sigma2) {
  const int d = static_cast<int>(b.size());
  const Eigen::MatrixXd Sigma = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd M = Sigma + alpha * Eigen::MatrixXd::Identity(d, d);
  const auto solver = M.llt();
  ShortcutContext c;
  c.theta_hat = b;
  c.theta_tilde = solver.solve(Sigma * b);
  const Eigen::VectorXd& t = c.theta_tilde;
  const Eigen::VectorXd u = t - b;
  const double p = std::sqrt(t.dot(Sigma * t));
  const double s = std::sqrt(u.dot(Sigma * u) + sigma2);
  const Eigen::VectorXd M2b = solver.solve(solver.solve(b));
  const Eigen::VectorXd M1t = solver.solve(t);
  const Eigen::VectorXd M1u = solver.solve(u);
  c.A1 = t.dot(M2b) / (s * p) - (p / (s * s * s)) * u.dot(M2b);
  c.A2 = u.dot(M2b) / (s * p) - (s / (p * p * p)) * t.dot(M2b);
  c.A3 = (1.0 + eps * kC0 * p / s) * M1t +
         (eps * kC0 * s / p + eps * eps) * M1t;
  c.A4 = (1.0 / (s * p)) * M1t + (p / (s * s * s)) * alpha * M1u;
  c.A5 = -(alpha / (s * p)) * M1u - (s / (p * p * p)) * M1t;
  c.v = eps * kC0 * c.A1 * u + eps * kC0 * c.A2 * t + c.A3;
  return c;
}

double classical_ridge_loo(const RidgeFit& fit, const Dataset& data) {
  const int n = data.n();
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double gap = 1.0 - fit.leverage[j];
    if (gap < 1e-12)
      throw DegenerateLeverageError("leverage at 1 for sample " +
                                    std::to_string(j));
    const double r = (data.y[j] - fit.fitted[j]) / gap;
    acc += r * r;
  }
  return acc / static_cast<double>(n);
}

}  // namespace

ShortcutContext shortcut_coeffs(const Eigen::VectorXd& theta_hat, double alpha,
                                double eps, double sigma2) {
  if (eps < kShortcutEpsMin)
    throw ArgumentError("shortcut_coeffs requires eps >= 1e-6");
  if (alpha < 0.0 || sigma2 < 0.0)
    throw ArgumentError("alpha and sigma2 must be nonnegative");
  ShortcutContext c;
  c.theta_hat = theta_hat;
  c.alpha = alpha;
  c.eps = eps;
  c.sigma2 = sigma2;
  const double k1 = 1.0 / (1.0 + alpha);
  const double k2 = k1 * k1;
  c.theta_tilde = k1 * theta_hat;
  const Eigen::VectorXd& t = c.theta_tilde;
  const Eigen::VectorXd u = t - theta_hat;
  const double p = t.norm();
  const double s = std::sqrt(u.squaredNorm() + sigma2);
  if (p <= 0.0 || s <= 0.0)
    throw DegenerateContextError(
        "shortcut coefficients undefined for a zero estimate or zero "
        "perturbation scale");
  const double tb = t.dot(theta_hat);
  const double ub = u.dot(theta_hat);
  c.A1 = tb * k2 / (s * p) - (p / (s * s * s)) * ub * k2;
  c.A2 = ub * k2 / (s * p) - (s / (p * p * p)) * tb * k2;
  c.A3 = (1.0 + eps * kC0 * p / s) * k1 * t +
         (eps * kC0 * s / p + eps * eps) * k1 * t;
  c.A4 = (1.0 / (s * p)) * k1 * t + (p / (s * s * s)) * alpha * k1 * u;
  c.A5 = -(alpha / (s * p)) * k1 * u - (s / (p * p * p)) * k1 * t;
  c.v = eps * kC0 * c.A1 * u + eps * kC0 * c.A2 * t + c.A3;

  const ShortcutContext ref = dense_coeffs(theta_hat, alpha, eps, sigma2);
  const double scale = 1.0 + ref.v.norm();
  const double drift =
      std::abs(c.A1 - ref.A1) + std::abs(c.A2 - ref.A2) +
      (c.A3 - ref.A3).norm() + (c.A4 - ref.A4).norm() +
      (c.A5 - ref.A5).norm() + (c.v - ref.v).norm();
  if (!(drift <= 1e-12 * scale))
    throw NumericError("scalar shortcut coefficients drifted from the matrix "
                       "forms");
  return c;
}

double alpha_loo(const ShortcutContext& ctx, const Eigen::VectorXd& delta_j) {
  if (delta_j.size() != ctx.theta_hat.size())
    throw ArgumentError("alpha_loo: dimension mismatch");
  const Eigen::VectorXd u = ctx.theta_tilde - ctx.theta_hat;
  const double e = ctx.eps;
  const double num =
      ctx.v.dot(e * kC0 * ctx.A4.dot(delta_j) * u +
                e * kC0 * ctx.A5.dot(delta_j) * ctx.theta_tilde);
  return std::max(0.0, ctx.alpha + num / ctx.v.squaredNorm());
}

Eigen::VectorXd shortcut_loo_estimate(const ShortcutContext& ctx,
                                      const RidgeFit& fit, const Dataset& data,
                                      int j) {
  const Eigen::VectorXd delta = -loo_delta(fit, data, j);
  const double aj = alpha_loo(ctx, delta);
  return (ctx.theta_hat + delta) / (1.0 + aj);
}

double shortcut_cv(const Dataset& data, double lambda, double eps,
                   double sigma2) {
  if (eps < 0.0 || sigma2 < 0.0)
    throw ArgumentError("eps and sigma2 must be nonnegative");
  const RidgeFit fit = ridge_fit(data, lambda);
  if (eps < kShortcutEpsMin) return classical_ridge_loo(fit, data);

  const int n = data.n();
  const auto fp = solve_alpha(fit.theta_hat.norm(), sigma2, eps);
  if (fp.diverged) {
    // theta^{-j} = 0 for every j: the CV score is the mean squared response.
    return data.y.squaredNorm() / static_cast<double>(n);
  }
  const ShortcutContext ctx =
      shortcut_coeffs(fit.theta_hat, fp.alpha, eps, sigma2);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd thj = shortcut_loo_estimate(ctx, fit, data, j);
    acc += adv_loss_pointwise(data.X.row(j), data.y[j], thj, eps);
  }
  return acc / static_cast<double>(n);
}

double exact_cv(const Dataset& data, double lambda, double eps, double sigma2) {
  if (eps < 0.0 || sigma2 < 0.0)
    throw ArgumentError("eps and sigma2 must be nonnegative");
  const int n = data.n();
  const int d = data.d();
  if (n < 2) throw ArgumentError("exact_cv needs n >= 2");
  // Refits keep the full-data Gram shift n lambda, matching the rank-one
  // downdate the shortcut linearizes around.
  const double lam_eff =
      lambda < kRidgelessThreshold
          ? 0.0
          : lambda * static_cast<double>(n) / static_cast<double>(n - 1);
  double acc = 0.0;
  Dataset sub;
  sub.X.resize(n - 1, d);
  sub.y.resize(n - 1);
  for (int j = 0; j < n; ++j) {
    int r = 0;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      sub.X.row(r) = data.X.row(i);
      sub.y[r] = data.y[i];
      ++r;
    }
    const RidgeFit fit = ridge_fit(sub, lam_eff);
    const auto fp = solve_alpha(fit.theta_hat.norm(), sigma2, eps);
    const Eigen::VectorXd thj = two_stage_map(fit.theta_hat, fp);
    acc += adv_loss_pointwise(data.X.row(j), data.y[j], thj, eps);
  }
  return acc / static_cast<double>(n);
}

CvReport select_lambda(const Dataset& data, std::span<const double> grid,
                       double eps, double sigma2, bool use_exact) {
  if (grid.empty()) throw ArgumentError("select_lambda: empty grid");
  CvReport rep;
  rep.eps = eps;
  rep.sigma2 = sigma2;
  rep.lambda_grid.assign(grid.begin(), grid.end());
  rep.cv_shortcut.reserve(grid.size());
  if (use_exact) rep.cv_exact.emplace();

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  double best_lambda = nan;
  for (double lam : grid) {
    double score = nan;
    try {
      score = shortcut_cv(data, lam, eps, sigma2);
    } catch (const DegenerateLeverageError&) {
    } catch (const SingularSystemError&) {
    }
    rep.cv_shortcut.push_back(score);
    if (use_exact) {
      double ex = nan;
      try {
        ex = exact_cv(data, lam, eps, sigma2);
      } catch (const SingularSystemError&) {
      }
      rep.cv_exact->push_back(ex);
    }
    if (std::isfinite(score) &&
        (score < best || (score == best && lam < best_lambda))) {
      best = score;
      best_lambda = lam;
    }
  }
  if (!std::isfinite(best))
    throw SelectionError("no lambda on the grid produced a finite CV score");
  rep.lambda_star = best_lambda;
  return rep;
}

std::vector<double> default_lambda_grid() {
  constexpr int k = 25;
  const double lo = std::log10(1e-3), hi = std::log10(30.0);
  std::vector<double> g(k);
  for (int i = 0; i < k; ++i)
    g[i] = std::pow(10.0, lo + (hi - lo) * i / (k - 1));
  return g;
}

}  // namespace advlab

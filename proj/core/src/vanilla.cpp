#include "advlab/vanilla.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "advlab/advrisk.hpp"
#include "advlab/errors.hpp"

namespace advlab {

double adv_objective(const Dataset& data, const Eigen::VectorXd& theta,
                     double eps, double lambda) {
  if (theta.size() != data.d())
    throw ArgumentError("adv_objective: dimension mismatch");
  if (eps < 0.0 || lambda < 0.0)
    throw ArgumentError("eps and lambda must be nonnegative");
  const Eigen::VectorXd resid = data.y - data.X * theta;
  const double nt = theta.norm();
  const double margin = eps * nt;
  double acc = 0.0;
  for (int i = 0; i < resid.size(); ++i) {
    const double a = std::abs(resid[i]) + margin;
    acc += a * a;
  }
  return acc / static_cast<double>(data.n()) + lambda * nt * nt;
}

namespace {

// Subgradient of the objective; 0 chosen at |residual| = 0 and at theta = 0.
Eigen::VectorXd adv_subgradient(const Dataset& data, const Eigen::VectorXd& theta,
                                double eps, double lambda) {
  const int n = data.n();
  const Eigen::VectorXd resid = data.y - data.X * theta;
  const double nt = theta.norm();
  const double margin = eps * nt;
  Eigen::VectorXd w(n);
  double asum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(resid[i]) + margin;
    const double sgn = resid[i] > 0.0 ? 1.0 : (resid[i] < 0.0 ? -1.0 : 0.0);
    w[i] = -a * sgn;
    asum += a;
  }
  Eigen::VectorXd g = (2.0 / n) * (data.X.transpose() * w);
  if (nt > 0.0) g += (2.0 / n) * asum * eps / nt * theta;
  g += 2.0 * lambda * theta;
  return g;
}

}  // namespace

Eigen::VectorXd vanilla_adv_fit(const Dataset& data, double eps, double lambda,
                                const AdvFitOptions& opts) {
  if (opts.max_iters < 1 || opts.step0 <= 0.0 || opts.tol <= 0.0)
    throw ArgumentError("invalid AdvFitOptions");
  Eigen::VectorXd theta;
  if (opts.init == AdvFitOptions::Init::zeros)
    theta = Eigen::VectorXd::Zero(data.d());
  else
    theta = ridge_fit(data, lambda).theta_hat;

  double f = adv_objective(data, theta, eps, lambda);
  double best_f = f;
  Eigen::VectorXd best_theta = theta;
  double step = opts.step0;
  std::deque<double> window{f};

  for (int it = 0; it < opts.max_iters; ++it) {
    const Eigen::VectorXd g = adv_subgradient(data, theta, eps, lambda);
    double s = step;
    double f_next = f;
    Eigen::VectorXd cand;
    while (true) {
      cand = theta - s * g;
      f_next = adv_objective(data, cand, eps, lambda);
      if (!std::isfinite(f_next))
        throw NumericError("non-finite objective at iteration " +
                           std::to_string(it));
      if (f_next <= f) break;
      s *= 0.5;
      if (s < 1e-18) break;
    }
    if (f_next > f) break;  // no descent step found along -g
    theta = cand;
    f = f_next;
    step = 2.0 * s;
    if (f < best_f) {
      best_f = f;
      best_theta = theta;
    }
    window.push_back(f);
    if (static_cast<int>(window.size()) > 51) {
      window.pop_front();
      if (window.front() - f < opts.tol * std::max(1.0, std::abs(f))) break;
    }
  }
  return best_theta;
}

}  // namespace advlab

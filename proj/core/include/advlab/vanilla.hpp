#pragma once

#include <Eigen/Dense>

#include "advlab/linmodel.hpp"

namespace advlab {

struct AdvFitOptions {
  int max_iters = 20000;
  double step0 = 1.0;
  double tol = 1e-9;  // relative objective decrease over a 50-iteration window
  enum class Init { ridge, zeros } init = Init::ridge;
};

/// Empirical adversarial objective with the closed-form inner maximum:
///   (1/n) sum_i (|y_i - x_i'theta| + eps ||theta||)^2 + lambda ||theta||^2.
double adv_objective(const Dataset& data, const Eigen::VectorXd& theta,
                     double eps, double lambda);

/// Full-batch subgradient descent with backtracking line search, warm
/// started at the ridge (or minimum-norm, for lambda = 0 and d > n)
/// solution. Deterministic; the objective never increases along iterates.
Eigen::VectorXd vanilla_adv_fit(const Dataset& data, double eps, double lambda,
                                const AdvFitOptions& opts = {});

}  // namespace advlab

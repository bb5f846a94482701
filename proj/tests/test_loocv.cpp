#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "advlab/advrisk.hpp"
#include "advlab/errors.hpp"
#include "advlab/linmodel.hpp"
#include "advlab/loocv.hpp"
#include "advlab/rng.hpp"

using namespace advlab;

namespace {

Eigen::VectorXd random_vec(int d, std::uint64_t seed) {
  auto eng = make_engine(seed, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = gauss(eng);
  return v;
}

}  // namespace

TEST_CASE("context construction and its invariants") {
  const Eigen::VectorXd b = random_vec(5, 201);
  const double alpha = 0.4, eps = 0.3, sigma2 = 0.01;
  // the scalar specialization must agree with the literal matrix forms;
  // the constructor checks this to 1e-12 and throws otherwise
  ShortcutContext ctx;
  CHECK_NOTHROW(ctx = shortcut_coeffs(b, alpha, eps, sigma2));
  // with Sigma = I the difference is collinear with theta_hat
  const Eigen::VectorXd diff = ctx.theta_tilde - ctx.theta_hat;
  CHECK((diff + alpha / (1.0 + alpha) * b).norm() < 1e-12);
  CHECK(ctx.v.norm() > 0.0);

  CHECK_THROWS_AS(shortcut_coeffs(b, alpha, 1e-7, sigma2), ArgumentError);
  CHECK_THROWS_AS(shortcut_coeffs(Eigen::VectorXd::Zero(5), alpha, eps, sigma2),
                  DegenerateContextError);
}

TEST_CASE("axis-aligned case decouples orthogonal perturbations") {
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(4, 0);
  const auto ctx = shortcut_coeffs(e1, 0.25, 0.3, 0.04);
  const Eigen::VectorXd e2 = Eigen::VectorXd::Unit(4, 1);
  CHECK(std::abs(ctx.A4.dot(e2)) < 1e-14);
  CHECK(std::abs(ctx.A5.dot(e2)) < 1e-14);
  CHECK(alpha_loo(ctx, e2 * 1e-3) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("removing nothing leaves alpha unchanged") {
  const Eigen::VectorXd b = random_vec(6, 211);
  const auto fp = solve_alpha(b.norm(), 0.01, 0.3);
  const auto ctx = shortcut_coeffs(b, fp.alpha, 0.3, 0.01);
  CHECK(alpha_loo(ctx, Eigen::VectorXd::Zero(6)) ==
        doctest::Approx(fp.alpha).epsilon(1e-15));
}

TEST_CASE("first-order update has a quadratic remainder") {
  const Eigen::VectorXd b = random_vec(6, 221);
  // oracle tolerance well below the smallest remainder on the ladder
  const double sigma2 = 0.01, eps = 0.3, tol = 1e-14;
  const auto fp = solve_alpha(b.norm(), sigma2, eps, tol);
  const auto ctx = shortcut_coeffs(b, fp.alpha, eps, sigma2);
  Eigen::VectorXd dir = random_vec(6, 222);
  dir /= dir.norm();
  const std::vector<double> mags{1e-2, 1e-3, 1e-4};
  std::vector<double> errs;
  for (double m : mags) {
    const Eigen::VectorXd delta = m * dir;
    const double exact =
        solve_alpha((b + delta).norm(), sigma2, eps, tol).alpha;
    errs.push_back(std::abs(alpha_loo(ctx, delta) - exact));
  }
  // least-squares slope of log(err) against log(mag)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    const double x = std::log(mags[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(mags.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope >= 1.8);
}

TEST_CASE("deleted rows with zero features reproduce theta_tilde") {
  const auto truth = sample_theta0_spherical(4, 0.04, 231);
  auto data = gen_gaussian_dataset(12, 4, truth, 232);
  data.X.row(3).setZero();
  data.y[3] = 0.0;
  const auto fit = ridge_fit(data, 0.5);
  const auto fp = solve_alpha(fit.theta_hat.norm(), 0.04, 0.3);
  const auto ctx = shortcut_coeffs(fit.theta_hat, fp.alpha, 0.3, 0.04);
  const Eigen::VectorXd est = shortcut_loo_estimate(ctx, fit, data, 3);
  CHECK((est - ctx.theta_tilde).norm() < 1e-12);
}

TEST_CASE("shortcut estimates track exact leave-one-out refits") {
  const auto truth = sample_theta0_ones(200, 0.01);
  const auto data = gen_gaussian_dataset(50, 200, truth, 241);
  const auto fit = ridge_fit(data, 1.0);
  const auto fp = solve_alpha(fit.theta_hat.norm(), 0.01, 0.3);
  const auto ctx = shortcut_coeffs(fit.theta_hat, fp.alpha, 0.3, 0.01);
  int close = 0;
  for (int j = 0; j < 50; ++j) {
    const Eigen::VectorXd approx = shortcut_loo_estimate(ctx, fit, data, j);
    // exact oracle: refit with the full-data Gram shift, re-solve alpha
    Eigen::MatrixXd X(49, 200);
    Eigen::VectorXd y(49);
    int r = 0;
    for (int i = 0; i < 50; ++i) {
      if (i == j) continue;
      X.row(r) = data.X.row(i);
      y[r++] = data.y[i];
    }
    Eigen::MatrixXd gram = X.transpose() * X;
    gram.diagonal().array() += 50.0;
    const Eigen::VectorXd th = gram.ldlt().solve(X.transpose() * y);
    const auto fpj = solve_alpha(th.norm(), 0.01, 0.3);
    const Eigen::VectorXd exact = th / (1.0 + fpj.alpha);
    if ((approx - exact).norm() / exact.norm() < 0.01) ++close;
  }
  CHECK(close >= 48);  // >= 95% of the deleted samples
}

TEST_CASE("eps = 0 CV is the classical ridge shortcut") {
  const auto truth = sample_theta0_spherical(20, 0.09, 251);
  const auto data = gen_gaussian_dataset(40, 20, truth, 252);
  const auto fit = ridge_fit(data, 0.3);
  double classical = 0.0;
  for (int j = 0; j < 40; ++j) {
    const double r = (data.y[j] - fit.fitted[j]) / (1.0 - fit.leverage[j]);
    classical += r * r;
  }
  classical /= 40.0;
  CHECK(shortcut_cv(data, 0.3, 0.0, 0.09) ==
        doctest::Approx(classical).epsilon(1e-9));
}

TEST_CASE("total shrinkage drives CV to the response energy") {
  const auto truth = sample_theta0_spherical(10, 0.25, 261);
  const auto data = gen_gaussian_dataset(30, 10, truth, 262);
  const double target = data.y.squaredNorm() / 30.0;
  CHECK(shortcut_cv(data, 1e6, 0.3, 0.25) ==
        doctest::Approx(target).epsilon(0.01));
}

TEST_CASE("shortcut CV is close to brute-force refits") {
  const auto truth = sample_theta0_ones(200, 0.01);
  const auto data = gen_gaussian_dataset(50, 200, truth, 271);
  const double sc = shortcut_cv(data, 1.0, 0.3, 0.01);
  const double ex = exact_cv(data, 1.0, 0.3, 0.01);
  CHECK(std::abs(sc - ex) / ex < 0.02);
}

TEST_CASE("exact CV on two points matches hand enumeration") {
  Dataset data;
  data.X = Eigen::MatrixXd(2, 1);
  data.X << 1.5, -0.5;
  data.y = Eigen::VectorXd(2);
  data.y << 2.0, 0.7;
  const double lam = 0.4, eps = 0.3, sigma2 = 0.25;
  double hand = 0.0;
  for (int j = 0; j < 2; ++j) {
    const int i = 1 - j;
    // one-sample ridge keeping the full-data shift n lambda = 0.8
    const double th =
        data.X(i, 0) * data.y[i] / (data.X(i, 0) * data.X(i, 0) + 0.8);
    const auto fp = solve_alpha(std::abs(th), sigma2, eps);
    const double tt = th / (1.0 + fp.alpha);
    const double a = std::abs(data.X(j, 0) * tt - data.y[j]) +
                     eps * std::abs(tt);
    hand += a * a;
  }
  hand /= 2.0;
  CHECK(exact_cv(data, lam, eps, sigma2) ==
        doctest::Approx(hand).epsilon(1e-12));
}

TEST_CASE("lambda selection") {
  const auto truth = sample_theta0_spherical(10, 4.0, 281);
  const auto data = gen_gaussian_dataset(40, 10, truth, 282);

  const std::vector<double> single{0.7};
  CHECK(select_lambda(data, single, 0.3, 4.0).lambda_star == 0.7);

  // strong noise: some regularization beats the smallest grid point
  const auto grid = default_lambda_grid();
  CHECK(grid.size() == 25);
  CHECK(grid.front() == doctest::Approx(1e-3));
  CHECK(grid.back() == doctest::Approx(30.0));
  const auto rep = select_lambda(data, grid, 0.0, 4.0);
  CHECK(rep.lambda_star > grid.front());
  CHECK(rep.cv_shortcut.size() == 25);
  CHECK_FALSE(rep.cv_exact.has_value());

  const auto both = select_lambda(data, single, 0.3, 4.0, true);
  REQUIRE(both.cv_exact.has_value());
  CHECK((*both.cv_exact)[0] > 0.0);
}

TEST_CASE("degenerate grids raise a selection error") {
  const auto truth = sample_theta0_spherical(30, 0.04, 291);
  const auto data = gen_gaussian_dataset(10, 30, truth, 292);  // d > n
  const std::vector<double> grid{0.0};  // min-norm: leverages are all 1
  CHECK_THROWS_AS(select_lambda(data, grid, 0.3, 0.04), SelectionError);
}

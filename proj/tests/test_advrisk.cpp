#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "advlab/advrisk.hpp"
#include "advlab/errors.hpp"
#include "advlab/linmodel.hpp"
#include "advlab/rng.hpp"

using namespace advlab;

namespace {

double risk_of(const Eigen::VectorXd& theta, const Eigen::VectorXd& ref,
               double sigma2, double eps) {
  return population_adv_risk((theta - ref).squaredNorm(), theta.squaredNorm(),
                             sigma2, eps)
      .risk;
}

}  // namespace

TEST_CASE("risk formula spot values") {
  CHECK(population_adv_risk(0.0, 0.0, 1.0, 0.0).risk == doctest::Approx(1.0));
  for (double e : {0.0, 0.3, 2.0})
    CHECK(population_adv_risk(1.0, 0.0, 1.0, e).risk == doctest::Approx(2.0));
  CHECK(population_adv_risk(1.0, 1.0, 1.0, 0.3).risk ==
        doctest::Approx(2.7670275).epsilon(1e-6));
  CHECK_THROWS_AS(population_adv_risk(-1.0, 0.0, 1.0, 0.1), ArgumentError);
}

TEST_CASE("pointwise loss closed form") {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3), th = Eigen::VectorXd::Zero(3);
  th[0] = 1.0;
  CHECK(adv_loss_pointwise(x, 1.0, th, 0.5) == doctest::Approx(2.25));
  x << 1.0, -2.0, 0.5;
  CHECK(adv_loss_pointwise(x, 0.7, th, 0.0) ==
        doctest::Approx((x[0] - 0.7) * (x[0] - 0.7)));
}

TEST_CASE("pointwise loss matches the sampled worst-case attack") {
  auto eng = make_engine(5, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = 4;
  Eigen::VectorXd x(d), th(d);
  for (int i = 0; i < d; ++i) {
    x[i] = gauss(eng);
    th[i] = gauss(eng);
  }
  const double y = gauss(eng), eps = 0.4;
  const double closed = adv_loss_pointwise(x, y, th, eps);
  // the maximum is attained at delta = +/- eps theta/||theta||
  double sampled = 0.0;
  for (int k = 0; k < 100000; ++k) {
    Eigen::VectorXd delta(d);
    for (int i = 0; i < d; ++i) delta[i] = gauss(eng);
    delta *= eps * std::pow(std::abs(gauss(eng)), 0.25) /
             std::max(delta.norm(), 1e-12);
    if (delta.norm() > eps) delta *= eps / delta.norm();
    const double v = (x + delta).dot(th) - y;
    sampled = std::max(sampled, v * v);
  }
  for (double s : {-1.0, 1.0}) {
    const double v = (x + s * eps * th / th.norm()).dot(th) - y;
    sampled = std::max(sampled, v * v);
  }
  CHECK(sampled <= closed * (1.0 + 1e-12));
  CHECK(sampled == doctest::Approx(closed).epsilon(0.005));
}

TEST_CASE("fixed point solver") {
  CHECK(solve_alpha(1.0, 1.0, 0.0).alpha == 0.0);
  const auto fp = solve_alpha(1.0, 1.0, 0.3);
  CHECK_FALSE(fp.diverged);
  CHECK(fp.alpha == doctest::Approx(0.36667723500054).epsilon(1e-8));
  CHECK(fp.residual < 1e-10);
  CHECK(solve_alpha(1e-12, 1.0, 0.3).diverged);
  CHECK_THROWS_AS(solve_alpha(-1.0, 1.0, 0.3), ArgumentError);
}

TEST_CASE("noiseless fixed point uses the closed form") {
  // g = h alpha turns the equation linear in alpha
  const double e = 0.5;
  const auto fp = solve_alpha(2.0, 0.0, e);
  CHECK(fp.alpha ==
        doctest::Approx(std::max(0.0, e * (e - kC0) / (1.0 - e * kC0))));
  CHECK(solve_alpha(1.0, 0.0, 1.5).diverged);  // eps c0 >= 1
  CHECK(solve_alpha(1.0, 0.0, 0.2).alpha == 0.0);  // clamped at the kink
}

TEST_CASE("two-stage map basics") {
  Eigen::VectorXd th = Eigen::VectorXd::Unit(3, 0);
  FixedPointResult fp;
  CHECK((two_stage_map(th, fp) - th).norm() == 0.0);
  fp.alpha = 1.0;
  CHECK((two_stage_map(th, fp) - 0.5 * th).norm() < 1e-15);
  fp.diverged = true;
  CHECK(two_stage_map(th, fp).norm() == 0.0);
}

TEST_CASE("two-stage map is first-order optimal for the population risk") {
  auto eng = make_engine(17, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd ref(6);
  for (int i = 0; i < 6; ++i) ref[i] = gauss(eng);
  const double sigma2 = 0.04, eps = 0.3;
  const auto fp = solve_alpha(ref.norm(), sigma2, eps);
  const Eigen::VectorXd theta = two_stage_map(ref, fp);
  Eigen::VectorXd grad(6);
  const double h = 1e-6;
  for (int i = 0; i < 6; ++i) {
    Eigen::VectorXd p = theta, m = theta;
    p[i] += h;
    m[i] -= h;
    grad[i] =
        (risk_of(p, ref, sigma2, eps) - risk_of(m, ref, sigma2, eps)) / (2 * h);
  }
  CHECK(grad.norm() < 1e-5);
}

TEST_CASE("ray optimality of the shrinkage factor") {
  Eigen::VectorXd ref = Eigen::VectorXd::Constant(4, 0.7);
  const double sigma2 = 0.09, eps = 0.4;
  const auto fp = solve_alpha(ref.norm(), sigma2, eps);
  const double best = risk_of(two_stage_map(ref, fp), ref, sigma2, eps);
  for (int i = 0; i <= 100; ++i) {
    const double c = 1.5 * i / 100.0;
    CHECK(best <= risk_of(c * ref, ref, sigma2, eps) + 1e-10);
  }
}

TEST_CASE("best robust model endpoints") {
  const auto truth = sample_theta0_ones(5, 1.0);
  const auto clean = best_robust_model(truth, 0.0);
  CHECK((clean.theta - truth.theta0).norm() < 1e-12);
  CHECK(clean.risk == doctest::Approx(1.0));
  const auto robust = best_robust_model(truth, 0.3);
  CHECK(robust.risk < risk_of(truth.theta0, truth.theta0, 1.0, 0.3));
  CHECK(robust.risk <
        risk_of(Eigen::VectorXd::Zero(5), truth.theta0, 1.0, 0.3));
  const auto null_truth = make_ground_truth(Eigen::VectorXd::Zero(3), 0.5);
  CHECK(best_robust_model(null_truth, 0.7).theta.norm() == 0.0);
  CHECK(best_robust_model(null_truth, 0.7).risk == doctest::Approx(0.5));
}

TEST_CASE("excess risk is nonnegative and vanishes at the best model") {
  const auto truth = sample_theta0_spherical(6, 0.25, 23);
  const double eps = 0.35;
  const auto best = best_robust_model(truth, eps);
  CHECK(excess_adv_risk(best.theta, truth, eps) ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(excess_adv_risk(truth.theta0, truth, 0.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  auto eng = make_engine(29, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    Eigen::VectorXd th(6);
    for (int i = 0; i < 6; ++i) th[i] = 2.0 * gauss(eng);
    CHECK(excess_adv_risk(th, truth, eps) >= -1e-10);
  }
}

TEST_CASE("risk is nondecreasing in the attack radius") {
  Eigen::VectorXd ref = Eigen::VectorXd::Constant(3, 1.0);
  Eigen::VectorXd th = 0.8 * ref;
  double prev = -1.0;
  for (double e : {0.0, 0.1, 0.4, 0.9, 2.0}) {
    const double r = risk_of(th, ref, 0.25, e);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("Monte Carlo risk agrees with the closed form") {
  const auto truth = sample_theta0_ones(4, 1.0);
  const auto clean = mc_adv_risk(truth.theta0, truth, 0.0, 100000, 3);
  CHECK(std::abs(clean.estimate - 1.0) < 3.0 * clean.std_error);

  Eigen::VectorXd th = truth.theta0;
  th[0] += 1.0;  // dist2 = 1
  th *= 1.0;
  const double closed =
      population_adv_risk(1.0, th.squaredNorm(), 1.0, 0.3).risk;
  const auto mc = mc_adv_risk(th, truth, 0.3, 200000, 4);
  CHECK(std::abs(mc.estimate - closed) < 3.0 * mc.std_error);

  CHECK(std::isnan(mc_adv_risk(th, truth, 0.3, 1, 5).std_error));
}

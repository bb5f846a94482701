#include "check.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "advlab/advrisk.hpp"
#include "advlab/asymptotics.hpp"
#include "advlab/config.hpp"
#include "advlab/errors.hpp"
#include "advlab/linmodel.hpp"
#include "advlab/loocv.hpp"
#include "advlab/simlab.hpp"
#include "advlab/vanilla.hpp"

namespace advlab::tool {

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("%s  %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  if (!ok) ++g_failures;
}

void run(const std::string& name, const std::function<bool()>& fn) {
  try {
    report(name, fn());
  } catch (const std::exception& e) {
    report(name, false, e.what());
  }
}

}  // namespace

int run_check(int threads) {
  g_failures = 0;

  run("stieltjes transform solves its quadratic", [] {
    for (double g : {0.2, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0})
      for (double l : {1e-3, 0.1, 1.0, 10.0}) {
        const double m = stieltjes_m(g, l);
        if (std::abs(g * l * m * m + (1 - g + l) * m - 1) > 1e-12) return false;
      }
    return true;
  });

  run("clean limits satisfy 2*inner = r2 + norm2 - dist2", [] {
    for (double g : {0.3, 0.9, 1.5, 4.0})
      for (double l : {0.01, 1.0, 5.0}) {
        const auto c = theory_clean_limits(g, l, 1.3, 0.25);
        if (std::abs(2 * c.inner - (1.3 + c.norm2 - c.dist2)) > 1e-10)
          return false;
      }
    return true;
  });

  run("fixed point residual vanishes", [] {
    for (double h : {0.5, 1.0, 2.0})
      for (double e : {0.1, 0.3, 0.7}) {
        const auto fp = solve_alpha(h, 0.04, e);
        if (fp.diverged || fp.residual > 1e-8) return false;
      }
    return true;
  });

  run("two-stage shrinkage never hurts the population risk", [] {
    for (double n2 : {0.5, 1.0, 3.0})
      for (double e : {0.2, 0.5}) {
        const auto fp = solve_alpha(std::sqrt(n2), 0.04, e);
        const double k = fp.diverged ? 0.0 : 1.0 / (1.0 + fp.alpha);
        // along the ray through theta0 the solver's shrinkage is optimal,
        // so it can only improve on no shrinkage
        const double ray_clean = population_adv_risk(0.0, n2, 0.04, e).risk;
        const double ray_shrunk =
            population_adv_risk((1 - k) * (1 - k) * n2, k * k * n2, 0.04, e).risk;
        if (ray_shrunk > ray_clean + 1e-12) return false;
      }
    return true;
  });

  run("rank-one leave-one-out matches direct refits", [] {
    const auto truth = sample_theta0_spherical(12, 0.04, 5);
    const auto data = gen_gaussian_dataset(30, 12, truth, 6);
    const auto fit = ridge_fit(data, 0.5);
    for (int j : {0, 7, 29}) {
      const Eigen::VectorXd delta = loo_delta(fit, data, j);
      Dataset sub;
      sub.X.resize(29, 12);
      sub.y.resize(29);
      int r = 0;
      for (int i = 0; i < 30; ++i) {
        if (i == j) continue;
        sub.X.row(r) = data.X.row(i);
        sub.y[r++] = data.y[i];
      }
      const auto refit = ridge_fit(sub, 0.5 * 30.0 / 29.0);
      if ((fit.theta_hat - delta - refit.theta_hat).norm() > 1e-8) return false;
    }
    return true;
  });

  run("shortcut CV within 2% of exact refits", [] {
    const auto truth = sample_theta0_ones(200, 0.01);
    const auto data = gen_gaussian_dataset(50, 200, truth, 11);
    const double sc = shortcut_cv(data, 1.0, 0.3, 0.01);
    const double ex = exact_cv(data, 1.0, 0.3, 0.01);
    return std::abs(sc - ex) / ex < 0.02;
  });

  run("eps = 0 CV reduces to the classical ridge shortcut", [] {
    const auto truth = sample_theta0_spherical(20, 0.09, 3);
    const auto data = gen_gaussian_dataset(40, 20, truth, 4);
    const auto fit = ridge_fit(data, 0.3);
    double classical = 0.0;
    for (int j = 0; j < 40; ++j) {
      const double r = (data.y[j] - fit.fitted[j]) / (1.0 - fit.leverage[j]);
      classical += r * r;
    }
    classical /= 40.0;
    const double cv = shortcut_cv(data, 0.3, 0.0, 0.09);
    return std::abs(cv - classical) <= 1e-9 * classical;
  });

  run("vanilla fit does not worsen the training objective", [] {
    const auto truth = sample_theta0_spherical(15, 0.04, 8);
    const auto data = gen_gaussian_dataset(40, 15, truth, 9);
    const auto init = ridge_fit(data, 0.1).theta_hat;
    const auto theta = vanilla_adv_fit(data, 0.4, 0.1);
    return adv_objective(data, theta, 0.4, 0.1) <=
           adv_objective(data, init, 0.4, 0.1) + 1e-12;
  });

  run("sweep output is a deterministic function of the config",
      [threads] {
        auto cfg = default_config("fig-compare");
        cfg.gamma_grid = {0.5, 2.0};
        cfg.repeats = 3;
        const auto a = to_csv(run_excess_risk_sweep(cfg, 1));
        const auto b = to_csv(run_excess_risk_sweep(cfg, threads > 1 ? threads : 2));
        return a == b;
      });

  run("resolved config round-trips", [] {
    auto cfg = default_config("table-cv");
    cfg.eps_list = {0.25, 0.5};
    cfg.master_seed = 777;
    const auto text = serialize_config(cfg);
    return serialize_config(parse_config_text(text)) == text;
  });

  std::printf("%d invariant(s) failed\n", g_failures);
  return g_failures;
}

}  // namespace advlab::tool

#include "advlab/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "advlab/advrisk.hpp"
#include "advlab/asymptotics.hpp"
#include "advlab/errors.hpp"
#include "advlab/linmodel.hpp"
#include "advlab/loocv.hpp"
#include "advlab/rng.hpp"
#include "advlab/vanilla.hpp"

namespace advlab {

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, p);
}

/// Runs job(r) for r in [0, repeats); results land in repeat-index order no
/// matter how many workers execute them, so aggregation is thread-count
/// independent.
std::vector<std::vector<double>> collect_repeats(
    int repeats, int threads,
    const std::function<std::vector<double>(int)>& job) {
  std::vector<std::vector<double>> out(repeats);
  threads = std::clamp(threads, 1, repeats);
  if (threads == 1) {
    for (int r = 0; r < repeats; ++r) out[r] = job(r);
    return out;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const int r = next.fetch_add(1);
        if (r >= repeats) return;
        try {
          out[r] = job(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Sum in repeat-index order for bit-stable aggregates.
MeanSe aggregate(const std::vector<std::vector<double>>& stats, int k) {
  const int m = static_cast<int>(stats.size());
  double sum = 0.0;
  for (int r = 0; r < m; ++r) sum += stats[r][k];
  MeanSe out;
  out.mean = sum / m;
  if (m > 1) {
    double ss = 0.0;
    for (int r = 0; r < m; ++r) {
      const double dv = stats[r][k] - out.mean;
      ss += dv * dv;
    }
    out.se = std::sqrt(ss / (m - 1.0)) / std::sqrt(static_cast<double>(m));
  }
  return out;
}

GroundTruth draw_truth(const ExperimentConfig& cfg, int d,
                       std::uint64_t seed) {
  return cfg.theta0_mode == Theta0Mode::spherical
             ? sample_theta0_spherical(d, cfg.sigma2, seed)
             : sample_theta0_ones(d, cfg.sigma2);
}

std::vector<std::pair<double, int>> gamma_dims(const ExperimentConfig& cfg) {
  std::vector<std::pair<double, int>> out;
  if (!cfg.gamma_grid.empty()) {
    for (double g : cfg.gamma_grid) {
      const int d = std::max(1, static_cast<int>(std::lround(g * cfg.n1)));
      out.emplace_back(g, d);
    }
  } else {
    out.emplace_back(static_cast<double>(cfg.d) / cfg.n1, cfg.d);
  }
  return out;
}

double policy_lambda(const ExperimentConfig& cfg) {
  switch (cfg.lambda_policy) {
    case LambdaPolicy::zero: return 0.0;
    case LambdaPolicy::fixed: return cfg.lambda_fixed;
    default:
      throw ConfigError(
          "key 'lambda_policy': this experiment supports only 'zero' and "
          "'fixed'");
  }
}

/// Excess risk of theta_hat/(1+alpha) given the clean statistics
/// norm2_hat = ||theta_hat||^2 and inner = <theta_hat, theta0>.
double two_stage_excess(double norm2_hat, double inner, double r2,
                        double sigma2, double eps) {
  const auto fp = solve_alpha(std::sqrt(std::max(0.0, norm2_hat)), sigma2, eps);
  if (fp.diverged) return excess_adv_risk(r2, 0.0, r2, sigma2, eps);
  const double k = 1.0 / (1.0 + fp.alpha);
  const double n2 = k * k * norm2_hat;
  const double d2 = std::max(0.0, n2 - 2.0 * k * inner + r2);
  return excess_adv_risk(d2, n2, r2, sigma2, eps);
}

}  // namespace

AggregateCurve run_excess_risk_sweep(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const auto dims = gamma_dims(cfg);
  const double lambda = policy_lambda(cfg);
  const int G = static_cast<int>(dims.size());
  const int E = static_cast<int>(cfg.eps_list.size());
  static constexpr const char* kMethods[] = {"clean", "vanilla", "two_stage"};

  auto job = [&](int rep) {
    const std::uint64_t rep_seed = stream_seed(cfg.master_seed, rep);
    std::vector<double> stats(static_cast<std::size_t>(G) * E * 3);
    for (int gi = 0; gi < G; ++gi) {
      const int d = dims[gi].second;
      const GroundTruth truth =
          draw_truth(cfg, d, stream_seed(rep_seed, 2 * gi));
      const Dataset data =
          gen_gaussian_dataset(cfg.n1, d, truth, stream_seed(rep_seed, 2 * gi + 1));
      const Eigen::VectorXd theta_hat = ridge_fit(data, lambda).theta_hat;
      for (int ei = 0; ei < E; ++ei) {
        const double eps = cfg.eps_list[ei];
        const std::size_t base = (static_cast<std::size_t>(gi) * E + ei) * 3;
        stats[base + 0] = excess_adv_risk(theta_hat, truth, eps);
        const Eigen::VectorXd theta_adv =
            eps == 0.0 ? theta_hat : vanilla_adv_fit(data, eps, lambda);
        stats[base + 1] = excess_adv_risk(theta_adv, truth, eps);
        const auto fp = solve_alpha(theta_hat.norm(), cfg.sigma2, eps);
        stats[base + 2] =
            excess_adv_risk(two_stage_map(theta_hat, fp), truth, eps);
      }
    }
    return stats;
  };

  const auto stats = collect_repeats(cfg.repeats, threads, job);
  AggregateCurve curve;
  curve.x_name = "gamma";
  for (int gi = 0; gi < G; ++gi)
    for (int ei = 0; ei < E; ++ei)
      for (int mi = 0; mi < 3; ++mi) {
        const auto ms =
            aggregate(stats, static_cast<int>((static_cast<std::size_t>(gi) * E + ei) * 3 + mi));
        curve.points.push_back({dims[gi].first, kMethods[mi], cfg.eps_list[ei],
                                lambda, ms.mean, ms.se, cfg.repeats});
      }
  return curve;
}

AggregateCurve run_theory_curves(const ExperimentConfig& cfg) {
  cfg.validate();
  const double lambda = policy_lambda(cfg);
  const double r2 = 1.0;  // both theta0 modes have unit expected energy
  AggregateCurve curve;
  curve.x_name = "gamma";
  const auto dims = gamma_dims(cfg);
  for (const auto& [gamma, d] : dims) {
    (void)d;
    for (double eps : cfg.eps_list) {
      try {
        const CleanLimits clean =
            theory_clean_limits(gamma, lambda, r2, cfg.sigma2);
        const double clean_excess =
            excess_adv_risk(clean.dist2, clean.norm2, r2, cfg.sigma2, eps);
        const TwoStageLimits ts =
            theory_two_stage_limits(gamma, lambda, r2, cfg.sigma2, eps);
        curve.points.push_back(
            {gamma, "clean", eps, lambda, clean_excess, 0.0, 0});
        curve.points.push_back(
            {gamma, "two_stage", eps, lambda, ts.excess_risk, 0.0, 0});
      } catch (const PoleError&) {
        // interpolation threshold at lambda = 0: no finite limit, skip
      }
    }
  }
  return curve;
}

AggregateCurve run_ridge_vs_ridgeless(const ExperimentConfig& cfg,
                                      int threads) {
  cfg.validate();
  const auto dims = gamma_dims(cfg);
  const std::vector<double> grid =
      cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid;
  const int G = static_cast<int>(dims.size());
  const int E = static_cast<int>(cfg.eps_list.size());
  const int L = static_cast<int>(grid.size()) + 1;  // slot 0 = ridgeless

  auto job = [&](int rep) {
    const std::uint64_t rep_seed = stream_seed(cfg.master_seed, rep);
    std::vector<double> stats(static_cast<std::size_t>(G) * E * L);
    for (int gi = 0; gi < G; ++gi) {
      const int d = dims[gi].second;
      const GroundTruth truth =
          draw_truth(cfg, d, stream_seed(rep_seed, 2 * gi));
      const Dataset data =
          gen_gaussian_dataset(cfg.n1, d, truth, stream_seed(rep_seed, 2 * gi + 1));
      const RidgePath path(data, truth.theta0);
      for (int li = 0; li < L; ++li) {
        const double lam = li == 0 ? 0.0 : grid[li - 1];
        const double n2 = path.norm2(lam);
        const double inner = 0.5 * (n2 + truth.r2 - path.dist2(lam));
        for (int ei = 0; ei < E; ++ei) {
          stats[(static_cast<std::size_t>(gi) * E + ei) * L + li] =
              two_stage_excess(n2, inner, truth.r2, cfg.sigma2,
                               cfg.eps_list[ei]);
        }
      }
    }
    return stats;
  };

  const auto stats = collect_repeats(cfg.repeats, threads, job);
  AggregateCurve curve;
  curve.x_name = "gamma";
  for (int gi = 0; gi < G; ++gi)
    for (int ei = 0; ei < E; ++ei) {
      const auto at = [&](int li) {
        return aggregate(
            stats,
            static_cast<int>((static_cast<std::size_t>(gi) * E + ei) * L + li));
      };
      const MeanSe ridgeless = at(0);
      int best = 1;
      MeanSe best_ms = at(1);
      for (int li = 2; li < L; ++li) {
        const MeanSe ms = at(li);
        if (ms.mean < best_ms.mean) {
          best = li;
          best_ms = ms;
        }
      }
      const double eps = cfg.eps_list[ei];
      curve.points.push_back({dims[gi].first, "ridgeless", eps, 0.0,
                              ridgeless.mean, ridgeless.se, cfg.repeats});
      curve.points.push_back({dims[gi].first, "best_lambda", eps,
                              grid[best - 1], best_ms.mean, best_ms.se,
                              cfg.repeats});
    }
  return curve;
}

AggregateCurve run_lambda_sweep(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  if (cfg.d < 1)
    throw ConfigError("key 'd': lambda sweep requires a fixed dimension");
  const std::vector<double> grid =
      cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid;
  const int L = static_cast<int>(grid.size());
  const int E = static_cast<int>(cfg.eps_list.size());

  auto job = [&](int rep) {
    const std::uint64_t rep_seed = stream_seed(cfg.master_seed, rep);
    const GroundTruth truth = draw_truth(cfg, cfg.d, stream_seed(rep_seed, 0));
    const Dataset data =
        gen_gaussian_dataset(cfg.n1, cfg.d, truth, stream_seed(rep_seed, 1));
    const RidgePath path(data, truth.theta0);
    std::vector<double> stats(static_cast<std::size_t>(L) * E);
    for (int li = 0; li < L; ++li) {
      const double n2 = path.norm2(grid[li]);
      const double inner = 0.5 * (n2 + truth.r2 - path.dist2(grid[li]));
      for (int ei = 0; ei < E; ++ei)
        stats[static_cast<std::size_t>(li) * E + ei] = two_stage_excess(
            n2, inner, truth.r2, cfg.sigma2, cfg.eps_list[ei]);
    }
    return stats;
  };

  const auto stats = collect_repeats(cfg.repeats, threads, job);
  AggregateCurve curve;
  curve.x_name = "lambda";
  for (int li = 0; li < L; ++li)
    for (int ei = 0; ei < E; ++ei) {
      const auto ms = aggregate(stats, li * E + ei);
      curve.points.push_back({grid[li], "two_stage", cfg.eps_list[ei], grid[li],
                              ms.mean, ms.se, cfg.repeats});
    }
  return curve;
}

AggregateCurve run_cv_table(const ExperimentConfig& cfg, int threads,
                            bool use_exact) {
  cfg.validate();
  if (cfg.d < 1)
    throw ConfigError("key 'd': the CV table requires a fixed dimension");
  const std::vector<double> grid =
      cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid;
  const int L = static_cast<int>(grid.size());
  const int E = static_cast<int>(cfg.eps_list.size());
  const auto cv_fn = use_exact ? exact_cv : shortcut_cv;

  // Per repeat, per eps: {cv_loss, cv_risk, clean_cv_risk, best_risk,
  // selected lambda, clean-selected lambda, best lambda}.
  constexpr int kStats = 7;
  auto job = [&](int rep) {
    const std::uint64_t rep_seed = stream_seed(cfg.master_seed, rep);
    const GroundTruth truth = draw_truth(cfg, cfg.d, stream_seed(rep_seed, 0));
    const Dataset data =
        gen_gaussian_dataset(cfg.n1, cfg.d, truth, stream_seed(rep_seed, 1));
    const RidgePath path(data, truth.theta0);

    // clean (eps = 0) CV, shared across the eps rows
    int clean_best = 0;
    std::vector<double> clean_cv(L);
    for (int li = 0; li < L; ++li) {
      clean_cv[li] = cv_fn(data, grid[li], 0.0, cfg.sigma2);
      if (clean_cv[li] < clean_cv[clean_best]) clean_best = li;
    }

    std::vector<double> stats(static_cast<std::size_t>(E) * kStats);
    for (int ei = 0; ei < E; ++ei) {
      const double eps = cfg.eps_list[ei];
      std::vector<double> cv(L), risk(L);
      int sel = 0, best = 0;
      for (int li = 0; li < L; ++li) {
        cv[li] = cv_fn(data, grid[li], eps, cfg.sigma2);
        const double n2h = path.norm2(grid[li]);
        const double inner = 0.5 * (n2h + truth.r2 - path.dist2(grid[li]));
        const auto fp = solve_alpha(std::sqrt(n2h), cfg.sigma2, eps);
        double d2t = truth.r2, n2t = 0.0;
        if (!fp.diverged) {
          const double k = 1.0 / (1.0 + fp.alpha);
          n2t = k * k * n2h;
          d2t = std::max(0.0, n2t - 2.0 * k * inner + truth.r2);
        }
        risk[li] = population_adv_risk(d2t, n2t, cfg.sigma2, eps).risk;
        if (cv[li] < cv[sel]) sel = li;
        if (risk[li] < risk[best]) best = li;
      }
      double* row = stats.data() + static_cast<std::size_t>(ei) * kStats;
      row[0] = cv[sel];
      row[1] = risk[sel];
      row[2] = risk[clean_best];
      row[3] = risk[best];
      row[4] = grid[sel];
      row[5] = grid[clean_best];
      row[6] = grid[best];
    }
    return stats;
  };

  const auto stats = collect_repeats(cfg.repeats, threads, job);
  AggregateCurve curve;
  curve.x_name = "eps";
  static constexpr const char* kRows[] = {"cv_loss", "cv_risk",
                                          "clean_cv_risk", "best_risk"};
  static constexpr int kLambdaOf[] = {4, 4, 5, 6};
  for (int ei = 0; ei < E; ++ei)
    for (int mi = 0; mi < 4; ++mi) {
      const auto ms = aggregate(stats, ei * kStats + mi);
      const auto lam = aggregate(stats, ei * kStats + kLambdaOf[mi]);
      curve.points.push_back({cfg.eps_list[ei], kRows[mi], cfg.eps_list[ei],
                              lam.mean, ms.mean, ms.se, cfg.repeats});
    }
  return curve;
}

std::string to_csv(const AggregateCurve& curve) {
  std::string out =
      "x_value,method,eps,lambda,mean_excess_risk,std_err,repeats\n";
  for (const auto& p : curve.points) {
    out += fmt(p.x);
    out += ',';
    out += p.method;
    out += ',';
    out += fmt(p.eps);
    out += ',';
    out += fmt(p.lambda);
    out += ',';
    out += fmt(p.mean);
    out += ',';
    out += fmt(p.std_err);
    out += ',';
    out += std::to_string(p.repeats);
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const AggregateCurve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << to_csv(curve);
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace advlab

#include <benchmark/benchmark.h>

#include "advlab/advrisk.hpp"
#include "advlab/asymptotics.hpp"
#include "advlab/linmodel.hpp"
#include "advlab/loocv.hpp"

using namespace advlab;

namespace {

Dataset reference_dataset() {
  static const Dataset data = [] {
    const auto truth = sample_theta0_ones(200, 0.01);
    return gen_gaussian_dataset(50, 200, truth, 7);
  }();
  return data;
}

void BM_stieltjes(benchmark::State& state) {
  double acc = 0.0;
  for (auto _ : state) {
    acc += stieltjes_m(2.0, 0.7) + stieltjes_m_prime(0.5, 1.3);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_stieltjes);

void BM_ridge_fit(benchmark::State& state) {
  const auto data = reference_dataset();
  for (auto _ : state) {
    const auto fit = ridge_fit(data, 1.0);
    benchmark::DoNotOptimize(fit.theta_hat);
  }
}
BENCHMARK(BM_ridge_fit);

void BM_ridge_path_eval(benchmark::State& state) {
  const auto data = reference_dataset();
  const RidgePath path(data, data.truth->theta0);
  double lam = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(path.norm2(lam));
    lam = lam < 30.0 ? lam * 1.5 : 1e-3;
  }
}
BENCHMARK(BM_ridge_path_eval);

void BM_solve_alpha(benchmark::State& state) {
  double h = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_alpha(h, 0.01, 0.3).alpha);
    h = h < 3.0 ? h + 1e-3 : 0.3;
  }
}
BENCHMARK(BM_solve_alpha);

void BM_shortcut_cv(benchmark::State& state) {
  const auto data = reference_dataset();
  for (auto _ : state)
    benchmark::DoNotOptimize(shortcut_cv(data, 1.0, 0.3, 0.01));
}
BENCHMARK(BM_shortcut_cv);

void BM_exact_cv(benchmark::State& state) {
  const auto data = reference_dataset();
  for (auto _ : state)
    benchmark::DoNotOptimize(exact_cv(data, 1.0, 0.3, 0.01));
}
BENCHMARK(BM_exact_cv);

}  // namespace

BENCHMARK_MAIN();

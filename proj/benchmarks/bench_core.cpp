#include <benchmark/benchmark.h>

#include "oup/covariance.hpp"
#include "oup/estimate.hpp"
#include "oup/predict.hpp"
#include "oup/simulate.hpp"

namespace {

using namespace oup;

const OuModel kModel{{-1.30, -0.56, -0.18}, 1.0, 0.0};

void BM_GammaGrid(benchmark::State& state) {
  const auto cov = CovarianceModel::from_model(kModel);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cov.gamma_grid(n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GammaGrid)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

void BM_GammaGridDividedDifferences(benchmark::State& state) {
  const auto cov = CovarianceModel::from_model(kModel, kDefaultGroupingTolerance,
                                               CovarianceModel::Evaluation::DividedDifferences);
  for (auto _ : state) benchmark::DoNotOptimize(cov.gamma_grid(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GammaGridDividedDifferences)->Arg(300)->Arg(4096);

void BM_ProfiledLikelihood(benchmark::State& state) {
  const auto x = simulate_state_space(kModel, static_cast<int>(state.range(0)), 1.0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(profiled_log_likelihood(x, kModel.phi, LikelihoodVariant::Diff));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProfiledLikelihood)->RangeMultiplier(2)->Range(128, 4096)->Complexity(benchmark::oNSquared);

void BM_ToeplitzCholesky(benchmark::State& state) {
  const auto cov = CovarianceModel::from_model(kModel);
  const auto matrix = gamma_matrix(cov, static_cast<int>(state.range(0)));
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(matrix.dimension()));
  for (auto _ : state) benchmark::DoNotOptimize(matrix.factorize().quadratic_form(b));
}
BENCHMARK(BM_ToeplitzCholesky)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ToeplitzLevinson(benchmark::State& state) {
  const auto cov = CovarianceModel::from_model(kModel);
  const auto matrix = gamma_matrix(cov, static_cast<int>(state.range(0)));
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(matrix.dimension()));
  for (auto _ : state) benchmark::DoNotOptimize(matrix.levinson(b));
}
BENCHMARK(BM_ToeplitzLevinson)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MceObjective(benchmark::State& state) {
  const auto x = simulate_grid(kModel, 300, 1.0, 2);
  const auto rho = empirical_autocorrelation(x, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mce_objective(rho, kModel.phi, 1.0));
}
BENCHMARK(BM_MceObjective)->Arg(50)->Arg(270);

void BM_MceFit(benchmark::State& state) {
  const auto x = simulate_grid(kModel, 300, 1.0, 3);
  MceOptions options;
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mce_fit(x, 3, options));
}
BENCHMARK(BM_MceFit)->Unit(benchmark::kMillisecond);

void BM_MleFit(benchmark::State& state) {
  const auto x = simulate_grid(kModel, 300, 1.0, 4);
  MleOptions options;
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mle_fit(x, 3, LikelihoodVariant::Diff, kModel, options));
}
BENCHMARK(BM_MleFit)->Unit(benchmark::kMillisecond);

void BM_GridSamplerDraw(benchmark::State& state) {
  const GridSampler sampler(kModel, static_cast<int>(state.range(0)), 1.0);
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(1, r++));
}
BENCHMARK(BM_GridSamplerDraw)->Arg(300)->Arg(2000);

void BM_StateSpaceDraw(benchmark::State& state) {
  const StateSpaceSampler sampler(kModel, 1.0);
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(static_cast<int>(state.range(0)), 1, r++));
}
BENCHMARK(BM_StateSpaceDraw)->Arg(300)->Arg(10000);

void BM_PredictSeries(benchmark::State& state) {
  const auto x = simulate_grid(kModel, 200, 1.0, 5);
  for (auto _ : state) benchmark::DoNotOptimize(predict_series(kModel, x, 4, 7, 100));
}
BENCHMARK(BM_PredictSeries)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

// Serial reference kernels vs. their OpenMP counterparts, on inputs shaped
// like the Parkinson's speech table (756 x 753). Set OMP_NUM_THREADS to vary
// the thread count.

#include <benchmark/benchmark.h>

#include "pcarf/data.hpp"
#include "pcarf/forest.hpp"
#include "pcarf/linalg.hpp"
#include "pcarf/rng.hpp"

namespace {

pcarf::Matrix random_rows(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  pcarf::Rng rng(seed);
  pcarf::Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-1.0, 1.0);
  return m;
}

// Correlated features: a few latent factors plus noise, as in real speech data.
pcarf::Matrix factor_rows(std::size_t rows, std::size_t cols, std::size_t factors, std::uint64_t seed) {
  const pcarf::Matrix latent = random_rows(rows, factors, seed);
  const pcarf::Matrix loading = random_rows(factors, cols, seed + 1);
  pcarf::Matrix m = pcarf::matmul(latent, loading);
  pcarf::Rng rng(seed + 2);
  for (double& v : m.data()) v += 0.05 * rng.uniform(-1.0, 1.0);
  return m;
}

pcarf::LabeledDataset labeled(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  pcarf::LabeledDataset ds;
  ds.features = random_rows(rows, cols, seed);
  pcarf::Rng rng(seed + 7);
  for (std::size_t r = 0; r < rows; ++r) {
    const double signal = ds.features(r, 0) + ds.features(r, 1) - ds.features(r, 2);
    ds.labels.push_back(signal + 0.3 * rng.uniform(-1.0, 1.0) > 0.0 ? 1 : 0);
  }
  ds.feature_names.resize(cols, "f");
  return ds;
}

void BM_CovarianceSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = pcarf::mean_center(random_rows(529, n, 1)).centered;
  for (auto _ : state) benchmark::DoNotOptimize(pcarf::covariance_serial(x));
}

void BM_CovarianceParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = pcarf::mean_center(random_rows(529, n, 1)).centered;
  for (auto _ : state) benchmark::DoNotOptimize(pcarf::covariance(x));
}

void BM_JacobiSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = pcarf::covariance(pcarf::mean_center(factor_rows(529, n, 20, 3)).centered);
  for (auto _ : state) benchmark::DoNotOptimize(pcarf::eigh_symmetric_serial(c));
}

void BM_JacobiParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = pcarf::covariance(pcarf::mean_center(factor_rows(529, n, 20, 3)).centered);
  for (auto _ : state) benchmark::DoNotOptimize(pcarf::eigh_symmetric(c));
}

void BM_ForestSerial(benchmark::State& state) {
  const auto ds = labeled(529, 753, 5);
  pcarf::ForestParams params;
  params.n_trees = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pcarf::fit_forest_serial(ds, params, 1));
}

void BM_ForestParallel(benchmark::State& state) {
  const auto ds = labeled(529, 753, 5);
  pcarf::ForestParams params;
  params.n_trees = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pcarf::fit_forest(ds, params, 1));
}

void BM_PredictSerial(benchmark::State& state) {
  const auto ds = labeled(529, 753, 5);
  const auto model = pcarf::fit_forest(ds, {}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(pcarf::predict_scores_serial(model, ds.features));
}

void BM_PredictParallel(benchmark::State& state) {
  const auto ds = labeled(529, 753, 5);
  const auto model = pcarf::fit_forest(ds, {}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(pcarf::predict_scores(model, ds.features));
}

}  // namespace

BENCHMARK(BM_CovarianceSerial)->Arg(128)->Arg(753)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CovarianceParallel)->Arg(128)->Arg(753)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JacobiSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JacobiParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestSerial)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestParallel)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

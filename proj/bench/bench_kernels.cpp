// Serial reference against OpenMP for the per-path loops.
#include <benchmark/benchmark.h>

#include <map>
#include <vector>

#include "gspde/ensemble_kernels.hpp"
#include "gspde/gaussian.hpp"

namespace k = gspde::kernels;

namespace {

const Eigen::MatrixXd& lower(std::size_t m) {
  static std::map<std::size_t, Eigen::MatrixXd> cache;
  auto it = cache.find(m);
  if (it == cache.end()) {
    const gspde::IncrementFactor f(gspde::CovarianceKernel::fbm(0.75), gspde::TimeGrid::uniform(1.0, m));
    it = cache.emplace(m, f.lower()).first;
  }
  return it->second;
}

template <auto Fn>
void correlate(benchmark::State& state) {
  const std::size_t m = std::size_t(state.range(0)) + 1;
  const std::size_t n_paths = std::size_t(state.range(1));
  const std::vector<double> scales{1.0};
  std::vector<double> out(n_paths * m);
  const auto& l = lower(m);
  for (auto _ : state) {
    Fn(l, scales, 1, n_paths, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(std::int64_t(state.iterations() * n_paths));
}

template <auto Fn>
void accumulate(benchmark::State& state) {
  const std::size_t m = std::size_t(state.range(0)) + 1;
  const std::size_t n_paths = std::size_t(state.range(1));
  const std::size_t n_coords = 8, dim = 8;
  std::vector<double> paths(n_paths * m * n_coords);
  k::correlate_paths_omp(lower(m), std::vector<double>(n_coords, 1.0), 1, n_paths, paths);
  const std::vector<Eigen::MatrixXd> weights(m - 1, Eigen::MatrixXd::Identity(dim, n_coords));
  std::vector<double> out(n_paths * m * dim);
  for (auto _ : state) {
    Fn(weights, paths, n_paths, m, n_coords, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(std::int64_t(state.iterations() * n_paths));
}

template <auto Fn>
void dot(benchmark::State& state) {
  const Eigen::Index rows = state.range(0);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(rows, 64), b = Eigen::MatrixXd::Random(rows, 64);
  std::vector<double> out(static_cast<std::size_t>(rows));
  for (auto _ : state) {
    Fn(a, b, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * rows);
}

}  // namespace

BENCHMARK(correlate<k::correlate_paths_serial>)->Name("correlate_paths/serial")->Args({64, 10000})->Args({256, 2000})->Unit(benchmark::kMillisecond);
BENCHMARK(correlate<k::correlate_paths_omp>)->Name("correlate_paths/omp")->Args({64, 10000})->Args({256, 2000})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(accumulate<k::accumulate_integrals_serial>)->Name("accumulate_integrals/serial")->Args({64, 5000})->Unit(benchmark::kMillisecond);
BENCHMARK(accumulate<k::accumulate_integrals_omp>)->Name("accumulate_integrals/omp")->Args({64, 5000})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(dot<k::rowwise_dot_serial>)->Name("rowwise_dot/serial")->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(dot<k::rowwise_dot_omp>)->Name("rowwise_dot/omp")->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

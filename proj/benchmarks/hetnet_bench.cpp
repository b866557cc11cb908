#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "hetnet/analytic.hpp"
#include "hetnet/geometry.hpp"
#include "hetnet/montecarlo.hpp"
#include "hetnet/spatial_index.hpp"
#include "hetnet/units.hpp"

using namespace hetnet;

namespace {

// Disk holding on average `mean_points` points of a PPP of density 1e-5 per m^2.
double radius_for_mean(double mean_points) { return std::sqrt(mean_points / (3.141592653589793 * 1e-5)); }

void BM_SamplePpp(benchmark::State& state) {
  const double radius = radius_for_mean(static_cast<double>(state.range(0)));
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_ppp(1e-5, radius, RngSeed{7}.derive(i++)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePpp)->Arg(100)->Arg(10000);

template <bool UseIndex>
void BM_Nearest(benchmark::State& state) {
  const auto points = sample_ppp(1e-5, radius_for_mean(static_cast<double>(state.range(0))), RngSeed{8});
  const GridIndex index(points);
  std::mt19937_64 engine(9);
  std::uniform_real_distribution<double> coord(-0.5 * points.window_radius(), 0.5 * points.window_radius());
  for (auto _ : state) {
    const Point2 from{coord(engine), coord(engine)};
    if constexpr (UseIndex) {
      benchmark::DoNotOptimize(index.nearest(from));
    } else {
      benchmark::DoNotOptimize(nearest(points, from));
    }
  }
}
BENCHMARK(BM_Nearest<false>)->Name("BM_NearestBruteForce")->Arg(100)->Arg(5000);
BENCHMARK(BM_Nearest<true>)->Name("BM_NearestGridIndex")->Arg(100)->Arg(5000);

void BM_Kappa(benchmark::State& state) {
  const double alpha = static_cast<double>(state.range(0)) / 10.0;
  double gamma = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic::kappa(alpha, gamma));
    gamma = gamma > 100.0 ? 0.01 : gamma * 1.3;
  }
}
BENCHMARK(BM_Kappa)->Arg(30)->Arg(40)->Arg(50);

void BM_Evaluate(benchmark::State& state) {
  const NetworkConfig cfg = default_network();
  const double gamma = units::db_to_linear(2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic::evaluate(cfg, gamma));
  }
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMicrosecond);

void BM_Realizations(benchmark::State& state) {
  const NetworkConfig cfg = default_network();
  mc::Options opts;
  opts.samples = 256;
  opts.workers = 1;
  opts.scope = static_cast<mc::Scope>(state.range(0));
  opts.mode = static_cast<mc::SimMode>(state.range(1));
  opts.window_factor = opts.mode == mc::SimMode::Accurate ? 8.0 : 20.0;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    opts.seed = RngSeed{seed++};
    benchmark::DoNotOptimize(mc::estimate(cfg, units::db_to_linear(2.0), opts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opts.samples));
}
BENCHMARK(BM_Realizations)
    ->ArgNames({"scope", "mode"})
    ->Args({static_cast<int>(mc::Scope::Association), static_cast<int>(mc::SimMode::Approximate)})
    ->Args({static_cast<int>(mc::Scope::Full), static_cast<int>(mc::SimMode::Approximate)})
    ->Args({static_cast<int>(mc::Scope::Full), static_cast<int>(mc::SimMode::Accurate)})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

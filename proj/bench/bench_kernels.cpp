#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "swarmflow/nonlocal.hpp"

using namespace swarmflow;

namespace {

struct Fixture {
  Grid g;
  ConvolutionPlan plan;
  std::vector<double> rho, u;

  explicit Fixture(int n) : g(Grid::uniform(n, 1.0)), plan(g, [](double x) { return -std::abs(x) + 0.5 * x * x; }) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    rho.resize(static_cast<std::size_t>(n));
    u.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < rho.size(); ++i) {
      rho[i] = U(rng);
      u[i] = U(rng) - 0.5;
    }
  }
};

void BM_ConvolveSerialDirect(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::convolve_direct(f.plan, f.rho));
}

void BM_ConvolveParallelDirect(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  const auto plan = f.plan.with_method(ConvMethod::direct);
  for (auto _ : st) benchmark::DoNotOptimize(plan.convolve(f.rho));
}

void BM_ConvolveFft(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(f.plan.convolve(f.rho));
}

void BM_DoubleSumSerial(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::alignment_double_sum(f.plan, f.rho, f.u));
}

void BM_DoubleSumParallel(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(parallel::alignment_double_sum(f.plan, f.rho, f.u));
}

}  // namespace

BENCHMARK(BM_ConvolveSerialDirect)->RangeMultiplier(2)->Range(128, 2048);
BENCHMARK(BM_ConvolveParallelDirect)->RangeMultiplier(2)->Range(128, 2048);
BENCHMARK(BM_ConvolveFft)->RangeMultiplier(2)->Range(128, 2048);
BENCHMARK(BM_DoubleSumSerial)->RangeMultiplier(2)->Range(128, 2048);
BENCHMARK(BM_DoubleSumParallel)->RangeMultiplier(2)->Range(128, 2048);

BENCHMARK_MAIN();

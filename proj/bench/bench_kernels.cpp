/// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include <vector>

#include "nrswarm/bench_functions.hpp"
#include "nrswarm/crvanet.hpp"
#include "nrswarm/kernels.hpp"
#include "nrswarm/optimizer.hpp"

using namespace nrswarm;

namespace {

struct Population {
  std::vector<double> data;
  std::size_t dim;
  NoisyObjective f;
};

Population make_population(int id, std::size_t dim, std::size_t n) {
  const auto& fn = function_by_id(id);
  Rng rng(1);
  Population p{std::vector<double>(dim * n), dim, [&fn](std::span<const double> x, double e) { return fn.value(x, e); }};
  for (double& v : p.data) v = rng.uniform(fn.bounds.lower, fn.bounds.upper);
  return p;
}

void bm_population(benchmark::State& state, Execution exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Population p = make_population(11, 100, n);
  std::vector<double> out(n);
  for (auto _ : state) {
    evaluate_population(p.f, {p.data, p.dim}, {}, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_energies(benchmark::State& state, Execution exec) {
  const SensingScenario s;
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto e = simulate_energies(s, Hypothesis::h1, s.snr_db, trials, 7, exec);
    benchmark::DoNotOptimize(e.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials));
}

void bm_optimize(benchmark::State& state, Execution exec) {
  const Problem p = make_problem(function_by_id(9), 50);
  OptimizerConfig cfg;
  cfg.iter_max = 20;
  cfg.execution = exec;
  for (auto _ : state) benchmark::DoNotOptimize(optimize(p, Algorithm::hfasson, cfg, 1).final_fitness);
}

}  // namespace

BENCHMARK_CAPTURE(bm_population, serial, Execution::serial)->Arg(30)->Arg(300);
BENCHMARK_CAPTURE(bm_population, omp, Execution::parallel)->Arg(30)->Arg(300);
BENCHMARK_CAPTURE(bm_energies, serial, Execution::serial)->Arg(2000);
BENCHMARK_CAPTURE(bm_energies, omp, Execution::parallel)->Arg(2000);
BENCHMARK_CAPTURE(bm_optimize, serial, Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_optimize, omp, Execution::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

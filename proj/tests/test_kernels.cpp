#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "nrswarm/bench_functions.hpp"
#include "nrswarm/crvanet.hpp"
#include "nrswarm/error.hpp"
#include "nrswarm/kernels.hpp"
#include "nrswarm/optimizer.hpp"

using namespace nrswarm;

TEST_CASE("execution names round-trip") {
  CHECK(parse_execution(to_string(Execution::serial)) == Execution::serial);
  CHECK(parse_execution(to_string(Execution::parallel)) == Execution::parallel);
  CHECK_THROWS_AS(parse_execution("gpu"), UsageError);
  CHECK(max_threads() >= 1);
}

TEST_CASE("serial and OpenMP population evaluation agree bit for bit") {
  Rng rng(17);
  for (int id : {1, 7, 9, 12}) {
    const auto& fn = function_by_id(id);
    const std::size_t dim = 30, n = 257;
    std::vector<double> data(dim * n), noise(n);
    for (double& v : data) v = rng.uniform(fn.bounds.lower, fn.bounds.upper);
    for (double& v : noise) v = rng.uniform();
    const NoisyObjective f = [&](std::span<const double> x, double e) { return fn.value(x, e); };
    std::vector<double> a(n), b(n), c(n);
    evaluate_population_serial(f, {data, dim}, noise, a);
    evaluate_population_omp(f, {data, dim}, noise, b);
    evaluate_population(f, {data, dim}, {}, c, Execution::parallel);
    CHECK(a == b);
    if (!fn.stochastic) CHECK(a == c);
  }
}

TEST_CASE("for_each_index visits every index once in both modes") {
  for (Execution e : {Execution::serial, Execution::parallel}) {
    std::vector<std::atomic<int>> hits(1000);
    for_each_index(hits.size(), [&](std::size_t i) { hits[i]++; }, e);
    for (auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("exceptions thrown inside a parallel loop reach the caller") {
  CHECK_THROWS_AS(for_each_index(64, [](std::size_t i) { if (i == 33) throw UsageError("boom"); },
                                 Execution::parallel),
                  UsageError);
  std::vector<double> data(8, 0.0), out(4);
  const NoisyObjective bad = [](std::span<const double>, double) -> double { throw std::runtime_error("x"); };
  CHECK_THROWS_AS(evaluate_population_omp(bad, {data, 2}, {}, out), std::runtime_error);
}

TEST_CASE("energy simulation serial and OpenMP kernels agree") {
  SensingScenario s;
  s.samples_per_sensing = 200;
  for (Hypothesis h : {Hypothesis::h0, Hypothesis::h1}) {
    const auto a = simulate_energies_serial(s, h, -10.0, 300, 42);
    const auto b = simulate_energies_omp(s, h, -10.0, 300, 42);
    CHECK(a == b);
  }
}

TEST_CASE("optimizer runs are identical under serial and parallel execution") {
  const auto& fn = function_by_id(10);
  const Problem p = make_problem(fn, 10);
  OptimizerConfig cfg;
  cfg.iter_max = 20;
  cfg.execution = Execution::serial;
  const RunRecord a = optimize(p, Algorithm::hfasson, cfg, 3);
  cfg.execution = Execution::parallel;
  const RunRecord b = optimize(p, Algorithm::hfasson, cfg, 3);
  CHECK(a.final_fitness == b.final_fitness);
  CHECK(a.final_position == b.final_position);
  CHECK(a.evaluations == b.evaluations);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].best_fitness == b.trace[i].best_fitness);
}

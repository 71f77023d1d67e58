#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace nrswarm {

/// How data-parallel loops run. `serial` is the reference path; `parallel`
/// fans out with OpenMP and must produce bit-identical results because all
/// random draws happen before the loop.
enum class Execution { serial, parallel };

std::string_view to_string(Execution e);
Execution parse_execution(std::string_view s);

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

/// Sets the OpenMP thread count used by the parallel kernels. n <= 0 keeps the default.
void set_threads(int n);

/// Calls body(i) for i in [0, n). Iterations must be independent.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec);

/// Row-major population of `count` points of dimension `dim`.
struct PopulationView {
  std::span<const double> data;
  std::size_t dim = 0;

  std::size_t count() const { return dim == 0 ? 0 : data.size() / dim; }
  std::span<const double> row(std::size_t i) const { return data.subspan(i * dim, dim); }
};

using NoisyObjective = std::function<double(std::span<const double>, double)>;

/// out[i] = f(row i, noise[i]). `noise` may be empty (treated as zeros).
void evaluate_population_serial(const NoisyObjective& f, PopulationView pop, std::span<const double> noise,
                                std::span<double> out);
void evaluate_population_omp(const NoisyObjective& f, PopulationView pop, std::span<const double> noise,
                             std::span<double> out);
void evaluate_population(const NoisyObjective& f, PopulationView pop, std::span<const double> noise,
                         std::span<double> out, Execution exec);

}  // namespace nrswarm

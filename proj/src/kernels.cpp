#include "nrswarm/kernels.hpp"

#include <exception>
#include <mutex>
#include <string>

#include "nrswarm/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nrswarm {

namespace {

/// Keeps the first exception thrown inside a parallel region so it can be
/// rethrown on the calling thread; OpenMP would otherwise terminate.
class FirstError {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace

std::string_view to_string(Execution e) { return e == Execution::serial ? "serial" : "parallel"; }

Execution parse_execution(std::string_view s) {
  if (s == "serial") return Execution::serial;
  if (s == "parallel") return Execution::parallel;
  throw UsageError("unknown execution mode '" + std::string(s) + "' (expected serial or parallel)");
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
  FirstError err;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) err.run([&] { body(static_cast<std::size_t>(i)); });
  err.rethrow();
}

void evaluate_population_serial(const NoisyObjective& f, PopulationView pop, std::span<const double> noise,
                                std::span<double> out) {
  const std::size_t n = pop.count();
  for (std::size_t i = 0; i < n; ++i) out[i] = f(pop.row(i), noise.empty() ? 0.0 : noise[i]);
}

void evaluate_population_omp(const NoisyObjective& f, PopulationView pop, std::span<const double> noise,
                             std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(pop.count());
  FirstError err;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    err.run([&] { out[k] = f(pop.row(k), noise.empty() ? 0.0 : noise[k]); });
  }
  err.rethrow();
}

void evaluate_population(const NoisyObjective& f, PopulationView pop, std::span<const double> noise,
                         std::span<double> out, Execution exec) {
  if (exec == Execution::serial)
    evaluate_population_serial(f, pop, noise, out);
  else
    evaluate_population_omp(f, pop, noise, out);
}

}  // namespace nrswarm

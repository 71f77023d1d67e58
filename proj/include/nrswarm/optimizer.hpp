#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nrswarm/bench_functions.hpp"
#include "nrswarm/kernels.hpp"
#include "nrswarm/newton.hpp"
#include "nrswarm/rng.hpp"

namespace nrswarm {

enum class Algorithm { fa, sso, hfasso, hfasson };

std::string_view to_string(Algorithm a);
/// Case-insensitive; throws UsageError on unknown names.
Algorithm parse_algorithm(std::string_view name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct OptimizerConfig {
  std::size_t population = 30;
  std::size_t iter_max = 1000;
  double gamma = 1.0;  ///< light absorption
  double beta0 = 2.0;  ///< attractiveness at r = 0
  double alpha = 0.2;  ///< mutation coefficient
  double m_exponent = 2.0;
  /// Geometric per-iteration decay of alpha (alpha_t = alpha * decay^t), as in
  /// the reference firefly implementation. 1 disables it.
  double alpha_decay = 0.97;
  Interval delta_range{0.0, 1.0};
  Interval ph_range{7.0, 14.0};
  Interval temp_range{35.1, 38.5};
  double w_min = 0.2;
  double w_max = 0.9;
  bool newton_enabled = false;
  FdConfig fd;
  bool fa_attraction_in_hybrid = true;
  std::optional<double> velocity_clamp_fraction = 0.5;
  Execution execution = Execution::serial;

  /// Throws UsageError when any invariant is violated.
  void validate() const;
};

/// Box-bounded minimization problem. `objective(x, noise)` receives a uniform
/// draw for stochastic problems and 0 otherwise.
struct Problem {
  std::string name;
  int function_id = 0;  ///< 0 for problems not drawn from the catalog
  std::size_t dimension = 0;
  Bounds bounds;
  bool stochastic = false;
  std::optional<double> known_optimum;
  NoisyObjective objective;

  double operator()(std::span<const double> x, double noise = 0.0) const { return objective(x, noise); }
};

/// Problem for catalog function `fn` at `dim`. Throws DimensionError.
Problem make_problem(const BenchmarkFunction& fn, std::size_t dim);

struct Agent {
  std::vector<double> position;
  std::vector<double> velocity;
  double fitness = 0.0;
  std::vector<double> personal_best_position;
  double personal_best_fitness = 0.0;
};

struct SwarmState {
  std::vector<Agent> agents;
  std::vector<double> global_best_position;
  double global_best_fitness = 0.0;
  std::size_t iteration = 0;
  std::size_t evaluations = 0;
};

// ---- firefly terms ---------------------------------------------------------

/// beta0 * exp(-gamma * r^m).
double fa_attractiveness(double r, const OptimizerConfig& cfg);

/// Moves xi toward the strictly brighter xj: xi + beta(r) (xj - xi) + alpha_t * range * eps,
/// eps ~ U(0,1) per coordinate, clamped. Brightness is the negated objective.
/// Throws DimensionError on size mismatch and UsageError if xj is not brighter.
std::vector<double> fa_move(std::span<const double> xi, std::span<const double> xj, double brightness_i,
                            double brightness_j, double alpha_t, Bounds bounds, const OptimizerConfig& cfg,
                            Rng& rng);

// ---- sperm-swarm terms -----------------------------------------------------

/// d_f * v_prev * log10(pH), d_f and pH drawn per coordinate.
std::vector<double> sso_initial_velocity(std::span<const double> v_prev, Rng& rng, const OptimizerConfig& cfg);

/// Per-coordinate coefficients of the sperm velocity: initial velocity V0 and
/// log10(pH) * log10(T) weights of the personal and global terms.
struct SsoDraws {
  std::vector<double> initial;
  std::vector<double> personal_coeff;
  std::vector<double> global_coeff;
};

SsoDraws draw_sso(std::span<const double> v_prev, Rng& rng, const OptimizerConfig& cfg);

/// V = V0 + cp (pbest - x) + cg (gbest - x), clamped to the velocity bound.
std::vector<double> sso_velocity_update(const Agent& agent, std::span<const double> global_best,
                                        const SsoDraws& draws, Bounds bounds, const OptimizerConfig& cfg);
std::vector<double> sso_velocity_update(const Agent& agent, const SwarmState& state, Bounds bounds, Rng& rng,
                                        const OptimizerConfig& cfg);

// ---- hybrid terms ----------------------------------------------------------

/// w_max - iteration (w_max - w_min) / iter_max.
double inertia_weight(std::size_t iteration, const OptimizerConfig& cfg);

/// Per-coordinate log10(pH1) on the inertia term and log10(pH2) * log10(T1) on the social term.
struct HybridDraws {
  std::vector<double> inertia_log_ph;
  std::vector<double> social_coeff;
};

HybridDraws draw_hybrid(std::size_t dim, Rng& rng, const OptimizerConfig& cfg);

/// V(i+1) = w log10(pH1) V(i) + log10(pH2) log10(T1) (gbest - x), clamped.
std::vector<double> hfasson_velocity(const Agent& agent, std::span<const double> global_best, double w,
                                     const HybridDraws& draws, Bounds bounds, const OptimizerConfig& cfg);
std::vector<double> hfasson_velocity(const Agent& agent, const SwarmState& state, double w, Bounds bounds,
                                     Rng& rng, const OptimizerConfig& cfg);

struct Motion {
  std::vector<double> position;
  std::vector<double> velocity;
};

/// X + V clamped to bounds; clamped coordinates get zero velocity.
Motion position_update(std::span<const double> x, std::span<const double> v, Bounds bounds);

/// Largest |v| allowed per coordinate (infinite when clamping is disabled).
double velocity_limit(Bounds bounds, const OptimizerConfig& cfg);

// ---- swarm driver ----------------------------------------------------------

/// Random positions in bounds, velocities in +-velocity_limit, evaluated once.
SwarmState initialize(const Problem& problem, const OptimizerConfig& cfg, Rng& rng);

/// One iteration of `algorithm`. The global best never gets worse.
void step(SwarmState& state, const Problem& problem, Algorithm algorithm, const OptimizerConfig& cfg, Rng& rng);

struct TracePoint {
  std::size_t iteration = 0;
  double best_fitness = 0.0;
};

struct RunRecord {
  Algorithm algorithm = Algorithm::hfasson;
  int function_id = 0;
  std::string problem_name;
  std::size_t dimension = 0;
  std::uint64_t seed = 0;
  OptimizerConfig config;
  std::vector<TracePoint> trace;  ///< iteration 0 is the initial population
  std::vector<double> final_position;
  double final_fitness = 0.0;
  std::size_t evaluations = 0;
  bool newton_skipped_stochastic = false;
  double wall_ms = 0.0;
};

/// Runs iter_max steps. Equal (problem, algorithm, cfg, seed) give identical
/// records apart from wall_ms. Newton refinement is on exactly for HFASSON and
/// is skipped for stochastic problems.
RunRecord optimize(const Problem& problem, Algorithm algorithm, const OptimizerConfig& cfg, std::uint64_t seed);

/// Config with newton_enabled set the way optimize() runs `algorithm` on `problem`.
OptimizerConfig effective_config(const Problem& problem, Algorithm algorithm, OptimizerConfig cfg);

}  // namespace nrswarm

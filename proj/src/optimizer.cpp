#include "nrswarm/optimizer.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "nrswarm/error.hpp"

namespace nrswarm {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::fa: return "FA";
    case Algorithm::sso: return "SSO";
    case Algorithm::hfasso: return "HFASSO";
    case Algorithm::hfasson: return "HFASSON";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "fa") return Algorithm::fa;
  if (s == "sso") return Algorithm::sso;
  if (s == "hfasso") return Algorithm::hfasso;
  if (s == "hfasson") return Algorithm::hfasson;
  throw UsageError("unknown algorithm '" + std::string(name) + "' (expected fa, sso, hfasso or hfasson)");
}

void OptimizerConfig::validate() const {
  if (population < 2) throw UsageError("population must be at least 2");
  if (iter_max < 1) throw UsageError("iter_max must be positive");
  if (!(gamma > 0)) throw UsageError("gamma must be positive");
  if (!(beta0 > 0)) throw UsageError("beta0 must be positive");
  if (!(alpha >= 0)) throw UsageError("alpha must be non-negative");
  if (!(alpha_decay > 0 && alpha_decay <= 1)) throw UsageError("alpha_decay must lie in (0, 1]");
  if (!(m_exponent > 0)) throw UsageError("m_exponent must be positive");
  if (!(0 <= w_min && w_min < w_max && w_max <= 1)) throw UsageError("need 0 <= w_min < w_max <= 1");
  if (!(ph_range.lo > 1 && ph_range.lo <= ph_range.hi)) throw UsageError("pH range must lie above 1");
  if (!(temp_range.lo > 1 && temp_range.lo <= temp_range.hi))
    throw UsageError("temperature range must lie above 1");
  if (!(delta_range.lo >= 0 && delta_range.lo <= delta_range.hi && delta_range.hi <= 1))
    throw UsageError("delta range must lie within [0, 1]");
  if (velocity_clamp_fraction && !(*velocity_clamp_fraction > 0))
    throw UsageError("velocity_clamp_fraction must be positive");
  fd.validate();
}

Problem make_problem(const BenchmarkFunction& fn, std::size_t dim) {
  if (!fn.accepts_dimension(dim)) {
    std::string msg = "f" + std::to_string(fn.id) + " does not accept dimension " + std::to_string(dim);
    if (fn.dimension_mode == DimensionMode::fixed) msg += " (fixed dimension " + std::to_string(fn.fixed_dimension) + ")";
    throw DimensionError(msg);
  }
  Problem p;
  p.name = "f" + std::to_string(fn.id) + "_" + fn.name;
  p.function_id = fn.id;
  p.dimension = dim;
  p.bounds = fn.bounds;
  p.stochastic = fn.stochastic;
  p.known_optimum = fn.known_optimum(dim);
  const BenchmarkFunction* f = &fn;
  p.objective = [f](std::span<const double> x, double noise) { return f->value(x, noise); };
  return p;
}

// ---- firefly ---------------------------------------------------------------

double fa_attractiveness(double r, const OptimizerConfig& cfg) {
  return cfg.beta0 * std::exp(-cfg.gamma * std::pow(r, cfg.m_exponent));
}

std::vector<double> fa_move(std::span<const double> xi, std::span<const double> xj, double brightness_i,
                            double brightness_j, double alpha_t, Bounds bounds, const OptimizerConfig& cfg,
                            Rng& rng) {
  if (xi.size() != xj.size()) throw DimensionError("fa_move: position dimensions differ");
  if (!(brightness_j > brightness_i)) throw UsageError("fa_move: target firefly must be strictly brighter");
  double r2 = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) r2 += (xj[k] - xi[k]) * (xj[k] - xi[k]);
  const double beta = fa_attractiveness(std::sqrt(r2), cfg);
  const double scale = alpha_t * bounds.range();
  std::vector<double> out(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double eps = rng.uniform();
    out[k] = bounds.clamp(xi[k] + beta * (xj[k] - xi[k]) + scale * eps);
  }
  return out;
}

namespace {

std::vector<double> random_flight(std::span<const double> x, double alpha_t, Bounds bounds, Rng& rng) {
  const double scale = alpha_t * bounds.range();
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = bounds.clamp(x[k] + scale * rng.uniform());
  return out;
}

double clamp_velocity(double v, double limit) { return std::clamp(v, -limit, limit); }

}  // namespace

// ---- sperm swarm -----------------------------------------------------------

std::vector<double> sso_initial_velocity(std::span<const double> v_prev, Rng& rng, const OptimizerConfig& cfg) {
  std::vector<double> out(v_prev.size());
  for (std::size_t k = 0; k < v_prev.size(); ++k) {
    const double damping = rng.uniform(cfg.delta_range.lo, cfg.delta_range.hi);
    const double ph = rng.uniform(cfg.ph_range.lo, cfg.ph_range.hi);
    out[k] = damping * v_prev[k] * std::log10(ph);
  }
  return out;
}

SsoDraws draw_sso(std::span<const double> v_prev, Rng& rng, const OptimizerConfig& cfg) {
  const std::size_t d = v_prev.size();
  SsoDraws draws{std::vector<double>(d), std::vector<double>(d), std::vector<double>(d)};
  for (std::size_t k = 0; k < d; ++k) {
    const double damping = rng.uniform(cfg.delta_range.lo, cfg.delta_range.hi);
    const double ph1 = rng.uniform(cfg.ph_range.lo, cfg.ph_range.hi);
    const double ph2 = rng.uniform(cfg.ph_range.lo, cfg.ph_range.hi);
    const double t1 = rng.uniform(cfg.temp_range.lo, cfg.temp_range.hi);
    const double ph3 = rng.uniform(cfg.ph_range.lo, cfg.ph_range.hi);
    const double t2 = rng.uniform(cfg.temp_range.lo, cfg.temp_range.hi);
    draws.initial[k] = damping * v_prev[k] * std::log10(ph1);
    draws.personal_coeff[k] = std::log10(ph2) * std::log10(t1);
    draws.global_coeff[k] = std::log10(ph3) * std::log10(t2);
  }
  return draws;
}

std::vector<double> sso_velocity_update(const Agent& agent, std::span<const double> global_best,
                                        const SsoDraws& draws, Bounds bounds, const OptimizerConfig& cfg) {
  const double limit = velocity_limit(bounds, cfg);
  const std::size_t d = agent.position.size();
  std::vector<double> v(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double x = agent.position[k];
    v[k] = clamp_velocity(draws.initial[k] + draws.personal_coeff[k] * (agent.personal_best_position[k] - x) +
                              draws.global_coeff[k] * (global_best[k] - x),
                          limit);
  }
  return v;
}

std::vector<double> sso_velocity_update(const Agent& agent, const SwarmState& state, Bounds bounds, Rng& rng,
                                        const OptimizerConfig& cfg) {
  return sso_velocity_update(agent, state.global_best_position, draw_sso(agent.velocity, rng, cfg), bounds, cfg);
}

// ---- hybrid ----------------------------------------------------------------

double inertia_weight(std::size_t iteration, const OptimizerConfig& cfg) {
  const double t = static_cast<double>(std::min(iteration, cfg.iter_max));
  return cfg.w_max - t * (cfg.w_max - cfg.w_min) / static_cast<double>(cfg.iter_max);
}

HybridDraws draw_hybrid(std::size_t dim, Rng& rng, const OptimizerConfig& cfg) {
  HybridDraws draws{std::vector<double>(dim), std::vector<double>(dim)};
  for (std::size_t k = 0; k < dim; ++k) {
    const double ph1 = rng.uniform(cfg.ph_range.lo, cfg.ph_range.hi);
    const double ph2 = rng.uniform(cfg.ph_range.lo, cfg.ph_range.hi);
    const double t1 = rng.uniform(cfg.temp_range.lo, cfg.temp_range.hi);
    draws.inertia_log_ph[k] = std::log10(ph1);
    draws.social_coeff[k] = std::log10(ph2) * std::log10(t1);
  }
  return draws;
}

std::vector<double> hfasson_velocity(const Agent& agent, std::span<const double> global_best, double w,
                                     const HybridDraws& draws, Bounds bounds, const OptimizerConfig& cfg) {
  const double limit = velocity_limit(bounds, cfg);
  const std::size_t d = agent.position.size();
  std::vector<double> v(d);
  for (std::size_t k = 0; k < d; ++k) {
    v[k] = clamp_velocity(w * draws.inertia_log_ph[k] * agent.velocity[k] +
                              draws.social_coeff[k] * (global_best[k] - agent.position[k]),
                          limit);
  }
  return v;
}

std::vector<double> hfasson_velocity(const Agent& agent, const SwarmState& state, double w, Bounds bounds,
                                     Rng& rng, const OptimizerConfig& cfg) {
  return hfasson_velocity(agent, state.global_best_position, w, draw_hybrid(agent.position.size(), rng, cfg),
                          bounds, cfg);
}

Motion position_update(std::span<const double> x, std::span<const double> v, Bounds bounds) {
  if (x.size() != v.size()) throw DimensionError("position_update: velocity dimension differs from position");
  Motion m{std::vector<double>(x.size()), std::vector<double>(v.begin(), v.end())};
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double moved = x[k] + v[k];
    const double clamped = bounds.clamp(moved);
    m.position[k] = clamped;
    if (clamped != moved) m.velocity[k] = 0.0;
  }
  return m;
}

double velocity_limit(Bounds bounds, const OptimizerConfig& cfg) {
  if (!cfg.velocity_clamp_fraction) return std::numeric_limits<double>::infinity();
  return *cfg.velocity_clamp_fraction * bounds.range();
}

// ---- swarm driver ----------------------------------------------------------

namespace {

std::vector<double> draw_noise(const Problem& problem, std::size_t n, Rng& rng) {
  if (!problem.stochastic) return {};
  std::vector<double> noise(n);
  for (double& u : noise) u = rng.uniform();
  return noise;
}

/// Evaluates the rows of `flat` (count x dim) into `out`.
void evaluate_rows(const Problem& problem, const std::vector<double>& flat, std::size_t dim, Rng& rng,
                   std::vector<double>& out, SwarmState& state, Execution exec) {
  const std::size_t n = flat.size() / dim;
  out.resize(n);
  const std::vector<double> noise = draw_noise(problem, n, rng);
  evaluate_population(problem.objective, PopulationView{flat, dim}, noise, out, exec);
  state.evaluations += n;
}

std::vector<double> flatten_positions(const SwarmState& state, std::size_t dim) {
  std::vector<double> flat;
  flat.reserve(state.agents.size() * dim);
  for (const Agent& a : state.agents) flat.insert(flat.end(), a.position.begin(), a.position.end());
  return flat;
}

void evaluate_agents(SwarmState& state, const Problem& problem, Rng& rng, Execution exec) {
  const std::size_t dim = problem.dimension;
  std::vector<double> values;
  evaluate_rows(problem, flatten_positions(state, dim), dim, rng, values, state, exec);
  for (std::size_t i = 0; i < state.agents.size(); ++i) state.agents[i].fitness = values[i];
}

void update_bests(SwarmState& state) {
  for (Agent& a : state.agents) {
    if (a.fitness < a.personal_best_fitness) {
      a.personal_best_fitness = a.fitness;
      a.personal_best_position = a.position;
    }
    if (a.personal_best_fitness < state.global_best_fitness) {
      state.global_best_fitness = a.personal_best_fitness;
      state.global_best_position = a.personal_best_position;
    }
  }
}

double alpha_at(std::size_t iteration, const OptimizerConfig& cfg) {
  return cfg.alpha * std::pow(cfg.alpha_decay, static_cast<double>(iteration));
}

/// Greedy firefly pass: every agent tries a move toward a uniformly chosen
/// strictly brighter agent (or a random flight if none is brighter) and keeps
/// it only when it improves its own fitness.
void firefly_exploitation(SwarmState& state, const Problem& problem, const OptimizerConfig& cfg, Rng& rng,
                          double alpha_t) {
  const std::size_t n = state.agents.size();
  const std::size_t dim = problem.dimension;
  std::vector<double> candidates;
  candidates.reserve(n * dim);
  std::vector<std::size_t> brighter;
  for (std::size_t i = 0; i < n; ++i) {
    const Agent& a = state.agents[i];
    brighter.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (state.agents[j].fitness < a.fitness) brighter.push_back(j);
    std::vector<double> cand;
    if (!brighter.empty()) {
      const Agent& b = state.agents[brighter[rng.index(brighter.size())]];
      cand = fa_move(a.position, b.position, -a.fitness, -b.fitness, alpha_t, problem.bounds, cfg, rng);
    } else {
      cand = random_flight(a.position, alpha_t, problem.bounds, rng);
    }
    candidates.insert(candidates.end(), cand.begin(), cand.end());
  }
  std::vector<double> values;
  evaluate_rows(problem, candidates, dim, rng, values, state, cfg.execution);
  for (std::size_t i = 0; i < n; ++i) {
    Agent& a = state.agents[i];
    if (values[i] < a.fitness) {
      a.fitness = values[i];
      std::copy_n(candidates.begin() + static_cast<std::ptrdiff_t>(i * dim), dim, a.position.begin());
    }
  }
}

void newton_pass(SwarmState& state, const Problem& problem, const OptimizerConfig& cfg) {
  const Objective f = [&problem](std::span<const double> x) { return problem(x, 0.0); };
  std::vector<std::size_t> evals(state.agents.size(), 0);
  for_each_index(
      state.agents.size(),
      [&](std::size_t i) {
        Agent& a = state.agents[i];
        Refinement r = refine_from(f, a.position, a.fitness, problem.bounds, cfg.fd);
        evals[i] = r.evaluations;
        if (r.improved) {
          a.position = std::move(r.x);
          a.fitness = r.value;
        }
      },
      cfg.execution);
  state.evaluations += std::accumulate(evals.begin(), evals.end(), std::size_t{0});
}

void hybrid_step(SwarmState& state, const Problem& problem, const OptimizerConfig& cfg, Rng& rng,
                 std::size_t t) {
  if (cfg.fa_attraction_in_hybrid) {
    firefly_exploitation(state, problem, cfg, rng, alpha_at(t, cfg));
    update_bests(state);
  }
  const double w = inertia_weight(t, cfg);
  for (Agent& a : state.agents) {
    const HybridDraws draws = draw_hybrid(problem.dimension, rng, cfg);
    const std::vector<double> v = hfasson_velocity(a, state.global_best_position, w, draws, problem.bounds, cfg);
    Motion m = position_update(a.position, v, problem.bounds);
    a.position = std::move(m.position);
    a.velocity = std::move(m.velocity);
  }
  evaluate_agents(state, problem, rng, cfg.execution);
  if (cfg.newton_enabled && !problem.stochastic) newton_pass(state, problem, cfg);
}

void sso_step(SwarmState& state, const Problem& problem, const OptimizerConfig& cfg, Rng& rng) {
  for (Agent& a : state.agents) {
    const SsoDraws draws = draw_sso(a.velocity, rng, cfg);
    const std::vector<double> v = sso_velocity_update(a, state.global_best_position, draws, problem.bounds, cfg);
    Motion m = position_update(a.position, v, problem.bounds);
    a.position = std::move(m.position);
    a.velocity = std::move(m.velocity);
  }
  evaluate_agents(state, problem, rng, cfg.execution);
}

/// Standard firefly sweep: each agent moves toward every brighter agent of the
/// iteration's snapshot; the brightest ones take a random flight.
void firefly_step(SwarmState& state, const Problem& problem, const OptimizerConfig& cfg, Rng& rng,
                  std::size_t t) {
  const double alpha_t = alpha_at(t, cfg);
  const std::vector<Agent> snapshot = state.agents;
  for (std::size_t i = 0; i < snapshot.size(); ++i) {
    std::vector<double> x = snapshot[i].position;
    bool moved = false;
    for (std::size_t j = 0; j < snapshot.size(); ++j) {
      if (snapshot[j].fitness < snapshot[i].fitness) {
        x = fa_move(x, snapshot[j].position, -snapshot[i].fitness, -snapshot[j].fitness, alpha_t, problem.bounds,
                    cfg, rng);
        moved = true;
      }
    }
    if (!moved) x = random_flight(x, alpha_t, problem.bounds, rng);
    state.agents[i].position = std::move(x);
  }
  evaluate_agents(state, problem, rng, cfg.execution);
}

}  // namespace

SwarmState initialize(const Problem& problem, const OptimizerConfig& cfg, Rng& rng) {
  const std::size_t dim = problem.dimension;
  const Bounds b = problem.bounds;
  const double vlim = cfg.velocity_clamp_fraction ? *cfg.velocity_clamp_fraction * b.range() : 0.5 * b.range();
  SwarmState state;
  state.agents.resize(cfg.population);
  for (Agent& a : state.agents) {
    a.position.resize(dim);
    a.velocity.resize(dim);
    for (double& x : a.position) x = rng.uniform(b.lower, b.upper);
    for (double& v : a.velocity) v = rng.uniform(-vlim, vlim);
  }
  evaluate_agents(state, problem, rng, cfg.execution);
  for (Agent& a : state.agents) {
    a.personal_best_position = a.position;
    a.personal_best_fitness = a.fitness;
  }
  state.global_best_fitness = std::numeric_limits<double>::infinity();
  update_bests(state);
  return state;
}

void step(SwarmState& state, const Problem& problem, Algorithm algorithm, const OptimizerConfig& cfg, Rng& rng) {
  const std::size_t t = state.iteration + 1;
  switch (algorithm) {
    case Algorithm::fa: firefly_step(state, problem, cfg, rng, t); break;
    case Algorithm::sso: sso_step(state, problem, cfg, rng); break;
    case Algorithm::hfasso:
    case Algorithm::hfasson: hybrid_step(state, problem, cfg, rng, t); break;
  }
  update_bests(state);
  state.iteration = t;
}

OptimizerConfig effective_config(const Problem& problem, Algorithm algorithm, OptimizerConfig cfg) {
  cfg.newton_enabled = algorithm == Algorithm::hfasson && !problem.stochastic;
  return cfg;
}

RunRecord optimize(const Problem& problem, Algorithm algorithm, const OptimizerConfig& cfg_in, std::uint64_t seed) {
  cfg_in.validate();
  if (problem.dimension == 0) throw DimensionError("problem dimension must be positive");
  const auto start = std::chrono::steady_clock::now();
  const OptimizerConfig cfg = effective_config(problem, algorithm, cfg_in);

  Rng rng(seed);
  SwarmState state = initialize(problem, cfg, rng);
  RunRecord rec;
  rec.algorithm = algorithm;
  rec.function_id = problem.function_id;
  rec.problem_name = problem.name;
  rec.dimension = problem.dimension;
  rec.seed = seed;
  rec.config = cfg;
  rec.newton_skipped_stochastic = algorithm == Algorithm::hfasson && problem.stochastic;
  rec.trace.reserve(cfg.iter_max + 1);
  rec.trace.push_back({0, state.global_best_fitness});
  for (std::size_t it = 0; it < cfg.iter_max; ++it) {
    step(state, problem, algorithm, cfg, rng);
    rec.trace.push_back({state.iteration, state.global_best_fitness});
  }
  rec.final_position = state.global_best_position;
  rec.final_fitness = state.global_best_fitness;
  rec.evaluations = state.evaluations;
  rec.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace nrswarm

#include "nrswarm/serialize.hpp"

namespace nrswarm {

using nlohmann::json;

namespace {

json interval(Interval i) { return json::array({i.lo, i.hi}); }

}  // namespace

json to_json(const OptimizerConfig& cfg) {
  json j;
  j["population"] = cfg.population;
  j["iter_max"] = cfg.iter_max;
  j["gamma"] = cfg.gamma;
  j["beta0"] = cfg.beta0;
  j["alpha"] = cfg.alpha;
  j["alpha_decay"] = cfg.alpha_decay;
  j["m_exponent"] = cfg.m_exponent;
  j["delta_range"] = interval(cfg.delta_range);
  j["ph_range"] = interval(cfg.ph_range);
  j["temp_range"] = interval(cfg.temp_range);
  j["w_min"] = cfg.w_min;
  j["w_max"] = cfg.w_max;
  j["newton_enabled"] = cfg.newton_enabled;
  j["fd_step_rel"] = cfg.fd.fd_step_rel;
  j["second_step_rel"] = cfg.fd.second_step_rel;
  j["fd_step_abs_floor"] = cfg.fd.fd_step_abs_floor;
  j["second_deriv_floor"] = cfg.fd.second_deriv_floor;
  j["max_step"] = cfg.fd.max_step;
  j["probe_fraction"] = cfg.fd.probe_fraction;
  j["probe_shrink"] = cfg.fd.probe_shrink;
  j["fa_attraction_in_hybrid"] = cfg.fa_attraction_in_hybrid;
  j["velocity_clamp_fraction"] =
      cfg.velocity_clamp_fraction ? json(*cfg.velocity_clamp_fraction) : json(nullptr);
  return j;
}

json to_json(const RunRecord& rec, bool include_wall_time) {
  json j;
  j["algorithm"] = std::string(to_string(rec.algorithm));
  j["function_id"] = rec.function_id;
  j["problem"] = rec.problem_name;
  j["dimension"] = rec.dimension;
  j["seed"] = rec.seed;
  j["config"] = to_json(rec.config);
  json trace = json::array();
  for (const TracePoint& t : rec.trace) trace.push_back(json::array({t.iteration, t.best_fitness}));
  j["trace"] = std::move(trace);
  j["final_position"] = rec.final_position;
  j["final_fitness"] = rec.final_fitness;
  j["evaluations"] = rec.evaluations;
  j["newton_skipped_stochastic"] = rec.newton_skipped_stochastic;
  if (include_wall_time) j["wall_ms"] = rec.wall_ms;
  return j;
}

json catalog_json() {
  json out = json::array();
  for (const BenchmarkFunction& fn : catalog()) {
    json j;
    j["id"] = fn.id;
    j["name"] = fn.name;
    j["bounds"] = json::array({fn.bounds.lower, fn.bounds.upper});
    j["dimension_mode"] = fn.dimension_mode == DimensionMode::fixed ? "fixed" : "scalable";
    j["dimension"] = fn.canonical_dimension();
    const auto opt = fn.known_optimum(fn.canonical_dimension());
    j["known_optimum"] = opt ? json(*opt) : json(nullptr);
    j["stochastic"] = fn.stochastic;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace nrswarm

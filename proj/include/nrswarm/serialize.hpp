#pragma once

#include <json.hpp>

#include "nrswarm/optimizer.hpp"

namespace nrswarm {

nlohmann::json to_json(const OptimizerConfig& cfg);

/// {algorithm, function_id, problem, dimension, seed, config, trace, final_position,
///  final_fitness, evaluations, newton_skipped_stochastic, wall_ms}. Leave out
/// wall_ms when comparing records byte for byte.
nlohmann::json to_json(const RunRecord& rec, bool include_wall_time = true);

/// One object per catalog entry: id, name, bounds, dimension_mode, dimension, known_optimum.
nlohmann::json catalog_json();

}  // namespace nrswarm

#pragma once

#include "json.hpp"

#include "mshit/dnorm.hpp"
#include "mshit/generators.hpp"

namespace mshit {

/// {"variant": "<name>", "params": {...}} with a flat params object.
/// Throws std::invalid_argument on unknown variants, missing or unknown
/// params, or constraint violations.
GeneratorSpec generator_from_json(const nlohmann::json& doc);
nlohmann::json generator_to_json(const GeneratorSpec& spec);

/// Level functions:
///   {"shape": "constant", "level": -1}
///   {"shape": "indicator_step", "interval": [lo, hi], "level": -1, "base": 0}
///   {"shape": "piecewise_linear", "breakpoints": [[0, -0.5], [1, -1.5]]}
LevelFunction level_function_from_json(const nlohmann::json& doc, const TimeGrid& grid);

}  // namespace mshit

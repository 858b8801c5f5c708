#pragma once

#include <json.hpp>

#include "fockbound/weights.hpp"

namespace fockbound {

/// {"family": name, "params": {name: number}, "laplacian_bounds": [m, M]}
/// plus optional "harmonic_terms": [[re, im], …] and "translations": [[re, im], …].
/// Unknown keys, at either level, are a ConfigError.
nlohmann::json weight_to_json(const WeightFunction& w);
WeightFunction weight_from_json(const nlohmann::json& j);

}  // namespace fockbound

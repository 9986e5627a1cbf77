#pragma once

#include <string>

#include <json.hpp>

#include "abx/model.hpp"

namespace abx {

/**
 * Build a model from a JSON document.
 *
 * Accepted shapes:
 *   {"K", "lambda", "tau": [..K] | {"form":"linear","tau_bar":x}, "p0", "p1"}
 *   {"tau": ..., "types": {"control":[{"rate","booking"}], "treatment":[...]}}
 * The types form derives K and lambda from the profiles.
 */
PlatformModel model_from_json(const nlohmann::json& doc);

nlohmann::json model_to_json(const PlatformModel& m);

PlatformModel load_model(const std::string& path);

}  // namespace abx

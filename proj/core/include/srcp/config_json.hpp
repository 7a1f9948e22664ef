#pragma once

// nlohmann::json bindings for SimConfig, shared by the config and stats
// serializers.

#include <nlohmann/json.hpp>

#include "srcp/config.hpp"

namespace srcp {

nlohmann::json config_json(const SimConfig& cfg);
SimConfig config_from_json_value(const nlohmann::json& j);

}  // namespace srcp

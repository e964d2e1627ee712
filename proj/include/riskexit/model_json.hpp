#pragma once

#include <string>

#include <json.hpp>

#include "riskexit/model.hpp"

namespace riskexit {

// Model JSON: {"lambda":..., "p":..., "c":...,
//              "claims": {"type":"exp","b":...} | {"type":"table","q":[...],"x":[...]}}
ModelParams model_from_json(const nlohmann::json& j);
ModelParams model_from_json_text(const std::string& text);
ModelParams model_from_json_file(const std::string& path);

}  // namespace riskexit

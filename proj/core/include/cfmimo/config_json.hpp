#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cfmimo/config.hpp"

namespace cfmimo {

// Parses a JSON object whose keys mirror SystemConfig fields. Missing keys keep
// their defaults; unknown keys, wrong types and invariant violations raise
// ConfigError. The returned configuration is validated.
SystemConfig parse_config(std::string_view json_text);
SystemConfig load_config(const std::filesystem::path& path);

// Canonical JSON for a configuration (every key present).
std::string config_to_json(const SystemConfig& config);

}  // namespace cfmimo

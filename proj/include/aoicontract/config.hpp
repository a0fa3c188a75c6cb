#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "aoicontract/experiments.hpp"

namespace aoicontract {

/// JSON form of a scenario. Every key is always present, so the output is a
/// complete, reloadable effective configuration.
nlohmann::ordered_json scenario_to_json(const ScenarioConfig& config);

/// Merges `user` over the defaults, rejecting unknown keys and mistyped
/// values, and validates the result. Errors are ConfigError with a dotted key
/// path in the message.
ScenarioConfig scenario_from_json(const nlohmann::json& user);

/// Applies one `dotted.key=value` override to a configuration document. The
/// value is parsed as JSON and falls back to a plain string.
void apply_override(nlohmann::ordered_json& doc, const std::string& assignment);

/// Loads `path` (empty file means all defaults), applies overrides in order
/// and returns the effective document. Use scenario_from_json to convert.
nlohmann::ordered_json load_config_document(const std::filesystem::path& path,
                                            std::span<const std::string> overrides);

ScenarioConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides);

}  // namespace aoicontract

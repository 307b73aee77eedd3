#pragma once

#include "nlwr/scenario.hpp"

#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace nlwr {

/// Flat `key = value` configuration, order-preserving.
using ConfigMap = std::vector<std::pair<std::string, std::string>>;

/// Parse errors carry the 1-based line number.
ConfigMap parse_config_text(std::istream& in, const std::string& name);
ConfigMap parse_config_file(const std::string& path);

bool is_preset(const std::string& name);
std::vector<std::string> preset_names();
ConfigMap preset(const std::string& name);

/// Builds and validates a scenario; unknown keys are rejected.
ScenarioConfig build_scenario(const ConfigMap& map);

/// Preset name or config-file path.
ScenarioConfig load_config(const std::string& target);

/// Echo with every default materialized; reparsing reproduces the scenario.
ConfigMap resolve(const ScenarioConfig& config);

void write_config_file(const std::string& path, const ConfigMap& map);

/// Replace (or append) entries of `base` with `overrides`.
ConfigMap apply_overrides(ConfigMap base, const ConfigMap& overrides);

}  // namespace nlwr

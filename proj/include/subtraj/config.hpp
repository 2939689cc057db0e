#pragma once

#include "subtraj/pipeline.hpp"

#include <string>

namespace subtraj {

/// Reads a flat `key = value` config file into a PipelineConfig. Unknown
/// keys are rejected; the reserved key `adaptive_eps_sp` is recognized but
/// not implemented and may only be set to "off".
PipelineConfig load_config(const std::string& path);

/// Applies one key/value (same vocabulary as the file) onto a config.
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);

} // namespace subtraj

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mscf/core.hpp"

namespace mscf {

/// Parses the flat `key = value` config format (`#` starts a comment).
/// Unknown keys throw ConfigError; `gamma` and `gamma_max` are accepted and
/// ignored, with a message appended to `warnings` when it is non-null.
MscfConfig parse_config(std::string_view text, std::vector<std::string>* warnings = nullptr);

MscfConfig load_config(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// Every key, one per line; values printed with round-trip precision.
std::string format_config(const MscfConfig& cfg);

/// Applies one key/value pair. Throws ConfigError on unknown key or bad value.
void set_config_value(MscfConfig& cfg, std::string_view key, std::string_view value,
                      std::vector<std::string>* warnings = nullptr);

/// Overrides from environment variables named MSCF_<KEY> (upper case key).
void apply_env_overrides(MscfConfig& cfg, std::vector<std::string>* warnings = nullptr);

}  // namespace mscf

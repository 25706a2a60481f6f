#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tddsched/sim.hpp"

namespace tddsched {

struct ParsedConfig {
  SimConfig config;
  // Dotted keys that were absent from the input and took their default.
  std::vector<std::string> defaults_applied;
};

// JSON scenario file. Unknown keys, wrong types and invariant violations raise
// ConfigError naming the offending key.
ParsedConfig parse_config(const std::filesystem::path& file);
ParsedConfig parse_config_text(std::string_view text);

// Fully resolved configuration as canonical JSON text (output settings excluded).
std::string canonical_config(const SimConfig& config);

// 16 hex digits of FNV-1a over canonical_config().
std::string config_hash(const SimConfig& config);

}  // namespace tddsched

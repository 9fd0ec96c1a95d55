#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbitforge/errors.hpp"
#include "orbitforge/rational.hpp"

namespace orbitforge {

/// Unknown key, wrong type or out-of-range value in a scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConfigFileError : public Error {
 public:
  using Error::Error;
};

/// Flat scenario configuration. Unset fields fall back to per-scenario defaults.
struct ScenarioConfig {
  std::optional<std::string> space;  // "so" or "sp"
  std::optional<int> l;
  std::optional<double> x1;
  std::optional<double> x2;
  std::optional<double> c;
  std::optional<double> d;
  std::optional<std::vector<Rational>> lambda_grid;
  std::optional<int> restarts;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iters;
  std::optional<double> tolerance;
};

/// Keys accepted in configuration files and overrides.
const std::vector<std::string>& config_keys();

/// Parses a flat JSON object. lambda_grid is a list of "p/q" strings, integers or
/// decimal strings such as "1.1" (read exactly). Throws ConfigError.
ScenarioConfig parse_config(std::string_view json);

/// Reads and parses a file. Throws ConfigFileError if it cannot be read, ConfigError on bad content.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Sets one key from its command-line text form ("lambda_grid" takes a comma-separated list).
void apply_override(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Exact rational from "p/q", an integer, or a plain decimal such as "-1.25".
Rational parse_exact_number(std::string_view text);

}  // namespace orbitforge

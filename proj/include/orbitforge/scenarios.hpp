#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "orbitforge/config.hpp"
#include "orbitforge/report.hpp"

namespace orbitforge {

class UnknownScenario : public Error {
 public:
  using Error::Error;
};

struct ScenarioInfo {
  std::string id;
  std::string summary;
  /// Results whose computational content the scenario re-checks (keys of result_manifest()).
  std::vector<std::string> covers;
};

/// All scenarios, sorted by id.
const std::vector<ScenarioInfo>& scenario_registry();

struct ManifestEntry {
  std::string key;
  std::string statement;
};

/// Every result the scenarios are expected to cover, with a one-line statement.
const std::vector<ManifestEntry>& result_manifest();

/// Runs one scenario. Throws UnknownScenario for an unregistered id and ConfigError for
/// configuration values the scenario cannot use.
ScenarioReport run_scenario(std::string_view id, const ScenarioConfig& cfg);

/// Default rational grid: 1 + k/21 for k = 1..20.
std::vector<Rational> default_lambda_grid();

}  // namespace orbitforge

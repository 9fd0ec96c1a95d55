#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "orbitforge/errors.hpp"
#include "orbitforge/rational.hpp"

namespace orbitforge {

/// Scalar payload of a report field. Doubles serialize with 17 significant digits,
/// rationals as "p/q" strings.
using ReportValue = std::variant<bool, long long, double, Rational, std::string>;

struct Check {
  std::string name;
  ReportValue expected;
  ReportValue actual;
  double tolerance = 0.0;
  bool pass = false;

  friend bool operator==(const Check&, const Check&) = default;
};

struct ScenarioReport {
  std::string scenario_id;
  std::vector<std::pair<std::string, ReportValue>> parameters;  // insertion order is kept
  std::vector<Check> checks;
  long long wall_time_ms = 0;
  std::uint64_t seed = 0;

  bool passed() const;
  void set_parameter(std::string key, ReportValue value);

  friend bool operator==(const ScenarioReport&, const ScenarioReport&) = default;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// JSON document, newline-terminated, fields in the order
/// scenario_id, parameters, checks, wall_time_ms, seed.
std::string to_json(const ScenarioReport& report);

/// Inverse of to_json. Throws ParseError on malformed documents.
ScenarioReport parse_report(std::string_view json);

void emit_report(const ScenarioReport& report, std::ostream& out);
/// Throws IoError if the file cannot be written.
void emit_report(const ScenarioReport& report, const std::filesystem::path& path);

/// Same document with wall_time_ms zeroed, for reproducibility comparisons.
std::string to_json_without_timing(ScenarioReport report);

}  // namespace orbitforge

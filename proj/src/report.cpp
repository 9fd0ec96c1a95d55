#include "orbitforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace orbitforge {

bool ScenarioReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void ScenarioReport::set_parameter(std::string key, ReportValue value) {
  for (auto& [k, v] : parameters) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  parameters.emplace_back(std::move(key), std::move(value));
}

namespace {

std::string quote(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

// Non-finite doubles have no JSON number form.
const char* kNonFinite[] = {"nan", "inf", "-inf"};

std::string format_double(double v) {
  if (std::isnan(v)) return quote(kNonFinite[0]);
  if (std::isinf(v)) return quote(v > 0 ? kNonFinite[1] : kNonFinite[2]);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // keep a marker so integral doubles read back as doubles
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string format_value(const ReportValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, bool>) return x ? "true" : "false";
        else if constexpr (std::is_same_v<X, long long>) return std::to_string(x);
        else if constexpr (std::is_same_v<X, double>) return format_double(x);
        else if constexpr (std::is_same_v<X, Rational>) return quote(to_fraction_string(x));
        else return quote(x);
      },
      v);
}

ReportValue read_value(const nlohmann::ordered_json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::boolean: return j.get<bool>();
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned: return j.get<long long>();
    case nlohmann::json::value_t::number_float: return j.get<double>();
    case nlohmann::json::value_t::string: {
      const auto s = j.get<std::string>();
      if (looks_like_fraction(s)) return parse_fraction(s);
      if (s == kNonFinite[0]) return std::nan("");
      if (s == kNonFinite[1]) return HUGE_VAL;
      if (s == kNonFinite[2]) return -HUGE_VAL;
      return s;
    }
    default: throw ParseError("unsupported report value: " + j.dump());
  }
}

}  // namespace

std::string to_json(const ScenarioReport& r) {
  std::ostringstream o;
  o << "{\n  \"scenario_id\": " << quote(r.scenario_id) << ",\n  \"parameters\": {";
  for (std::size_t i = 0; i < r.parameters.size(); ++i) {
    o << (i ? "," : "") << "\n    " << quote(r.parameters[i].first) << ": " << format_value(r.parameters[i].second);
  }
  o << (r.parameters.empty() ? "}" : "\n  }") << ",\n  \"checks\": [";
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const Check& c = r.checks[i];
    o << (i ? "," : "") << "\n    {\"name\": " << quote(c.name) << ", \"expected\": " << format_value(c.expected)
      << ", \"actual\": " << format_value(c.actual) << ", \"tolerance\": " << format_double(c.tolerance)
      << ", \"pass\": " << (c.pass ? "true" : "false") << "}";
  }
  o << (r.checks.empty() ? "]" : "\n  ]") << ",\n  \"wall_time_ms\": " << r.wall_time_ms
    << ",\n  \"seed\": " << r.seed << "\n}\n";
  return o.str();
}

ScenarioReport parse_report(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    static const char* keys[] = {"scenario_id", "parameters", "checks", "wall_time_ms", "seed"};
    if (!j.is_object() || j.size() != 5) throw ParseError("report must have exactly five top-level fields");
    for (const char* k : keys)
      if (!j.contains(k)) throw ParseError(std::string("report lacks field ") + k);
    ScenarioReport r;
    r.scenario_id = j.at("scenario_id").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items()) r.parameters.emplace_back(k, read_value(v));
    for (const auto& c : j.at("checks")) {
      Check ch;
      ch.name = c.at("name").get<std::string>();
      ch.expected = read_value(c.at("expected"));
      ch.actual = read_value(c.at("actual"));
      const ReportValue tol = read_value(c.at("tolerance"));
      if (!std::holds_alternative<double>(tol)) throw ParseError("check tolerance must be a number");
      ch.tolerance = std::get<double>(tol);
      ch.pass = c.at("pass").get<bool>();
      r.checks.push_back(std::move(ch));
    }
    r.wall_time_ms = j.at("wall_time_ms").get<long long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

void emit_report(const ScenarioReport& report, std::ostream& out) {
  out << to_json(report);
  out.flush();
  if (!out) throw IoError("failed to write report");
}

void emit_report(const ScenarioReport& report, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << to_json(report);
  f.close();
  if (!f) throw IoError("failed to write " + path.string());
}

std::string to_json_without_timing(ScenarioReport report) {
  report.wall_time_ms = 0;
  return to_json(report);
}

}  // namespace orbitforge

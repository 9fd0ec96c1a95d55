#include "orbitforge/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace orbitforge {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"space", "l",           "x1",       "x2",   "c",        "d",
                                                "lambda_grid", "restarts", "seed", "max_iters", "tolerance"};
  return keys;
}

Rational parse_exact_number(std::string_view text) {
  if (text.find('/') != std::string_view::npos) return parse_fraction(text);
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return parse_fraction(text);
  // d.ddd -> integer / 10^k
  std::string digits(text.substr(0, dot));
  const std::string_view frac = text.substr(dot + 1);
  if (frac.empty() || frac.find_first_not_of("0123456789") != std::string_view::npos) {
    throw ParseError("not an exact decimal: '" + std::string(text) + "'");
  }
  digits += frac;
  if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
  std::string den = "1" + std::string(frac.size(), '0');
  return parse_fraction(digits + "/" + den);
}

namespace {

template <class N>
N parse_integer(std::string_view key, std::string_view text) {
  N v{};
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size()) {
    throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'");
  }
  return v;
}

double parse_real(std::string_view key, std::string_view text) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  }
}

void validate(const ScenarioConfig& c) {
  if (c.space && *c.space != "so" && *c.space != "sp") throw ConfigError("space must be \"so\" or \"sp\"");
  if (c.l && (*c.l < 2 || *c.l > 5)) throw ConfigError("l must be between 2 and 5");
  for (auto [name, v] : {std::pair{"x1", c.x1}, std::pair{"x2", c.x2}}) {
    if (v && !(*v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  }
  for (auto [name, v] : {std::pair{"c", c.c}, std::pair{"d", c.d}}) {
    if (v && !(*v >= 0.0)) throw ConfigError(std::string(name) + " must be nonnegative");
  }
  if (c.restarts && *c.restarts < 1) throw ConfigError("restarts must be at least 1");
  if (c.max_iters && *c.max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (c.tolerance && !(*c.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (c.lambda_grid && c.lambda_grid->empty()) throw ConfigError("lambda_grid must not be empty");
}

Rational grid_entry(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) return parse_exact_number(v.get<std::string>());
  throw ConfigError("lambda_grid entries must be strings such as \"3/2\" or \"1.1\", or integers");
}

}  // namespace

void apply_override(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  try {
    if (key == "space") cfg.space = std::string(value);
    else if (key == "l") cfg.l = parse_integer<int>(key, value);
    else if (key == "x1") cfg.x1 = parse_real(key, value);
    else if (key == "x2") cfg.x2 = parse_real(key, value);
    else if (key == "c") cfg.c = parse_real(key, value);
    else if (key == "d") cfg.d = parse_real(key, value);
    else if (key == "restarts") cfg.restarts = parse_integer<int>(key, value);
    else if (key == "seed") cfg.seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "max_iters") cfg.max_iters = parse_integer<int>(key, value);
    else if (key == "tolerance") cfg.tolerance = parse_real(key, value);
    else if (key == "lambda_grid") {
      std::vector<Rational> grid;
      std::size_t start = 0;
      while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const auto item = value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        grid.push_back(parse_exact_number(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      cfg.lambda_grid = std::move(grid);
    } else {
      throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    }
  } catch (const ParseError& e) {
    throw ConfigError("bad value for '" + std::string(key) + "': " + e.what());
  }
  validate(cfg);
}

ScenarioConfig parse_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("configuration must be a flat JSON object");
  ScenarioConfig cfg;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "space") cfg.space = v.get<std::string>();
      else if (key == "l") cfg.l = v.get<int>();
      else if (key == "x1") cfg.x1 = v.get<double>();
      else if (key == "x2") cfg.x2 = v.get<double>();
      else if (key == "c") cfg.c = v.get<double>();
      else if (key == "d") cfg.d = v.get<double>();
      else if (key == "restarts") cfg.restarts = v.get<int>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "max_iters") cfg.max_iters = v.get<int>();
      else if (key == "tolerance") cfg.tolerance = v.get<double>();
      else if (key == "lambda_grid") {
        if (!v.is_array()) throw ConfigError("lambda_grid must be a list");
        std::vector<Rational> grid;
        for (const auto& e : v) grid.push_back(grid_entry(e));
        cfg.lambda_grid = std::move(grid);
      } else {
        throw ConfigError("unknown configuration key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("configuration value has the wrong type: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigFileError("cannot read configuration file " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  if (f.bad()) throw ConfigFileError("failed reading " + path.string());
  return parse_config(s.str());
}

}  // namespace orbitforge

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "orbitforge/scenarios.hpp"

using namespace orbitforge;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ORBIT_FORGE_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("orbitforge_test_" + name);
}

}  // namespace

TEST_CASE("rationals serialize as fraction strings and parse back") {
  ScenarioReport r;
  r.scenario_id = "x";
  r.set_parameter("a", Rational(189, 32));
  r.checks.push_back(Check{"c", Rational(189, 32), Rational(189, 32), 0.0, true});
  const auto text = to_json(r);
  CHECK(text.find("\"189/32\"") != std::string::npos);
  CHECK(text.find("5.90625") == std::string::npos);
  CHECK(parse_report(text) == r);
}

TEST_CASE("empty report") {
  ScenarioReport r;
  r.scenario_id = "empty";
  const auto text = to_json(r);
  CHECK(text.find("\"checks\": []") != std::string::npos);
  CHECK(text.back() == '\n');
  CHECK(parse_report(text) == r);
  CHECK(r.passed());
}

TEST_CASE("round trip of every value kind") {
  ScenarioReport r;
  r.scenario_id = "kinds \"quoted\"";
  r.set_parameter("b", true);
  r.set_parameter("i", 42LL);
  r.set_parameter("d", 0.1);
  r.set_parameter("whole", 3.0);
  r.set_parameter("tiny", 1e-300);
  r.set_parameter("s", std::string("text"));
  r.set_parameter("nan", std::nan(""));
  r.set_parameter("q", Rational(-7, 3));
  r.checks.push_back(Check{"x", 1.0 / 3.0, 0.3333333333333333, 1e-12, true});
  r.checks.push_back(Check{"y", std::string("> 0"), -1.0, 0.0, false});
  r.wall_time_ms = 17;
  r.seed = 18446744073709551615ULL;
  const auto back = parse_report(to_json(r));
  CHECK(back.scenario_id == r.scenario_id);
  CHECK(back.checks == r.checks);
  CHECK(back.seed == r.seed);
  CHECK(std::get<double>(back.parameters[3].second) == 3.0);
  CHECK(std::get<double>(back.parameters[2].second) == 0.1);
  CHECK(std::isnan(std::get<double>(back.parameters[6].second)));
  CHECK(std::get<Rational>(back.parameters[7].second) == Rational(-7, 3));
  CHECK_FALSE(r.passed());
}

TEST_CASE("malformed reports are rejected") {
  CHECK_THROWS_AS(parse_report("{"), ParseError);
  CHECK_THROWS_AS(parse_report("{\"scenario_id\": \"a\"}"), ParseError);
  CHECK_THROWS_AS(parse_report("[]"), ParseError);
}

TEST_CASE("writing to an unwritable path raises IoError") {
  CHECK_THROWS_AS(emit_report(ScenarioReport{}, std::filesystem::path("/nonexistent-dir/r.json")), IoError);
}

TEST_CASE("configuration parsing") {
  const auto cfg = parse_config(R"({"space": "sp", "l": 3, "x1": 1, "x2": 1.25, "lambda_grid": ["11/10", "1.5", 2],
                                   "restarts": 8, "seed": 5, "max_iters": 100, "tolerance": 1e-8, "c": 0.5, "d": 2})");
  CHECK(*cfg.space == "sp");
  CHECK(*cfg.l == 3);
  CHECK(*cfg.x2 == 1.25);
  REQUIRE(cfg.lambda_grid->size() == 3u);
  CHECK((*cfg.lambda_grid)[0] == Rational(11, 10));
  CHECK((*cfg.lambda_grid)[1] == Rational(3, 2));
  CHECK((*cfg.lambda_grid)[2] == Rational(2));
  CHECK(*cfg.seed == 5u);
  CHECK_THROWS_AS(parse_config(R"({"unknown": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"l": "three"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"l": 9})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"space": "su"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"restarts": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigFileError);

  ScenarioConfig o;
  apply_override(o, "lambda_grid", "11/10,3/2");
  apply_override(o, "x1", "2");
  CHECK(o.lambda_grid->size() == 2u);
  CHECK(*o.x1 == 2.0);
  CHECK_THROWS_AS(apply_override(o, "nope", "1"), ConfigError);
  CHECK(parse_exact_number("-1.25") == Rational(-5, 4));
  CHECK(parse_exact_number("7/21") == Rational(1, 3));
}

TEST_CASE("registry covers the result manifest") {
  const auto& reg = scenario_registry();
  const std::vector<std::string> ids = {"orbit-refute-so7", "orbit-sweep-sp", "pinching-report",
                                        "verify-bases", "verify-embeddings", "verify-geodesic-vspom1",
                                        "verify-prop-char", "verify-prop-main", "verify-vspom4"};
  REQUIRE(reg.size() == ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) CHECK(reg[i].id == ids[i]);
  std::set<std::string> manifest;
  for (const auto& m : result_manifest()) manifest.insert(m.key);
  std::set<std::string> covered;
  for (const auto& s : reg)
    for (const auto& c : s.covers) {
      CHECK_MESSAGE(manifest.count(c) == 1, "unknown manifest key " << c);
      covered.insert(c);
    }
  for (const auto& m : manifest) CHECK_MESSAGE(covered.count(m) == 1, "manifest entry not covered: " << m);
  CHECK_THROWS_AS(run_scenario("missing", {}), UnknownScenario);
}

TEST_CASE("default grid") {
  const auto g = default_lambda_grid();
  REQUIRE(g.size() == 20u);
  CHECK(g.front() == Rational(22, 21));
  CHECK(g.back() == Rational(41, 21));
}

TEST_CASE("exact certificate scenario: four checks per grid value") {
  ScenarioConfig cfg;
  cfg.lambda_grid = std::vector<Rational>{Rational(11, 10), Rational(3, 2), Rational(19, 10)};
  const auto r = run_scenario("verify-vspom4", cfg);
  CHECK(r.checks.size() == 12u);
  CHECK(r.passed());
  cfg.lambda_grid = std::vector<Rational>{Rational(2)};
  CHECK_THROWS_AS(run_scenario("verify-vspom4", cfg), ConfigError);
}

TEST_CASE("pinching scenario reports the exact endpoints") {
  const auto r = run_scenario("pinching-report", {});
  CHECK(r.passed());
  bool low = false, high = false;
  for (const auto& c : r.checks) {
    if (c.name == "pinching at x2 = x1") low = std::get<Rational>(c.actual) == Rational(1, 16);
    if (c.name == "pinching at x2 = 2 x1") high = std::get<Rational>(c.actual) == Rational(1, 4);
  }
  CHECK(low);
  CHECK(high);
}

TEST_CASE("scenarios are deterministic for a fixed seed") {
  ScenarioConfig cfg;
  cfg.seed = 77;
  for (const char* id : {"verify-bases", "verify-prop-main", "verify-prop-char"}) {
    const auto a = run_scenario(id, cfg);
    const auto b = run_scenario(id, cfg);
    CHECK(to_json_without_timing(a) == to_json_without_timing(b));
    CHECK(a.seed == 77u);
  }
}

TEST_CASE("command-line exit codes") {
  CHECK(run_cli("list") == 0);
  CHECK(run_cli("run pinching-report") == 0);
  CHECK(run_cli("run no-such-scenario") == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("run pinching-report --out /nonexistent-dir/r.json") == 3);
  CHECK(run_cli("run pinching-report --config /nonexistent/cfg.json") == 3);
  CHECK(run_cli("run verify-vspom4 --set lambda_grid=5/2") == 2);
  CHECK(run_cli("run verify-vspom4 --set bogus=1") == 2);

  const auto out = temp_path("report.json");
  CHECK(run_cli("run verify-vspom4 --set lambda_grid=3/2 --seed 3 --out " + out.string()) == 0);
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto r = parse_report(ss.str());
  CHECK(r.scenario_id == "verify-vspom4");
  CHECK(r.seed == 3u);
  CHECK(r.checks.size() == 4u);
  std::filesystem::remove(out);

  const auto cfg = temp_path("cfg.json");
  std::ofstream(cfg) << R"({"lambda_grid": ["3/2"]})";
  CHECK(run_cli("run verify-vspom4 --config " + cfg.string()) == 0);
  std::filesystem::remove(cfg);

  // a failing check gives exit code 1: one single-iteration restart cannot reach the orbit maximum
  CHECK(run_cli("run orbit-refute-so7 --set restarts=1 --set max_iters=1 --set lambda_grid=3/2") == 1);

  const auto dir = temp_path("batch");
  CHECK(run_cli("run verify-vspom4 pinching-report --out " + dir.string()) == 0);
  CHECK(std::filesystem::exists(dir / "verify-vspom4.json"));
  CHECK(std::filesystem::exists(dir / "pinching-report.json"));
  std::filesystem::remove_all(dir);
}

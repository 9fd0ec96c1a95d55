// orbit-forge: runs verification scenarios and emits JSON reports.
//
//   orbit-forge list
//   orbit-forge run <id>... | --all  [--config FILE] [--seed N] [--set key=value]... [--out PATH]
//
// Exit codes: 0 every check passed, 1 some check failed, 2 usage error, 3 I/O error.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orbitforge/scenarios.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

int list_scenarios() {
  std::map<std::string, std::string> statements;
  for (const auto& m : orbitforge::result_manifest()) statements[m.key] = m.statement;
  for (const auto& s : orbitforge::scenario_registry()) {
    std::cout << s.id << "\n  " << s.summary << "\n";
    for (const auto& key : s.covers) std::cout << "    - " << key << ": " << statements[key] << "\n";
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification scenarios for delta-homogeneity of two families of homogeneous spaces"};
  app.require_subcommand(1);

  app.add_subcommand("list", "print the scenario registry and the results each scenario covers");

  auto* run = app.add_subcommand("run", "run one or more scenarios");
  std::vector<std::string> ids;
  std::string config_path;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  std::string out;
  bool all = false;
  run->add_option("scenario", ids, "scenario id(s)");
  run->add_flag("--all", all, "run every registered scenario");
  run->add_option("--config", config_path, "flat JSON configuration file");
  auto* seed_opt = run->add_option("--seed", seed, "seed (overrides the configuration)");
  run->add_option("--set", overrides, "key=value override, highest precedence");
  run->add_option("--out", out, "report file (one scenario) or directory (several)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  if (app.got_subcommand("list")) return list_scenarios();

  if (all) {
    if (!ids.empty()) {
      std::cerr << "error: give scenario ids or --all, not both\n";
      return kUsage;
    }
    for (const auto& s : orbitforge::scenario_registry()) ids.push_back(s.id);
  }
  if (ids.empty()) {
    std::cerr << "error: no scenario given (see 'orbit-forge list')\n";
    return kUsage;
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (const auto& id : ids) {
    const auto& reg = orbitforge::scenario_registry();
    if (std::none_of(reg.begin(), reg.end(), [&](const auto& s) { return s.id == id; })) {
      std::cerr << "error: unknown scenario '" << id << "' (see 'orbit-forge list')\n";
      return kUsage;
    }
  }

  orbitforge::ScenarioConfig cfg;
  try {
    if (!config_path.empty()) cfg = orbitforge::load_config(config_path);
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw orbitforge::ConfigError("override '" + o + "' is not key=value");
      orbitforge::apply_override(cfg, o.substr(0, eq), o.substr(eq + 1));
    }
    if (*seed_opt) cfg.seed = seed;
  } catch (const orbitforge::ConfigFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const orbitforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  const bool batch = ids.size() > 1;
  if (batch && !out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) {
      std::cerr << "error: cannot create " << out << ": " << ec.message() << "\n";
      return kIo;
    }
  }

  int code = kPass;
  for (const auto& id : ids) {
    orbitforge::ScenarioReport report;
    try {
      report = orbitforge::run_scenario(id, cfg);
    } catch (const orbitforge::ConfigError& e) {
      std::cerr << "error: " << id << ": " << e.what() << "\n";
      return kUsage;
    } catch (const orbitforge::Error& e) {
      std::cerr << "error: " << id << ": " << e.what() << "\n";
      return kCheckFailure;
    }
    try {
      if (out.empty()) {
        orbitforge::emit_report(report, std::cout);
      } else {
        const std::filesystem::path p = batch ? std::filesystem::path(out) / (id + ".json") : std::filesystem::path(out);
        orbitforge::emit_report(report, p);
      }
    } catch (const orbitforge::IoError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kIo;
    }
    if (!report.passed()) {
      code = kCheckFailure;
      for (const auto& c : report.checks)
        if (!c.pass) std::cerr << id << ": FAILED " << c.name << "\n";
    }
  }
  return code;
}

// SPDX-License-Identifier: MIT
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "epikit/catalog.hpp"
#include "epikit/report.hpp"
#include "epikit/scenarios.hpp"

namespace {

constexpr int kConfigError = 2;

epikit::ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw epikit::ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return epikit::parse_config(ss.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epi-distance bounds for Rockafellian relaxations on grids"};
  app.require_subcommand(1);

  std::string scenario, config, format, out;
  std::vector<int> nus;
  double rho = 0.0, step = 0.0;
  std::vector<std::string> checks;

  auto* run = app.add_subcommand("run", "Run one scenario and print its result rows");
  auto* scen_opt = run->add_option("--scenario", scenario, "Scenario id (see `list`)");
  auto* cfg_opt = run->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
  auto* nu_opt = run->add_option("--nu", nus, "Comma separated nu values")->delimiter(',');
  auto* rho_opt = run->add_option("--rho", rho, "Truncation radius");
  auto* step_opt = run->add_option("--grid-step", step, "1-D grid step h; 2-D tables use 5h");
  auto* fmt_opt = run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--out", out, "Output file (default stdout)");
  auto* chk_opt = run->add_option("--checks", checks, "Comma separated subset of checks")->delimiter(',');

  auto* list = app.add_subcommand("list", "List scenarios");
  bool verbose = false;
  list->add_flag("-v,--verbose", verbose, "Also list checks and function catalog");

  std::string check_path;
  auto* check = app.add_subcommand("check", "Validate a JSON config without running it");
  check->add_option("--config", check_path, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*list) {
      for (const auto& s : epikit::scenario_registry()) {
        std::cout << s.id << "  " << s.summary << '\n';
        if (verbose) {
          std::cout << "    checks:";
          for (const auto& c : s.checks) std::cout << ' ' << c;
          std::cout << '\n';
        }
      }
      if (verbose) {
        std::cout << "functions:";
        for (const auto& n : epikit::catalog_names()) std::cout << ' ' << n;
        std::cout << '\n';
      }
      return 0;
    }
    if (*check) {
      const auto cfg = load_config(check_path);
      std::cout << "ok: " << cfg.id << '\n';
      return 0;
    }

    epikit::ScenarioConfig cfg;
    if (*cfg_opt) {
      cfg = load_config(config);
      if (*scen_opt && scenario != cfg.id)
        throw epikit::ConfigError("--scenario " + scenario + " does not match config id " + cfg.id);
    } else if (*scen_opt)
      cfg = epikit::default_config(scenario);
    else
      throw epikit::ConfigError("run needs --scenario or --config");
    if (*nu_opt) cfg.nu_list = nus;
    if (*rho_opt) cfg.rho = rho;
    if (*step_opt) {
      cfg.grid_step_1d = step;
      cfg.grid_step_2d = 5.0 * step;
    }
    if (*fmt_opt) cfg.format = format;
    if (*chk_opt) cfg.checks = checks;
    epikit::validate(cfg);

    const epikit::SweepResult res = epikit::run_scenario(cfg);
    epikit::emit_results(res, cfg.format, out);
    return res.exit_status;
  } catch (const epikit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

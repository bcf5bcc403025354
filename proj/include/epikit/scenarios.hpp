// SPDX-License-Identifier: MIT
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epikit/bounds.hpp"
#include "epikit/funcgrid.hpp"

namespace epikit {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Parameters of one scenario run.
 *
 * `functions` maps slot names to catalog tokens and `params` holds the
 * numeric knobs (perturbation sizes, probe boxes, multipliers); both start
 * from the scenario defaults and may be overridden. An empty `checks` list
 * runs every check of the scenario.
 */
struct ScenarioConfig {
  std::string id;
  std::vector<int> nu_list{1, 2, 4, 8, 16, 32, 64};
  double rho = 2.0;
  double grid_step_1d = 0.01;
  double grid_step_2d = 0.05;
  std::map<std::string, std::string> functions;
  std::map<std::string, double> params;
  std::vector<std::string> checks;
  std::string format = "csv";

  // Step for tables of the given dimension: 1-D, 2-D, and twice the 2-D
  // step beyond.
  double step_for(std::size_t dim) const;
};

struct ScenarioInfo {
  std::string id;
  std::string summary;
  std::vector<std::string> checks;    // quantity prefixes the scenario emits
  std::vector<std::string> theorems;  // bound ids among them
};

const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo* find_scenario(std::string_view id);

// Defaults for a registered id; throws ConfigError for unknown ids.
ScenarioConfig default_config(std::string_view id);

// Throws ConfigError describing the first problem found.
void validate(const ScenarioConfig& cfg);

// Config from JSON text: defaults of its "id" overridden by the given fields.
ScenarioConfig parse_config(std::string_view json_text);

struct ResultRow {
  std::string scenario;
  int nu = 0;  // 0 for scenario-level rows
  std::string quantity;
  ExtReal lhs = 0.0;
  ExtReal rhs = 0.0;
  double slack = 0.0;
  double tol = 0.0;
  std::string status;  // PASS, FAIL, INAPPLICABLE or ERROR
  std::optional<BoundReport> report;
  std::string note;
};

struct SweepResult {
  std::string scenario;
  std::vector<ResultRow> rows;
  std::vector<std::pair<std::string, ConvergenceProfile>> profiles;
  int exit_status = 0;  // 0 clean, 1 FAIL row, 3 ERROR row
};

SweepResult run_scenario(const ScenarioConfig& cfg);

// 1 if any row failed, else 3 if any row is an error, else 0.
int exit_status_of(const std::vector<ResultRow>& rows);

}  // namespace epikit

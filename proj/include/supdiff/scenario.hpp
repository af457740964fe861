#pragma once

#include "supdiff/json_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace supdiff {

/// One query against a scenario's family or program.
struct QuerySpec {
  std::string command;
  Vec point;
  Rational eps = Rational(1);
  int schedule_depth = 8;
  WeightScheme scheme = WeightScheme::rho();
  bool exact_active = false;
  bool certify = false;
  Vec subgradient;  // decompose only
  std::optional<Json> expected;
  std::string provenance;
};

struct Scenario {
  std::string name;
  std::optional<FunctionFamily> family;
  std::optional<ConvexProgram> program;
  std::vector<QuerySpec> queries;
};

Scenario scenario_from_json(const Json& j, const std::string& field = "scenario");
Scenario load_scenario(const std::string& path);

/// Exit codes: 0 pass, 1 expectation mismatch, 2 usage/schema error,
/// 3 hypothesis-refused computation.
struct QueryOutcome {
  Json report;
  int exit_code = 0;
};

QueryOutcome run_query(const Scenario& scenario, const QuerySpec& query);

struct SuiteReport {
  Json report;
  int exit_code = 0;
  int pass = 0;
  int fail = 0;
};

SuiteReport run_scenario(const Scenario& scenario);

/// Runs every *.json scenario under the directory, sorted by name.
SuiteReport run_suite(const std::string& directory);

/// Renders a report as indented JSON or a compact text summary.
std::string render_report(const Json& report, bool as_json);

}  // namespace supdiff

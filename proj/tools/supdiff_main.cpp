#include "supdiff/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace supdiff;

Vec parse_point(const std::string& text) {
  Vec out;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, ',')) {
    auto parsed = parse_rational(current);
    if (!parsed.has_value()) throw SchemaError("malformed coordinate '" + current + "'");
    out.push_back(*parsed);
  }
  if (out.empty()) throw SchemaError("empty point");
  return out;
}

WeightScheme parse_weights(const std::string& text) {
  if (text == "rho") return WeightScheme::rho();
  if (text == "unit") return WeightScheme::unit();
  if (text.rfind("custom:", 0) == 0) {
    const std::string path = text.substr(7);
    std::ifstream in(path);
    if (!in.good()) throw SchemaError("cannot open weight file '" + path + "'");
    Json j;
    in >> j;
    std::map<std::string, Rational> weights;
    for (const auto& [index, value] : j.items()) {
      weights.emplace(index, rational_from_json(value, "weights." + index));
    }
    return WeightScheme::custom_weights(std::move(weights));
  }
  throw SchemaError("weights must be rho, unit or custom:<file>");
}

struct CommonOptions {
  std::string scenario_path;
  std::string point;
  std::string eps = "1";
  int schedule = 8;
  std::string weights = "rho";
  std::string subgradient;
  bool exact_active = false;
  bool certify = false;
  bool as_json = false;
  bool as_text = false;
};

void attach_common(CLI::App* cmd, CommonOptions& opts, bool needs_point) {
  cmd->add_option("scenario", opts.scenario_path, "Scenario JSON file")->required();
  auto* point = cmd->add_option("--point", opts.point, "Query point, comma-separated rationals");
  if (needs_point) point->required();
  cmd->add_option("--eps", opts.eps, "Epsilon, e.g. 1 or 1/2");
  cmd->add_option("--schedule", opts.schedule, "Schedule depth (eps_k = 2^-k)");
  cmd->add_option("--weights", opts.weights, "rho | unit | custom:<file>");
  cmd->add_option("--subgradient", opts.subgradient, "Subgradient for decompose");
  cmd->add_flag("--exact-active", opts.exact_active, "Use the exact active set");
  cmd->add_flag("--certify", opts.certify, "Attach the oracle cross-check");
  cmd->add_flag("--json", opts.as_json, "JSON report");
  cmd->add_flag("--text", opts.as_text, "Text report");
}

int run_single(const std::string& command, const CommonOptions& opts) {
  const Scenario scenario = load_scenario(opts.scenario_path);
  QuerySpec query;
  query.command = command;
  query.point = parse_point(opts.point);
  auto eps = parse_rational(opts.eps);
  if (!eps.has_value() || *eps <= 0) throw SchemaError("eps must be a positive rational");
  query.eps = *eps;
  query.schedule_depth = opts.schedule;
  query.scheme = parse_weights(opts.weights);
  query.exact_active = opts.exact_active;
  query.certify = opts.certify;
  if (!opts.subgradient.empty()) query.subgradient = parse_point(opts.subgradient);

  const QueryOutcome outcome = run_query(scenario, query);
  std::cout << render_report(outcome.report, opts.as_json && !opts.as_text) << "\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact polyhedral calculus for suprema of convex functions"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {
      "normal-cone",      "normal-cone-limit", "normal-cone-parameterfree",
      "normal-cone-split", "subdiff",          "subdiff-ref",
      "subdiff-split",    "brondsted",         "decompose",
      "kkt",              "silp"};
  std::map<std::string, CommonOptions> options;
  for (const auto& name : commands) {
    auto* cmd = app.add_subcommand(name);
    attach_common(cmd, options[name], /*needs_point=*/true);
  }

  std::string suite_dir;
  bool suite_json = false;
  bool suite_text = false;
  auto* suite = app.add_subcommand("run-suite", "Run every scenario in a directory");
  suite->add_option("directory", suite_dir, "Directory of scenario files")->required();
  suite->add_flag("--json", suite_json, "JSON report");
  suite->add_flag("--text", suite_text, "Text report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (suite->parsed()) {
      const SuiteReport report = run_suite(suite_dir);
      std::cout << render_report(report.report, suite_json && !suite_text) << "\n";
      return report.exit_code;
    }
    for (const auto& name : commands) {
      if (app.get_subcommand(name)->parsed()) {
        return run_single(name, options[name]);
      }
    }
  } catch (const HypothesisError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

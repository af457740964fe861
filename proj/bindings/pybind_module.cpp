#include <pybind11/pybind11.h>

#include "supdiff/scenario.hpp"

namespace py = pybind11;

namespace {

using namespace supdiff;

// Routes through a one-query scenario document to reuse the validated parser.
std::string run_query_json(const std::string& scenario_text, const std::string& query_text) {
  Json doc = Json::parse(scenario_text);
  doc["queries"] = Json::array({Json::parse(query_text)});
  const Scenario one = scenario_from_json(doc);
  const QueryOutcome outcome = run_query(one, one.queries.front());
  Json out = outcome.report;
  out["exit_code"] = outcome.exit_code;
  return out.dump();
}

std::string run_scenario_json(const std::string& scenario_text) {
  const Scenario scenario = scenario_from_json(Json::parse(scenario_text));
  SuiteReport report = run_scenario(scenario);
  Json out = report.report;
  out["exit_code"] = report.exit_code;
  return out.dump();
}

py::tuple run_suite_dir(const std::string& directory) {
  const SuiteReport report = run_suite(directory);
  return py::make_tuple(report.exit_code, report.report.dump());
}

std::string oracle_normal_cone_json(const std::string& family_text, const std::string& point_text) {
  const FunctionFamily family = family_from_json(Json::parse(family_text));
  const Vec x = vec_from_json(Json::parse(point_text), "point");
  return polyhedron_to_json(oracle_normal_cone_dom(family, x)).dump();
}

std::string oracle_subdifferential_json(const std::string& family_text,
                                        const std::string& point_text) {
  const FunctionFamily family = family_from_json(Json::parse(family_text));
  const Vec x = vec_from_json(Json::parse(point_text), "point");
  return polyhedron_to_json(oracle_subdifferential(family, x)).dump();
}

std::string oracle_solve_json(const std::string& program_text) {
  const ConvexProgram prog = program_from_json(Json::parse(program_text));
  const SolveOutcome outcome = oracle_solve(prog);
  Json out;
  out["value"] = outcome.value.str();
  if (outcome.argmin.has_value()) out["argmin"] = vec_to_json(*outcome.argmin);
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_supdiff, m) {
  m.doc() = "Exact polyhedral calculus for suprema of convex functions";

  m.def("run_query", &run_query_json, py::arg("scenario"), py::arg("query"),
        "Run one query (JSON string) against a scenario (JSON string); returns the report.");
  m.def("run_scenario", &run_scenario_json, py::arg("scenario"),
        "Run a scenario's bundled queries; returns the aggregated report.");
  m.def("run_suite", &run_suite_dir, py::arg("directory"),
        "Run every scenario file in a directory; returns (exit_code, report).");
  m.def("oracle_normal_cone", &oracle_normal_cone_json, py::arg("family"), py::arg("point"),
        "Normal cone to dom(sup f_t) computed directly from the intersected domain.");
  m.def("oracle_subdifferential", &oracle_subdifferential_json, py::arg("family"),
        py::arg("point"), "Exact subdifferential of the assembled supremum.");
  m.def("oracle_solve", &oracle_solve_json, py::arg("program"),
        "Exact optimal value (and argmin when attained) of a polyhedral program.");
  m.def("dimension_cap", &supdiff::dimension_cap,
        "Active dimension cap (SUPDIFF_MAX_DIM, hard ceiling 6).");
}

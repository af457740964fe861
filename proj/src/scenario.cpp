#include "supdiff/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace supdiff {

namespace {

WeightScheme scheme_from_json(const Json& j, const std::string& field) {
  if (j.is_string()) {
    const std::string kind = j.get<std::string>();
    if (kind == "rho") return WeightScheme::rho();
    if (kind == "unit") return WeightScheme::unit();
    throw SchemaError(field + ": unknown weight scheme '" + kind + "'");
  }
  if (j.is_object()) {
    std::map<std::string, Rational> weights;
    for (const auto& [index, value] : j.items()) {
      weights.emplace(index, rational_from_json(value, field + "." + index));
    }
    return WeightScheme::custom_weights(std::move(weights));
  }
  throw SchemaError(field + ": expected 'rho', 'unit' or a weight map");
}

Json scheme_to_json(const WeightScheme& scheme) {
  if (scheme.kind == WeightScheme::Kind::kCustom) {
    Json out;
    for (const auto& [index, value] : scheme.custom) out[index] = rational_to_json(value);
    return out;
  }
  return Json(scheme.str());
}

QuerySpec query_from_json(const Json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("command") || !j.contains("point")) {
    throw SchemaError(field + ": expected {command, point, ...}");
  }
  QuerySpec q;
  q.command = j.at("command").get<std::string>();
  q.point = vec_from_json(j.at("point"), field + ".point");
  if (j.contains("eps")) q.eps = rational_from_json(j.at("eps"), field + ".eps");
  if (j.contains("schedule_depth")) {
    q.schedule_depth = j.at("schedule_depth").get<int>();
    if (q.schedule_depth < 1) throw SchemaError(field + ".schedule_depth: must be positive");
  }
  if (j.contains("weights")) q.scheme = scheme_from_json(j.at("weights"), field + ".weights");
  if (j.contains("exact_active")) q.exact_active = j.at("exact_active").get<bool>();
  if (j.contains("certify")) q.certify = j.at("certify").get<bool>();
  if (j.contains("subgradient")) {
    q.subgradient = vec_from_json(j.at("subgradient"), field + ".subgradient");
  }
  if (j.contains("expected")) q.expected = j.at("expected");
  if (j.contains("provenance")) q.provenance = j.at("provenance").get<std::string>();
  return q;
}

Json query_parameters_json(const QuerySpec& q) {
  Json out;
  out["eps"] = rational_to_json(q.eps);
  out["schedule_depth"] = q.schedule_depth;
  out["weights"] = scheme_to_json(q.scheme);
  out["exact_active"] = q.exact_active;
  out["certify"] = q.certify;
  if (!q.subgradient.empty()) out["subgradient"] = vec_to_json(q.subgradient);
  return out;
}

const FunctionFamily& family_or_throw(const Scenario& scenario, const std::string& command) {
  if (!scenario.family.has_value()) {
    throw SchemaError("command '" + command + "' needs a scenario with a family");
  }
  return *scenario.family;
}

const ConvexProgram& program_or_throw(const Scenario& scenario, const std::string& command) {
  if (!scenario.program.has_value()) {
    throw SchemaError("command '" + command + "' needs a scenario with a program");
  }
  return *scenario.program;
}

// Attaches the oracle comparison; hinted results are never marked certified.
void certify_set_result(SetResult& result, const Polyhedron& oracle) {
  if (result.hint_used) {
    result.certified = SetResult::Certification::kSkippedHint;
    return;
  }
  result.certified = set_equal(result.set, oracle) ? SetResult::Certification::kMatches
                                                   : SetResult::Certification::kMismatch;
}

bool certificate_is_positive(const KKTCertificate& certificate) {
  return std::get_if<Refutation>(&certificate) == nullptr;
}

// Expected blocks: {"set": poly}, {"certificate": {"kind", "lambda"?}},
// {"stabilized": bool}, {"hint_used": bool}, {"error": "hypothesis"|...},
// {"parts": {"active"|"penalized"|"improper"|"total": poly}}.
bool match_expected(const Json& expected, const Json& report, std::string* detail) {
  auto fail = [&](const std::string& why) {
    if (detail != nullptr) *detail = why;
    return false;
  };
  if (expected.contains("error")) {
    if (!report.contains("error")) return fail("expected an error, got a result");
    const std::string want = expected.at("error").get<std::string>();
    const std::string got = report.at("error_kind").get<std::string>();
    if (want != got) return fail("expected error kind '" + want + "', got '" + got + "'");
    return true;
  }
  if (report.contains("error")) {
    return fail("query failed: " + report.at("error").get<std::string>());
  }
  if (expected.contains("set")) {
    const Polyhedron want = polyhedron_from_json(expected.at("set"), "expected.set");
    const Polyhedron got =
        polyhedron_from_json(report.at("result").at("set"), "result.set");
    if (!set_equal(want, got)) return fail("set differs from the expected polyhedron");
  }
  if (expected.contains("parts")) {
    for (const auto& [key, value] : expected.at("parts").items()) {
      const Polyhedron want = polyhedron_from_json(value, "expected.parts." + key);
      const Polyhedron got =
          polyhedron_from_json(report.at("result").at(key), "result." + key);
      if (!set_equal(want, got)) return fail("part '" + key + "' differs");
    }
  }
  if (expected.contains("certificate")) {
    const Json& want = expected.at("certificate");
    const Json& got = report.at("result");
    if (want.contains("kind") && want.at("kind") != got.at("kind")) {
      return fail("certificate kind differs");
    }
    if (want.contains("lambda")) {
      const Rational lw = rational_from_json(want.at("lambda"), "expected.certificate.lambda");
      const Rational lg = rational_from_json(got.at("lambda"), "result.lambda");
      if (lw != lg) return fail("multiplier differs");
    }
  }
  if (expected.contains("stabilized")) {
    if (report.at("result").at("stabilized") != expected.at("stabilized")) {
      return fail("stabilization flag differs");
    }
  }
  if (expected.contains("hint_used")) {
    if (report.at("result").at("hint_used") != expected.at("hint_used")) {
      return fail("hint flag differs");
    }
  }
  if (expected.contains("lambda_map")) {
    for (const auto& [index, value] : expected.at("lambda_map").items()) {
      const Rational want = rational_from_json(value, "expected.lambda_map." + index);
      const Rational got =
          rational_from_json(report.at("result").at("lambda").at(index), "result.lambda");
      if (want != got) return fail("decomposition weight for '" + index + "' differs");
    }
  }
  return true;
}

Json run_query_inner(const Scenario& scenario, const QuerySpec& q) {
  Json result;
  const auto schedule = geometric_schedule(q.schedule_depth);

  if (q.command == "normal-cone") {
    const auto& family = family_or_throw(scenario, q.command);
    SetResult r = family.improper_indices().empty()
                      ? normal_cone_dom_proper(family, q.point, q.eps, q.scheme)
                      : normal_cone_dom(family, q.point, q.eps, q.scheme);
    if (q.certify) certify_set_result(r, oracle_normal_cone_dom(family, q.point));
    result = set_result_to_json(r);
  } else if (q.command == "normal-cone-limit") {
    const auto& family = family_or_throw(scenario, q.command);
    SetResult r = normal_cone_dom_mainfc(family, q.point, schedule);
    if (q.certify) certify_set_result(r, oracle_normal_cone_dom(family, q.point));
    result = set_result_to_json(r);
  } else if (q.command == "normal-cone-parameterfree") {
    const auto& family = family_or_throw(scenario, q.command);
    SetResult r = normal_cone_dom_parameterfree(family, q.point, q.eps);
    if (q.certify) certify_set_result(r, oracle_normal_cone_dom(family, q.point));
    result = set_result_to_json(r);
  } else if (q.command == "normal-cone-split") {
    const auto& family = family_or_throw(scenario, q.command);
    const NormalConeSplit split = normal_cone_split(family, q.point, q.eps, q.scheme);
    result["formula"] = "conecont/f1";
    result["active"] = polyhedron_to_json(split.part_active);
    result["penalized"] = polyhedron_to_json(split.part_penalized);
    result["improper"] = polyhedron_to_json(split.part_improper);
    result["total"] = polyhedron_to_json(split.total);
    result["hint_used"] = split.hint_used;
    if (q.certify) {
      result["certified"] =
          split.hint_used
              ? "skipped-hinted"
              : (set_equal(split.total, oracle_normal_cone_dom(family, q.point))
                     ? "matches-oracle"
                     : "mismatch");
    }
  } else if (q.command == "subdiff") {
    const auto& family = family_or_throw(scenario, q.command);
    SetResult r = subdifferential_sup(family, q.point, schedule, q.scheme);
    if (q.certify) certify_set_result(r, oracle_subdifferential(family, q.point));
    result = set_result_to_json(r);
  } else if (q.command == "subdiff-ref") {
    const auto& family = family_or_throw(scenario, q.command);
    SetResult r = subdifferential_refdem16(family, q.point, schedule);
    if (q.certify) certify_set_result(r, oracle_subdifferential(family, q.point));
    result = set_result_to_json(r);
  } else if (q.command == "subdiff-split") {
    const auto& family = family_or_throw(scenario, q.command);
    SetResult r = subdifferential_split(family, q.point, schedule, q.scheme, q.exact_active);
    if (q.certify) certify_set_result(r, oracle_subdifferential(family, q.point));
    result = set_result_to_json(r);
  } else if (q.command == "brondsted") {
    const auto& family = family_or_throw(scenario, q.command);
    SetResult r = subdifferential_brondsted(family, q.point, schedule);
    if (q.certify) certify_set_result(r, oracle_subdifferential(family, q.point));
    result = set_result_to_json(r);
  } else if (q.command == "decompose") {
    const auto& family = family_or_throw(scenario, q.command);
    if (q.subgradient.empty()) {
      throw SchemaError("decompose needs a subgradient");
    }
    const CaratheodoryDecomposition d =
        caratheodory_decompose(family, q.point, q.eps, q.subgradient);
    result["formula"] = "SubFiniteCaseb/ad";
    Json lambda;
    for (const auto& [index, value] : d.lambda) lambda[index] = rational_to_json(value);
    result["lambda"] = std::move(lambda);
    result["support_size"] = d.support_size();
  } else if (q.command == "kkt" || q.command == "silp") {
    const auto& prog = program_or_throw(scenario, q.command);
    KKTCertificate certificate = [&] {
      if (q.command == "silp") {
        const auto* affine = prog.objective.get_if<Affine>();
        if (affine == nullptr) {
          throw SchemaError("silp needs an affine objective");
        }
        return silp_certify(affine->piece.gradient, prog.constraints, q.point, schedule);
      }
      return kkt_certify(prog, q.point, schedule);
    }();
    result = certificate_to_json(certificate);
    result["formula"] = q.command == "silp" ? "th1a" : "thmoptb/th1-th2";
    if (q.certify) {
      const SolveOutcome oracle = oracle_solve(prog);
      const ExtReal fx = evaluate(prog.objective, q.point);
      const bool oracle_optimal = oracle.value == fx;
      result["certified"] = (certificate_is_positive(certificate) == oracle_optimal)
                                ? "matches-oracle"
                                : "mismatch";
    }
  } else {
    throw SchemaError("unknown command '" + q.command + "'");
  }
  return result;
}

}  // namespace

Scenario scenario_from_json(const Json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("name")) throw SchemaError(field + ": expected {name, ...}");
  Scenario out;
  out.name = j.at("name").get<std::string>();
  if (j.contains("family")) out.family = family_from_json(j.at("family"), field + ".family");
  if (j.contains("program")) out.program = program_from_json(j.at("program"), field + ".program");
  if (!out.family.has_value() && !out.program.has_value()) {
    throw SchemaError(field + ": needs a family or a program");
  }
  if (j.contains("queries")) {
    int k = 0;
    for (const auto& q : j.at("queries")) {
      out.queries.push_back(query_from_json(q, field + ".queries[" + std::to_string(k++) + "]"));
    }
  }
  return out;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw SchemaError("cannot open scenario file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw SchemaError("scenario '" + path + "': " + e.what());
  }
  return scenario_from_json(j, path);
}

QueryOutcome run_query(const Scenario& scenario, const QuerySpec& q) {
  QueryOutcome out;
  out.report["command"] = q.command;
  out.report["point"] = vec_to_json(q.point);
  out.report["parameters"] = query_parameters_json(q);
  if (!q.provenance.empty()) out.report["provenance"] = q.provenance;

  const auto started = std::chrono::steady_clock::now();
  try {
    out.report["result"] = run_query_inner(scenario, q);
  } catch (const HypothesisError& e) {
    out.report["error"] = e.what();
    out.report["error_kind"] = "hypothesis";
    out.exit_code = 3;
  } catch (const SchemaError& e) {
    out.report["error"] = e.what();
    out.report["error_kind"] = "schema";
    out.exit_code = 2;
  } catch (const std::invalid_argument& e) {
    out.report["error"] = e.what();
    out.report["error_kind"] = "invalid";
    out.exit_code = 2;
  }
  const auto elapsed = std::chrono::steady_clock::now() - started;
  out.report["elapsed_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();

  if (q.expected.has_value()) {
    std::string detail;
    const bool ok = match_expected(*q.expected, out.report, &detail);
    out.report["expected_match"] = ok;
    if (!ok) {
      out.report["mismatch"] = detail;
      if (out.exit_code == 0) out.exit_code = 1;
    } else {
      out.exit_code = 0;  // an expected error counts as a pass
    }
  }
  return out;
}

SuiteReport run_scenario(const Scenario& scenario) {
  SuiteReport out;
  out.report["scenario"] = scenario.name;
  Json queries = Json::array();
  int index = 0;
  for (const auto& q : scenario.queries) {
    QueryOutcome qo = run_query(scenario, q);
    qo.report["index"] = index++;
    const bool ok = qo.exit_code == 0;
    ok ? ++out.pass : ++out.fail;
    if (!ok && out.exit_code == 0) out.exit_code = qo.exit_code;
    queries.push_back(std::move(qo.report));
  }
  out.report["queries"] = std::move(queries);
  out.report["summary"] = Json{{"pass", out.pass}, {"fail", out.fail}};
  return out;
}

SuiteReport run_suite(const std::string& directory) {
  namespace fs = std::filesystem;
  SuiteReport out;
  std::vector<fs::path> files;
  if (fs::is_directory(directory)) {
    for (const auto& entry : fs::directory_iterator(directory)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    out.exit_code = 2;
    out.report["error"] = "no scenarios found under '" + directory + "'";
    return out;
  }
  std::sort(files.begin(), files.end());

  Json scenarios = Json::array();
  std::string first_failure;
  for (const auto& path : files) {
    try {
      const Scenario scenario = load_scenario(path.string());
      SuiteReport one = run_scenario(scenario);
      out.pass += one.pass;
      out.fail += one.fail;
      if (one.exit_code != 0 && out.exit_code == 0) out.exit_code = 1;
      if (one.exit_code != 0 && first_failure.empty()) {
        for (const auto& q : one.report.at("queries")) {
          if (q.contains("mismatch") || q.contains("error")) {
            first_failure = scenario.name + "#" + std::to_string(q.at("index").get<int>());
            break;
          }
        }
      }
      scenarios.push_back(std::move(one.report));
    } catch (const SchemaError& e) {
      ++out.fail;
      if (out.exit_code == 0) out.exit_code = 1;
      if (first_failure.empty()) first_failure = path.filename().string();
      scenarios.push_back(Json{{"scenario", path.filename().string()}, {"error", e.what()}});
    }
  }
  out.report["scenarios"] = std::move(scenarios);
  out.report["summary"] = Json{{"pass", out.pass}, {"fail", out.fail}};
  if (!first_failure.empty()) out.report["first_failure"] = first_failure;
  return out;
}

std::string render_report(const Json& report, bool as_json) {
  if (as_json) return report.dump(2);
  std::ostringstream out;
  auto describe_query = [&](const Json& q) {
    out << "  [" << q.value("index", 0) << "] " << q.at("command").get<std::string>();
    if (q.contains("error")) {
      out << " ERROR " << q.at("error").get<std::string>();
    } else if (q.at("result").contains("set")) {
      const Polyhedron p = polyhedron_from_json(q.at("result").at("set"), "result.set");
      out << " -> " << p.str();
      if (q.at("result").contains("formula")) {
        out << "   (" << q.at("result").at("formula").get<std::string>() << ")";
      }
    } else if (q.at("result").contains("kind")) {
      out << " -> " << q.at("result").at("kind").get<std::string>();
    }
    if (q.contains("expected_match")) {
      out << (q.at("expected_match").get<bool>() ? "  [ok]" : "  [MISMATCH]");
    }
    out << "\n";
  };
  if (report.contains("scenarios")) {
    for (const auto& s : report.at("scenarios")) {
      out << s.at("scenario").get<std::string>() << "\n";
      if (s.contains("error")) {
        out << "  ERROR " << s.at("error").get<std::string>() << "\n";
        continue;
      }
      for (const auto& q : s.at("queries")) describe_query(q);
    }
    out << "pass " << report.at("summary").at("pass") << ", fail "
        << report.at("summary").at("fail") << "\n";
  } else if (report.contains("queries")) {
    out << report.at("scenario").get<std::string>() << "\n";
    for (const auto& q : report.at("queries")) describe_query(q);
  } else {
    describe_query(report);
  }
  return out.str();
}

}  // namespace supdiff

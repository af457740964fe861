#pragma once

#include "supdiff/optimality.hpp"
#include "supdiff/suprema.hpp"

#include <json.hpp>

#include <string>

namespace supdiff {

/// Raised on malformed input documents; carries the offending field.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// User-facing dimension cap: SUPDIFF_MAX_DIM clamped to [1, 6], default 6.
int dimension_cap();

using Json = nlohmann::json;

// Rationals travel as [numerator, denominator] pairs; values outside the
// 64-bit range fall back to decimal strings.
Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j, const std::string& field);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j, const std::string& field);

Json polyhedron_to_json(const Polyhedron& p);
Polyhedron polyhedron_from_json(const Json& j, const std::string& field = "polyhedron");

Json function_to_json(const ConvexFunctionSpec& f);
ConvexFunctionSpec function_from_json(const Json& j, const std::string& field = "function");

Json family_to_json(const FunctionFamily& family);
FunctionFamily family_from_json(const Json& j, const std::string& field = "family");

Json program_to_json(const ConvexProgram& prog);
ConvexProgram program_from_json(const Json& j, const std::string& field = "program");

Json set_result_to_json(const SetResult& result);

Json certificate_to_json(const KKTCertificate& certificate);

}  // namespace supdiff

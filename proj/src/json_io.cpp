#include "supdiff/json_io.hpp"

#include <cstdlib>
#include <limits>

namespace supdiff {

namespace {

Json int_to_json(const Int& v) {
  static const Int lo = Int(std::numeric_limits<std::int64_t>::min());
  static const Int hi = Int(std::numeric_limits<std::int64_t>::max());
  if (v >= lo && v <= hi) {
    return Json(static_cast<std::int64_t>(v));
  }
  return Json(v.str());
}

Int int_from_json(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
      throw SchemaError(field + ": malformed integer string");
    }
  }
  throw SchemaError(field + ": expected an integer or integer string");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw SchemaError(message);
}

int dim_from_json(const Json& j, const std::string& field) {
  require(j.is_number_integer(), field + ".dim: expected an integer");
  const int dim = j.get<int>();
  require(dim >= 1, field + ".dim: must be positive");
  require(dim <= dimension_cap(),
          field + ".dim: exceeds the dimension cap " + std::to_string(dimension_cap()));
  return dim;
}

std::vector<AffinePiece> pieces_from_json(const Json& j, const std::string& field) {
  require(j.is_array(), field + ": expected an array of pieces");
  std::vector<AffinePiece> out;
  int k = 0;
  for (const auto& piece : j) {
    const std::string here = field + "[" + std::to_string(k++) + "]";
    require(piece.is_array() && piece.size() >= 2, here + ": expected [a..., b]");
    Vec coords;
    coords.reserve(piece.size());
    for (std::size_t i = 0; i < piece.size(); ++i) {
      coords.push_back(rational_from_json(piece[i], here));
    }
    AffinePiece p;
    p.offset = coords.back();
    coords.pop_back();
    p.gradient = std::move(coords);
    out.push_back(std::move(p));
  }
  return out;
}

Json pieces_to_json(const std::vector<AffinePiece>& pieces) {
  Json out = Json::array();
  for (const auto& p : pieces) {
    Json row = Json::array();
    for (const auto& c : p.gradient) row.push_back(rational_to_json(c));
    row.push_back(rational_to_json(p.offset));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

int dimension_cap() {
  static const int cap = [] {
    constexpr int kCeiling = 6;
    const char* env = std::getenv("SUPDIFF_MAX_DIM");
    if (env == nullptr) return kCeiling;
    const int requested = std::atoi(env);
    if (requested < 1) return 1;
    if (requested > kCeiling) return kCeiling;
    return requested;
  }();
  return cap;
}

Json rational_to_json(const Rational& q) {
  return Json::array({int_to_json(numerator(q)), int_to_json(denominator(q))});
}

Rational rational_from_json(const Json& j, const std::string& field) {
  if (j.is_array()) {
    require(j.size() == 2, field + ": rational must be [num, den]");
    const Int num = int_from_json(j[0], field);
    const Int den = int_from_json(j[1], field);
    require(den != 0, field + ": zero denominator");
    return make_rational(num, den);
  }
  if (j.is_number_integer() || j.is_number_unsigned() || j.is_string()) {
    if (j.is_string()) {
      auto parsed = parse_rational(j.get<std::string>());
      require(parsed.has_value(), field + ": malformed rational string");
      return *parsed;
    }
    return Rational(int_from_json(j, field));
  }
  throw SchemaError(field + ": expected a rational");
}

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back(rational_to_json(c));
  return out;
}

Vec vec_from_json(const Json& j, const std::string& field) {
  require(j.is_array(), field + ": expected an array");
  Vec out;
  out.reserve(j.size());
  int k = 0;
  for (const auto& c : j) {
    out.push_back(rational_from_json(c, field + "[" + std::to_string(k++) + "]"));
  }
  return out;
}

Json polyhedron_to_json(const Polyhedron& p) {
  Json out;
  out["dim"] = p.dim();
  Json vertices = Json::array();
  for (const auto& v : p.vertices()) vertices.push_back(vec_to_json(v));
  Json rays = Json::array();
  for (const auto& r : p.rays()) rays.push_back(vec_to_json(r));
  Json rows = Json::array();
  for (const auto& h : p.inequalities()) {
    Json row;
    row["normal"] = vec_to_json(h.normal);
    row["offset"] = rational_to_json(h.offset);
    rows.push_back(std::move(row));
  }
  out["vertices"] = std::move(vertices);
  out["rays"] = std::move(rays);
  out["inequalities"] = std::move(rows);
  return out;
}

Polyhedron polyhedron_from_json(const Json& j, const std::string& field) {
  require(j.is_object(), field + ": expected an object");
  require(j.contains("dim"), field + ".dim: missing");
  const int dim = dim_from_json(j.at("dim"), field);

  const bool has_v = j.contains("vertices") || j.contains("rays");
  const bool has_h = j.contains("inequalities");
  require(has_v || has_h, field + ": needs vertices/rays or inequalities");

  std::optional<Polyhedron> from_v;
  if (has_v) {
    std::vector<Vec> vertices;
    std::vector<Vec> rays;
    if (j.contains("vertices")) {
      for (const auto& v : j.at("vertices")) {
        Vec vert = vec_from_json(v, field + ".vertices");
        require(static_cast<int>(vert.size()) == dim, field + ".vertices: wrong dimension");
        vertices.push_back(std::move(vert));
      }
    }
    if (j.contains("rays")) {
      for (const auto& r : j.at("rays")) {
        Vec ray = vec_from_json(r, field + ".rays");
        require(static_cast<int>(ray.size()) == dim, field + ".rays: wrong dimension");
        rays.push_back(std::move(ray));
      }
    }
    from_v = Polyhedron::from_vrep(dim, std::move(vertices), std::move(rays));
  }

  std::optional<Polyhedron> from_h;
  if (has_h) {
    std::vector<HalfSpace> rows;
    int k = 0;
    for (const auto& row : j.at("inequalities")) {
      const std::string here = field + ".inequalities[" + std::to_string(k++) + "]";
      require(row.is_object() && row.contains("normal") && row.contains("offset"),
              here + ": expected {normal, offset}");
      HalfSpace h;
      h.normal = vec_from_json(row.at("normal"), here + ".normal");
      require(static_cast<int>(h.normal.size()) == dim, here + ".normal: wrong dimension");
      h.offset = rational_from_json(row.at("offset"), here + ".offset");
      rows.push_back(std::move(h));
    }
    from_h = Polyhedron::from_hrep(dim, std::move(rows));
  }

  if (from_v.has_value() && from_h.has_value()) {
    require(set_equal(*from_v, *from_h),
            field + ": vertex and inequality representations disagree");
    return *from_v;
  }
  return from_v.has_value() ? *from_v : *from_h;
}

Json function_to_json(const ConvexFunctionSpec& f) {
  Json out;
  std::visit(
      [&](const auto& fn) {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, Affine>) {
          out["kind"] = "affine";
          out["pieces"] = pieces_to_json({fn.piece});
        } else if constexpr (std::is_same_v<T, MaxAffine>) {
          out["kind"] = "max_affine";
          out["pieces"] = pieces_to_json(fn.pieces);
        } else if constexpr (std::is_same_v<T, Restricted>) {
          out["kind"] = "restricted";
          out["pieces"] = pieces_to_json(fn.pieces);
          out["domain"] = polyhedron_to_json(fn.domain);
        } else if constexpr (std::is_same_v<T, Indicator>) {
          out["kind"] = "indicator";
          out["domain"] = polyhedron_to_json(fn.domain);
        } else {
          out["kind"] = "improper";
          out["domain"] = polyhedron_to_json(fn.domain);
        }
      },
      f.variant());
  return out;
}

ConvexFunctionSpec function_from_json(const Json& j, const std::string& field) {
  require(j.is_object() && j.contains("kind"), field + ": expected {kind, ...}");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "affine") {
      auto pieces = pieces_from_json(j.at("pieces"), field + ".pieces");
      require(pieces.size() == 1, field + ": affine takes exactly one piece");
      return ConvexFunctionSpec::affine(pieces.front().gradient, pieces.front().offset);
    }
    if (kind == "max_affine") {
      return ConvexFunctionSpec::max_affine(pieces_from_json(j.at("pieces"), field + ".pieces"));
    }
    if (kind == "restricted") {
      auto pieces = j.contains("pieces")
                        ? pieces_from_json(j.at("pieces"), field + ".pieces")
                        : std::vector<AffinePiece>{};
      return ConvexFunctionSpec::restricted(std::move(pieces),
                                            polyhedron_from_json(j.at("domain"), field + ".domain"));
    }
    if (kind == "indicator") {
      return ConvexFunctionSpec::indicator(polyhedron_from_json(j.at("domain"), field + ".domain"));
    }
    if (kind == "improper") {
      return ConvexFunctionSpec::improper_neg_inf(
          polyhedron_from_json(j.at("domain"), field + ".domain"));
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(field + ": " + e.what());
  } catch (const Json::exception& e) {
    throw SchemaError(field + ": " + e.what());
  }
  throw SchemaError(field + ".kind: unknown kind '" + kind + "'");
}

Json family_to_json(const FunctionFamily& family) {
  Json entries;
  for (const auto& [index, fn] : family.entries()) {
    entries[index] = function_to_json(fn);
  }
  Json out;
  out["dim"] = family.dim();
  out["entries"] = std::move(entries);
  if (!family.closure_hints().empty()) {
    Json hints = Json::array();
    for (const auto& h : family.closure_hints()) hints.push_back(vec_to_json(h));
    out["closure_hints"] = std::move(hints);
  }
  return out;
}

FunctionFamily family_from_json(const Json& j, const std::string& field) {
  require(j.is_object() && j.contains("dim") && j.contains("entries"),
          field + ": expected {dim, entries, ...}");
  const int dim = dim_from_json(j.at("dim"), field);
  require(j.at("entries").is_object() && !j.at("entries").empty(),
          field + ".entries: expected a nonempty object");
  std::map<std::string, ConvexFunctionSpec> entries;
  for (const auto& [index, fn] : j.at("entries").items()) {
    auto spec = function_from_json(fn, field + ".entries." + index);
    require(spec.dim() == dim, field + ".entries." + index + ": wrong dimension");
    entries.emplace(index, std::move(spec));
  }
  std::vector<Vec> hints;
  if (j.contains("closure_hints")) {
    for (const auto& h : j.at("closure_hints")) {
      Vec hint = vec_from_json(h, field + ".closure_hints");
      require(static_cast<int>(hint.size()) == dim, field + ".closure_hints: wrong dimension");
      hints.push_back(std::move(hint));
    }
  }
  return FunctionFamily(dim, std::move(entries), std::move(hints));
}

Json program_to_json(const ConvexProgram& prog) {
  Json out;
  out["objective"] = function_to_json(prog.objective);
  out["constraints"] = family_to_json(prog.constraints);
  return out;
}

ConvexProgram program_from_json(const Json& j, const std::string& field) {
  require(j.is_object() && j.contains("objective") && j.contains("constraints"),
          field + ": expected {objective, constraints}");
  auto objective = function_from_json(j.at("objective"), field + ".objective");
  auto constraints = family_from_json(j.at("constraints"), field + ".constraints");
  try {
    return ConvexProgram(std::move(objective), std::move(constraints));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(field + ": " + e.what());
  }
}

Json set_result_to_json(const SetResult& result) {
  Json out;
  out["set"] = polyhedron_to_json(result.set);
  out["formula"] = result.formula;
  Json eps = Json::array();
  for (const auto& e : result.eps_used) eps.push_back(rational_to_json(e));
  out["eps"] = std::move(eps);
  out["scheme"] = result.scheme;
  out["stabilized"] = result.stabilized;
  out["hint_used"] = result.hint_used;
  switch (result.certified) {
    case SetResult::Certification::kNotChecked:
      out["certified"] = nullptr;
      break;
    case SetResult::Certification::kMatches:
      out["certified"] = "matches-oracle";
      break;
    case SetResult::Certification::kMismatch:
      out["certified"] = "mismatch";
      break;
    case SetResult::Certification::kSkippedHint:
      out["certified"] = "skipped-hinted";
      break;
  }
  if (!result.note.empty()) out["note"] = result.note;
  return out;
}

Json certificate_to_json(const KKTCertificate& certificate) {
  Json out;
  if (const auto* nc = std::get_if<NormalConeCase>(&certificate)) {
    out["kind"] = "normal_cone";
    Json witnesses = Json::array();
    for (const auto& w : nc->witnesses) {
      Json item;
      item["eps"] = rational_to_json(w.eps);
      item["objective_part"] = vec_to_json(w.objective_part);
      item["cone_part"] = vec_to_json(w.cone_part);
      witnesses.push_back(std::move(item));
    }
    out["witnesses"] = std::move(witnesses);
  } else if (const auto* mc = std::get_if<MultiplierCase>(&certificate)) {
    out["kind"] = "multiplier";
    out["lambda"] = rational_to_json(mc->lambda);
    out["objective_part"] = vec_to_json(mc->objective_part);
    out["constraint_part"] = vec_to_json(mc->constraint_part);
  } else {
    const auto& r = std::get<Refutation>(certificate);
    out["kind"] = "refutation";
    out["direction"] = vec_to_json(r.direction);
    out["step"] = rational_to_json(r.step);
    out["objective_decrease"] = rational_to_json(r.objective_decrease);
  }
  return out;
}

}  // namespace supdiff

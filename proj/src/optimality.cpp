#include "supdiff/optimality.hpp"

#include "supdiff/lp.hpp"

#include <stdexcept>

namespace supdiff {

namespace {

// Inner LP data for the program: variables (x, s) with s an epigraph bound on
// the objective; feasibility rows encode every constraint entry.
struct ProgramLp {
  std::vector<lp::Constraint> rows;  // over (x_1..x_n, s)
  int n;
};

ProgramLp build_program_lp(const ConvexProgram& prog) {
  ProgramLp out;
  out.n = prog.dim();
  auto push_plain = [&](const Vec& normal, const Rational& offset) {
    Vec row = normal;
    row.push_back(Rational(0));
    out.rows.push_back(lp::less_equal(std::move(row), offset));
  };
  // objective epigraph: <a, x> - s <= b per piece, x in dom f0
  for (const auto& p : effective_pieces(prog.objective)) {
    Vec row = p.gradient;
    row.push_back(Rational(-1));
    out.rows.push_back(lp::less_equal(std::move(row), p.offset));
  }
  for (const auto& h : domain(prog.objective).inequalities()) push_plain(h.normal, h.offset);
  // constraints: f_t(x) <= 0
  for (const auto& [index, entry] : prog.constraints.entries()) {
    if (is_proper(entry)) {
      for (const auto& p : effective_pieces(entry)) push_plain(p.gradient, p.offset);
    }
    const Polyhedron dom = domain(entry);
    for (const auto& h : dom.inequalities()) push_plain(h.normal, h.offset);
  }
  return out;
}

Rational objective_value(const ConvexProgram& prog, const Vec& x) {
  const ExtReal v = evaluate(prog.objective, x);
  if (!v.is_finite()) throw std::logic_error("objective not finite at a feasible point");
  return v.finite_value();
}

// theta in d f0(x) + cone, via one LP over g (the cone element is -g).
std::optional<Vec> zero_decomposition(const Polyhedron& subdiff, const Polyhedron& cone) {
  const int n = subdiff.dim();
  std::vector<lp::Constraint> rows;
  for (const auto& h : subdiff.inequalities()) {
    rows.push_back(lp::less_equal(h.normal, h.offset));
  }
  for (const auto& h : cone.inequalities()) {
    rows.push_back(lp::less_equal(scaled(h.normal, Rational(-1)), h.offset));
  }
  Vec g;
  if (!lp::feasible(rows, n, &g)) return std::nullopt;
  return g;
}

// Searches lambda > 0 with theta in lambda * d f0(x) + S.
// Variables: eta over vertices of d f0 (sum = lambda), mu over its rays, and
// s in S; capped maximize first, uncapped minimize for the tail interval.
std::optional<MultiplierCase> multiplier_search(const Polyhedron& subdiff, const Polyhedron& s_set,
                                                int n) {
  if (s_set.is_empty()) return std::nullopt;
  const auto& verts = subdiff.vertices();
  const auto& rays = subdiff.rays();
  const int nv = static_cast<int>(verts.size());
  const int nr = static_cast<int>(rays.size());
  const int columns = nv + nr + n;  // eta, mu, s

  std::vector<lp::Constraint> rows;
  for (int c = 0; c < n; ++c) {
    Vec row = zero_vec(columns);
    for (int i = 0; i < nv; ++i) row[i] = verts[i][c];
    for (int j = 0; j < nr; ++j) row[nv + j] = rays[j][c];
    row[nv + nr + c] = 1;
    rows.push_back(lp::equal(std::move(row), Rational(0)));
  }
  for (const auto& h : s_set.inequalities()) {
    Vec row = zero_vec(columns);
    for (int c = 0; c < n; ++c) row[nv + nr + c] = h.normal[c];
    rows.push_back(lp::less_equal(std::move(row), h.offset));
  }
  for (int j = 0; j < nv + nr; ++j) {
    Vec row = zero_vec(columns);
    row[j] = -1;
    rows.push_back(lp::less_equal(std::move(row), Rational(0)));
  }
  Vec lambda_row = zero_vec(columns);
  for (int i = 0; i < nv; ++i) lambda_row[i] = 1;

  auto extract = [&](const Vec& point, const Rational& lambda) -> MultiplierCase {
    Vec weighted = zero_vec(n);
    for (int i = 0; i < nv; ++i) weighted = add(weighted, scaled(verts[i], point[i]));
    for (int j = 0; j < nr; ++j) weighted = add(weighted, scaled(rays[j], point[nv + j]));
    MultiplierCase out;
    out.lambda = lambda;
    out.objective_part = scaled(weighted, Rational(1) / lambda);
    out.constraint_part = Vec(point.begin() + nv + nr, point.begin() + nv + nr + n);
    return out;
  };

  // capped: maximize lambda subject to lambda <= 1
  {
    std::vector<lp::Constraint> capped = rows;
    capped.push_back(lp::less_equal(lambda_row, Rational(1)));
    const lp::Solution sol = lp::maximize(lambda_row, capped);
    if (sol.status == lp::Status::kOptimal && sol.value > 0) {
      return extract(sol.point, sol.value);
    }
    if (sol.status == lp::Status::kOptimal) {
      // lambda = 0 is the only feasible weight below the cap; a convex
      // feasible interval containing 0 cannot resume above 1.
      return std::nullopt;
    }
  }
  // uncapped tail: the feasible lambda interval lies above 1 if anywhere
  {
    const lp::Solution sol = lp::minimize(lambda_row, rows);
    if (sol.status == lp::Status::kOptimal && sol.value > 0) {
      return extract(sol.point, sol.value);
    }
  }
  return std::nullopt;
}

Refutation descent_refutation(const ConvexProgram& prog, const Vec& x) {
  const Rational fx = objective_value(prog, x);
  const ProgramLp inner = build_program_lp(prog);
  Vec objective = zero_vec(inner.n + 1);
  objective[inner.n] = 1;
  const lp::Solution sol = lp::minimize(objective, inner.rows);
  if (sol.status == lp::Status::kInfeasible) {
    throw std::logic_error("descent search on an infeasible program");
  }

  Vec target;
  if (sol.status == lp::Status::kOptimal) {
    if (sol.value >= fx) {
      throw std::logic_error(
          "optimality conditions refuted the point but no descent direction exists");
    }
    target = Vec(sol.point.begin(), sol.point.end() - 1);
  } else {
    // Unbounded: walk the improving ray until the objective drops below f0(x).
    Vec base(sol.point.begin(), sol.point.end() - 1);
    Vec dir(sol.ray.begin(), sol.ray.end() - 1);
    Rational t(1);
    for (int iter = 0; iter < 200; ++iter) {
      target = add(base, scaled(dir, t));
      const ExtReal v = evaluate(prog.objective, target);
      if (v.is_finite() && v.finite_value() < fx) break;
      t *= 2;
    }
  }

  Refutation out;
  out.direction = sub(target, x);
  out.step = Rational(1);
  out.objective_decrease = fx - objective_value(prog, target);
  if (out.objective_decrease <= 0) {
    throw std::logic_error("refutation direction does not decrease the objective");
  }
  return out;
}

}  // namespace

ConvexProgram::ConvexProgram(ConvexFunctionSpec objective_in, FunctionFamily constraints_in)
    : objective(std::move(objective_in)), constraints(std::move(constraints_in)) {
  if (!is_proper(objective)) throw std::invalid_argument("objective must be proper");
  if (objective.dim() != constraints.dim()) throw std::invalid_argument("dimension mismatch");
}

bool check_feasible(const ConvexProgram& prog, const Vec& x) {
  if (static_cast<int>(x.size()) != prog.dim()) throw std::invalid_argument("dimension mismatch");
  if (sup_value(prog.constraints, x) > ExtReal(Rational(0))) return false;
  return !evaluate(prog.objective, x).is_plus_infinity();
}

std::optional<Vec> slater_point(const ConvexProgram& prog) {
  const int n = prog.dim();
  // maximize margin m: every constraint piece <= -m, memberships plain.
  std::vector<lp::Constraint> rows;
  auto push_plain = [&](const Polyhedron& dom) {
    for (const auto& h : dom.inequalities()) {
      Vec row = h.normal;
      row.push_back(Rational(0));
      rows.push_back(lp::less_equal(std::move(row), h.offset));
    }
  };
  for (const auto& [index, entry] : prog.constraints.entries()) {
    if (is_proper(entry)) {
      for (const auto& p : effective_pieces(entry)) {
        Vec row = p.gradient;
        row.push_back(Rational(1));
        rows.push_back(lp::less_equal(std::move(row), p.offset));
      }
    }
    push_plain(domain(entry));
  }
  push_plain(domain(prog.objective));
  Vec cap = zero_vec(n + 1);
  cap[n] = 1;
  rows.push_back(lp::less_equal(std::move(cap), Rational(1)));

  Vec objective = zero_vec(n + 1);
  objective[n] = 1;
  const lp::Solution sol = lp::maximize(objective, rows);
  if (sol.status != lp::Status::kOptimal || sol.value <= 0) return std::nullopt;
  return Vec(sol.point.begin(), sol.point.end() - 1);
}

bool continuity_hypothesis(const ConvexProgram& prog) {
  const Polyhedron dom_objective = domain(prog.objective);
  const Polyhedron dom_constraints = family_domain(prog.constraints);
  // int(P) meets Q: margin on P's rows only.
  auto interior_meets = [](const Polyhedron& p, const Polyhedron& q) {
    const int n = p.dim();
    std::vector<lp::Constraint> rows;
    for (const auto& h : p.inequalities()) {
      Vec row = h.normal;
      row.push_back(l1_norm(h.normal));
      rows.push_back(lp::less_equal(std::move(row), h.offset));
    }
    for (const auto& h : q.inequalities()) {
      Vec row = h.normal;
      row.push_back(Rational(0));
      rows.push_back(lp::less_equal(std::move(row), h.offset));
    }
    Vec cap = zero_vec(n + 1);
    cap[n] = 1;
    rows.push_back(lp::less_equal(std::move(cap), Rational(1)));
    Vec objective = zero_vec(n + 1);
    objective[n] = 1;
    const lp::Solution sol = lp::maximize(objective, rows);
    return sol.status == lp::Status::kOptimal && sol.value > 0;
  };
  return interior_meets(dom_objective, dom_constraints) ||
         interior_meets(dom_constraints, dom_objective);
}

KKTCertificate kkt_certify(const ConvexProgram& prog, const Vec& x,
                           const std::vector<Rational>& schedule) {
  if (schedule.empty()) throw std::invalid_argument("empty epsilon schedule");
  if (!check_feasible(prog, x)) {
    throw std::invalid_argument("kkt_certify: point is not feasible");
  }
  if (!slater_point(prog).has_value()) {
    throw HypothesisError("Slater condition violated: no strictly feasible point");
  }
  if (!continuity_hypothesis(prog)) {
    throw HypothesisError("continuity hypothesis not verified");
  }

  const Polyhedron subdiff = eps_subdifferential(prog.objective, x, Rational(0));
  if (subdiff.is_empty()) {
    throw std::logic_error("empty objective subdifferential at a domain point");
  }

  // Condition (a): theta in d f0(x) + N_dom f(x), tested per scheduled eps
  // with a cross-eps equality tripwire.
  NormalConeCase normal_case;
  bool th1_holds = true;
  std::optional<Polyhedron> previous_cone;
  for (const auto& eps : schedule) {
    const Polyhedron cone = normal_cone_dom(prog.constraints, x, eps, WeightScheme::rho()).set;
    if (previous_cone.has_value() && !set_equal(*previous_cone, cone)) {
      throw std::logic_error("normal cone varies across the schedule");
    }
    previous_cone = cone;
    const auto witness = zero_decomposition(subdiff, cone);
    if (!witness.has_value()) {
      th1_holds = false;
      break;
    }
    normal_case.witnesses.push_back(
        NormalConeCase::Witness{eps, *witness, scaled(*witness, Rational(-1))});
  }
  if (th1_holds) return normal_case;

  const ExtReal fx = sup_value(prog.constraints, x);
  if (fx == ExtReal(Rational(0))) {
    // Condition (b): theta in lambda d f0(x) + df(x) for some lambda > 0.
    const SetResult s_result =
        subdifferential_sup(prog.constraints, x, schedule, WeightScheme::rho());
    if (!s_result.stabilized) {
      throw std::runtime_error("schedule exhausted: supremum subdifferential did not stabilize");
    }
    const auto multiplier = multiplier_search(subdiff, s_result.set, prog.dim());
    if (multiplier.has_value()) return *multiplier;
  }
  return descent_refutation(prog, x);
}

KKTCertificate silp_certify(const Vec& c, const FunctionFamily& constraints, const Vec& x,
                            const std::vector<Rational>& schedule) {
  for (const auto& [index, entry] : constraints.entries()) {
    if (entry.get_if<Affine>() == nullptr) {
      throw std::invalid_argument("silp_certify: constraint '" + index + "' is not affine");
    }
  }
  ConvexProgram prog(ConvexFunctionSpec::affine(c, Rational(0)), constraints);
  return kkt_certify(prog, x, schedule);
}

SolveOutcome oracle_solve(const ConvexProgram& prog) {
  const ProgramLp inner = build_program_lp(prog);
  Vec objective = zero_vec(inner.n + 1);
  objective[inner.n] = 1;
  const lp::Solution sol = lp::minimize(objective, inner.rows);
  switch (sol.status) {
    case lp::Status::kInfeasible:
      return SolveOutcome{ExtReal::plus_infinity(), std::nullopt};
    case lp::Status::kUnbounded:
      return SolveOutcome{ExtReal::minus_infinity(), std::nullopt};
    case lp::Status::kOptimal:
      break;
  }
  return SolveOutcome{ExtReal(sol.value), Vec(sol.point.begin(), sol.point.end() - 1)};
}

}  // namespace supdiff

#include <doctest.h>

#include "supdiff/optimality.hpp"

#include <random>

using namespace supdiff;

namespace {

Rational Q(long n, long d = 1) { return make_rational(Int(n), Int(d)); }

ConvexFunctionSpec abs_function() {
  return ConvexFunctionSpec::max_affine(
      {AffinePiece{{Q(1)}, Q(0)}, AffinePiece{{Q(-1)}, Q(0)}});
}

// min f0 s.t. x - 1 <= 0
ConvexProgram abs_program() {
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("c", ConvexFunctionSpec::affine({Q(1)}, Q(1)));
  return ConvexProgram(abs_function(), FunctionFamily(1, std::move(entries)));
}

// min -x s.t. t(x - 1) <= 0 for t in {1, 2}
ConvexProgram tilted_program() {
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("1", ConvexFunctionSpec::affine({Q(1)}, Q(1)));
  entries.emplace("2", ConvexFunctionSpec::affine({Q(2)}, Q(2)));
  return ConvexProgram(ConvexFunctionSpec::affine({Q(-1)}, Q(0)),
                       FunctionFamily(1, std::move(entries)));
}

FunctionFamily tilted_constraints() {
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("1", ConvexFunctionSpec::affine({Q(1)}, Q(1)));
  entries.emplace("2", ConvexFunctionSpec::affine({Q(2)}, Q(2)));
  return FunctionFamily(1, std::move(entries));
}

// Verifies every certificate identity by exact substitution.
void verify_certificate(const ConvexProgram& prog, const Vec& x, const KKTCertificate& cert,
                        const std::vector<Rational>& schedule) {
  if (const auto* nc = std::get_if<NormalConeCase>(&cert)) {
    REQUIRE(!nc->witnesses.empty());
    const Polyhedron subdiff = eps_subdifferential(prog.objective, x, Q(0));
    for (const auto& w : nc->witnesses) {
      CHECK(contains_point(subdiff, w.objective_part));
      const Polyhedron cone = normal_cone_dom(prog.constraints, x, w.eps, WeightScheme::rho()).set;
      CHECK(contains_point(cone, w.cone_part));
      CHECK(is_zero(add(w.objective_part, w.cone_part)));
    }
  } else if (const auto* mc = std::get_if<MultiplierCase>(&cert)) {
    CHECK(mc->lambda > 0);
    CHECK(contains_point(eps_subdifferential(prog.objective, x, Q(0)), mc->objective_part));
    const SetResult s = subdifferential_sup(prog.constraints, x, schedule, WeightScheme::rho());
    CHECK(contains_point(s.set, mc->constraint_part));
    CHECK(is_zero(add(scaled(mc->objective_part, mc->lambda), mc->constraint_part)));
  } else {
    const auto& r = std::get<Refutation>(cert);
    const Vec y = add(x, scaled(r.direction, r.step));
    CHECK(check_feasible(prog, y));
    const Rational fx = evaluate(prog.objective, x).finite_value();
    const Rational fy = evaluate(prog.objective, y).finite_value();
    CHECK(fy < fx);
    CHECK(r.objective_decrease == fx - fy);
  }
}

}  // namespace

TEST_CASE("feasibility checks") {
  auto prog = abs_program();
  CHECK(check_feasible(prog, {Q(0)}));
  CHECK(!check_feasible(prog, {Q(2)}));
  CHECK(check_feasible(prog, {Q(1)}));
}

TEST_CASE("Slater points") {
  auto prog = abs_program();
  auto s = slater_point(prog);
  REQUIRE(s.has_value());
  CHECK(sup_value(prog.constraints, *s) < ExtReal(Q(0)));

  // constraints {x, -x}: only x = 0 feasible with f(0) = 0, no Slater point
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("up", ConvexFunctionSpec::affine({Q(1)}, Q(0)));
  entries.emplace("down", ConvexFunctionSpec::affine({Q(-1)}, Q(0)));
  ConvexProgram pinched(abs_function(), FunctionFamily(1, std::move(entries)));
  CHECK(!slater_point(pinched).has_value());

  // 2-d box constraints: an interior point exists
  std::map<std::string, ConvexFunctionSpec> box;
  box.emplace("r", ConvexFunctionSpec::affine({Q(1), Q(0)}, Q(1)));
  box.emplace("l", ConvexFunctionSpec::affine({Q(-1), Q(0)}, Q(1)));
  box.emplace("u", ConvexFunctionSpec::affine({Q(0), Q(1)}, Q(1)));
  box.emplace("d", ConvexFunctionSpec::affine({Q(0), Q(-1)}, Q(1)));
  ConvexProgram boxed(ConvexFunctionSpec::affine({Q(1), Q(1)}, Q(0)),
                      FunctionFamily(2, std::move(box)));
  auto sb = slater_point(boxed);
  REQUIRE(sb.has_value());
  CHECK(sup_value(boxed.constraints, *sb) < ExtReal(Q(0)));
}

TEST_CASE("continuity hypothesis for programs") {
  CHECK(continuity_hypothesis(abs_program()));

  // objective restricted to a segment in R^2, full-dimensional constraints
  auto segment = Polyhedron::from_vrep(2, {{Q(0), Q(0)}, {Q(1), Q(0)}}, {});
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("c", ConvexFunctionSpec::affine({Q(1), Q(1)}, Q(5)));
  ConvexProgram narrow(ConvexFunctionSpec::restricted({}, segment),
                       FunctionFamily(2, std::move(entries)));
  CHECK(continuity_hypothesis(narrow));

  // two parallel lines with empty interiors: hypothesis fails
  auto line_x0 =
      Polyhedron::from_hrep(2, {HalfSpace{{Q(1), Q(0)}, Q(0)}, HalfSpace{{Q(-1), Q(0)}, Q(0)}});
  auto line_x1 =
      Polyhedron::from_hrep(2, {HalfSpace{{Q(1), Q(0)}, Q(1)}, HalfSpace{{Q(-1), Q(0)}, Q(-1)}});
  std::map<std::string, ConvexFunctionSpec> walls;
  walls.emplace("w", ConvexFunctionSpec::indicator(line_x1));
  ConvexProgram parallel(ConvexFunctionSpec::restricted({}, line_x0),
                         FunctionFamily(2, std::move(walls)));
  CHECK(!continuity_hypothesis(parallel));
}

TEST_CASE("kkt at a strictly feasible optimum") {
  auto prog = abs_program();
  auto schedule = geometric_schedule(6);
  auto cert = kkt_certify(prog, {Q(0)}, schedule);
  CHECK(std::holds_alternative<NormalConeCase>(cert));
  verify_certificate(prog, {Q(0)}, cert, schedule);
}

TEST_CASE("kkt multiplier case on the boundary") {
  auto prog = tilted_program();
  auto schedule = geometric_schedule(6);
  auto cert = kkt_certify(prog, {Q(1)}, schedule);
  auto* mc = std::get_if<MultiplierCase>(&cert);
  REQUIRE(mc != nullptr);
  CHECK(mc->lambda == Q(1));
  verify_certificate(prog, {Q(1)}, cert, schedule);
}

TEST_CASE("kkt refutation at a suboptimal point") {
  auto prog = tilted_program();
  auto schedule = geometric_schedule(6);
  auto cert = kkt_certify(prog, {Q(0)}, schedule);
  auto* r = std::get_if<Refutation>(&cert);
  REQUIRE(r != nullptr);
  CHECK(r->direction == Vec{Q(1)});
  verify_certificate(prog, {Q(0)}, cert, schedule);
}

TEST_CASE("kkt hypothesis refusals") {
  auto schedule = geometric_schedule(6);
  // violating Slater: constraints {x, -x}
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("up", ConvexFunctionSpec::affine({Q(1)}, Q(0)));
  entries.emplace("down", ConvexFunctionSpec::affine({Q(-1)}, Q(0)));
  ConvexProgram pinched(abs_function(), FunctionFamily(1, std::move(entries)));
  CHECK_THROWS_WITH_AS(kkt_certify(pinched, {Q(0)}, schedule), doctest::Contains("Slater"),
                       HypothesisError);

  // infeasible point is a precondition error, not a hypothesis refusal
  CHECK_THROWS_AS(kkt_certify(abs_program(), {Q(5)}, schedule), std::invalid_argument);
}

TEST_CASE("silp certification (worked program)") {
  auto constraints = tilted_constraints();
  auto schedule = geometric_schedule(6);

  // c = -1: minimize -x, optimum at x = 1 with lambda = 1
  auto cert = silp_certify({Q(-1)}, constraints, {Q(1)}, schedule);
  auto* mc = std::get_if<MultiplierCase>(&cert);
  REQUIRE(mc != nullptr);
  CHECK(mc->lambda == Q(1));

  // x = 0 is suboptimal: refutation moving right
  auto cert2 = silp_certify({Q(-1)}, constraints, {Q(0)}, schedule);
  auto* r = std::get_if<Refutation>(&cert2);
  REQUIRE(r != nullptr);
  CHECK(dot(r->direction, {Q(1)}) > 0);

  // c = +1: minimize x is unbounded below over x <= 1; x = 1 refuted
  auto cert3 = silp_certify({Q(1)}, constraints, {Q(1)}, schedule);
  CHECK(std::holds_alternative<Refutation>(cert3));

  // c = 0: any feasible point is optimal
  auto cert4 = silp_certify({Q(0)}, constraints, {Q(0)}, schedule);
  CHECK(!std::holds_alternative<Refutation>(cert4));

  // non-affine constraints are rejected
  std::map<std::string, ConvexFunctionSpec> bad;
  bad.emplace("abs", abs_function());
  FunctionFamily bad_family(1, std::move(bad));
  CHECK_THROWS_AS(silp_certify({Q(1)}, bad_family, {Q(0)}, schedule), std::invalid_argument);
}

TEST_CASE("oracle_solve statuses") {
  auto prog = abs_program();
  auto outcome = oracle_solve(prog);
  CHECK(outcome.value == ExtReal(Q(0)));
  REQUIRE(outcome.argmin.has_value());
  CHECK(evaluate(prog.objective, *outcome.argmin) == ExtReal(Q(0)));

  auto tilted = tilted_program();
  auto o2 = oracle_solve(tilted);
  CHECK(o2.value == ExtReal(Q(-1)));
  REQUIRE(o2.argmin.has_value());
  CHECK((*o2.argmin)[0] == Q(1));

  // minimize x with x <= 1: unbounded below
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("c", ConvexFunctionSpec::affine({Q(1)}, Q(1)));
  ConvexProgram unbounded(ConvexFunctionSpec::affine({Q(1)}, Q(0)),
                          FunctionFamily(1, std::move(entries)));
  CHECK(oracle_solve(unbounded).value.is_minus_infinity());

  // infeasible constraints
  std::map<std::string, ConvexFunctionSpec> clash;
  clash.emplace("a", ConvexFunctionSpec::indicator(Polyhedron::from_hrep(
                         1, {HalfSpace{{Q(1)}, Q(0)}})));
  clash.emplace("b", ConvexFunctionSpec::indicator(Polyhedron::from_hrep(
                         1, {HalfSpace{{Q(-1)}, Q(-1)}})));
  ConvexProgram infeasible(ConvexFunctionSpec::affine({Q(1)}, Q(0)),
                           FunctionFamily(1, std::move(clash)));
  CHECK(oracle_solve(infeasible).value.is_plus_infinity());
}

TEST_CASE("randomized soundness against the solve oracle") {
  std::mt19937_64 rng(20250203);
  std::uniform_int_distribution<int> coeff(-2, 2);
  auto schedule = geometric_schedule(6);
  int certified = 0;
  int refuted = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 2);
    // box plus a couple of random cuts through a strictly feasible anchor
    std::map<std::string, ConvexFunctionSpec> entries;
    for (int c = 0; c < dim; ++c) {
      Vec up = zero_vec(dim);
      up[c] = 1;
      entries.emplace("hi" + std::to_string(c), ConvexFunctionSpec::affine(up, Q(3)));
      Vec down = zero_vec(dim);
      down[c] = -1;
      entries.emplace("lo" + std::to_string(c), ConvexFunctionSpec::affine(down, Q(3)));
    }
    const int extra = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < extra; ++i) {
      Vec normal(dim);
      bool zero = true;
      for (auto& v : normal) {
        v = Q(coeff(rng));
        if (v != 0) zero = false;
      }
      if (zero) continue;
      // strictly satisfied at the origin
      entries.emplace("cut" + std::to_string(i),
                      ConvexFunctionSpec::affine(normal, Q(1 + static_cast<long>(rng() % 3))));
    }
    std::vector<AffinePiece> objective_pieces;
    const int np = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < np; ++i) {
      AffinePiece p;
      p.gradient.resize(dim);
      for (auto& v : p.gradient) v = Q(coeff(rng));
      p.offset = Q(coeff(rng));
      objective_pieces.push_back(std::move(p));
    }
    ConvexProgram prog(ConvexFunctionSpec::max_affine(std::move(objective_pieces)),
                       FunctionFamily(dim, std::move(entries)));
    if (!slater_point(prog).has_value() || !continuity_hypothesis(prog)) continue;

    const SolveOutcome solved = oracle_solve(prog);
    REQUIRE(solved.value.is_finite());  // box-bounded
    REQUIRE(solved.argmin.has_value());

    auto cert = kkt_certify(prog, *solved.argmin, schedule);
    CHECK(!std::holds_alternative<Refutation>(cert));
    verify_certificate(prog, *solved.argmin, cert, schedule);
    ++certified;

    // a feasible point away from the optimum refutes unless equally good
    Vec probe = zero_vec(dim);
    if (check_feasible(prog, probe)) {
      const Rational fp = evaluate(prog.objective, probe).finite_value();
      auto probe_cert = kkt_certify(prog, probe, schedule);
      if (fp > solved.value.finite_value()) {
        CHECK(std::holds_alternative<Refutation>(probe_cert));
        verify_certificate(prog, probe, probe_cert, schedule);
        ++refuted;
      } else {
        CHECK(!std::holds_alternative<Refutation>(probe_cert));
      }
    }
  }
  CHECK(certified >= 15);
  CHECK(refuted >= 3);
}

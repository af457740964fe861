#pragma once

#include "supdiff/suprema.hpp"

#include <optional>
#include <variant>

namespace supdiff {

/// inf f0(x) subject to f_t(x) <= 0 over the constraint family.
struct ConvexProgram {
  ConvexProgram(ConvexFunctionSpec objective_in, FunctionFamily constraints_in);
  ConvexFunctionSpec objective;
  FunctionFamily constraints;
  int dim() const { return constraints.dim(); }
};

/// Certificate that 0 lies in d f0(x) + N_dom f(x), with one witness
/// decomposition per scheduled eps.
struct NormalConeCase {
  struct Witness {
    Rational eps;
    Vec objective_part;  // g0 in d f0(x)
    Vec cone_part;       // k in the recession cone, g0 + k = 0
  };
  std::vector<Witness> witnesses;
};

/// Certificate that 0 = lambda g0 + s with lambda > 0, g0 in d f0(x) and s in
/// the stabilized supremum subdifferential.
struct MultiplierCase {
  Rational lambda;
  Vec objective_part;   // g0
  Vec constraint_part;  // s
};

/// Witness that x is not optimal: a feasible direction with strict decrease.
struct Refutation {
  Vec direction;
  Rational step;                // f0(x + step * direction) < f0(x), feasible
  Rational objective_decrease;  // f0(x) - f0(x + step * direction) > 0
};

using KKTCertificate = std::variant<NormalConeCase, MultiplierCase, Refutation>;

bool check_feasible(const ConvexProgram& prog, const Vec& x);

/// A point with sup_t f_t < 0 strictly inside dom f0, when one exists.
std::optional<Vec> slater_point(const ConvexProgram& prog);

/// Either objective or constraint supremum continuous somewhere in the
/// domain of the other (interior-point LP on polyhedral domains).
bool continuity_hypothesis(const ConvexProgram& prog);

/// Full optimality certification at a feasible point.  Throws HypothesisError
/// naming the failed hypothesis when Slater or continuity is violated.
KKTCertificate kkt_certify(const ConvexProgram& prog, const Vec& x,
                           const std::vector<Rational>& schedule);

/// Specialization to linear programs min <c, x> s.t. <a_t, x> <= b_t.
/// All constraint entries must be affine.
KKTCertificate silp_certify(const Vec& c, const FunctionFamily& constraints, const Vec& x,
                            const std::vector<Rational>& schedule);

struct SolveOutcome {
  ExtReal value;              // +inf infeasible, -inf unbounded
  std::optional<Vec> argmin;  // present when the minimum is attained
};

/// Independent oracle: the epigraph LP of the whole program, solved exactly.
SolveOutcome oracle_solve(const ConvexProgram& prog);

}  // namespace supdiff

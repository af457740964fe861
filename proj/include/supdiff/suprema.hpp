#pragma once

#include "supdiff/convex_function.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace supdiff {

/// Raised when a stated hypothesis of a formula fails (continuity, the
/// all-active condition, Slater, ...).  The CLI maps it to exit code 3.
struct HypothesisError : std::runtime_error {
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

/// Finite indexed family {f_t}; closure hints declare recession directions of
/// the index-to-subgradient map for truncated infinite families.
class FunctionFamily {
 public:
  FunctionFamily(int dim, std::map<std::string, ConvexFunctionSpec> entries,
                 std::vector<Vec> closure_hints = {});

  int dim() const { return dim_; }
  const std::map<std::string, ConvexFunctionSpec>& entries() const { return entries_; }
  const std::vector<Vec>& closure_hints() const { return closure_hints_; }

  /// Indices whose entries are proper (the set P); derived and cached.
  const std::set<std::string>& proper_indices() const { return proper_; }
  const std::set<std::string>& improper_indices() const { return improper_; }

  /// Cached epi f_t* for a proper entry; conversions amortize across queries.
  const Polyhedron& conjugate_epi(const std::string& index) const;

 private:
  int dim_;
  std::map<std::string, ConvexFunctionSpec> entries_;
  std::vector<Vec> closure_hints_;
  std::set<std::string> proper_;
  std::set<std::string> improper_;
  mutable std::map<std::string, Polyhedron> epi_cache_;
};

/// Weight choices for the non-eps-active terms.
struct WeightScheme {
  enum class Kind { kRho, kUnit, kCustom };
  Kind kind = Kind::kRho;
  std::map<std::string, Rational> custom;

  static WeightScheme rho() { return WeightScheme{Kind::kRho, {}}; }
  static WeightScheme unit() { return WeightScheme{Kind::kUnit, {}}; }
  static WeightScheme custom_weights(std::map<std::string, Rational> weights) {
    return WeightScheme{Kind::kCustom, std::move(weights)};
  }
  std::string str() const;
};

/// A computed set plus provenance.
struct SetResult {
  Polyhedron set = Polyhedron::empty_set(1);
  std::string formula;               // e.g. "Theo13b/mainfb"
  std::vector<Rational> eps_used;
  std::string scheme;
  bool stabilized = true;
  bool hint_used = false;
  enum class Certification { kNotChecked, kMatches, kMismatch, kSkippedHint };
  Certification certified = Certification::kNotChecked;
  std::string note;
};

struct CaratheodoryDecomposition {
  std::map<std::string, Rational> lambda;  // nonnegative, sums to one
  int support_size() const;
};

/// Decreasing schedule 1, 1/2, ..., 2^{-(depth-1)}.
std::vector<Rational> geometric_schedule(int depth);

ExtReal sup_value(const FunctionFamily& family, const Vec& x);

/// T_eps(x) = {t proper : f_t(x) >= f(x) - eps}; requires f(x) finite.
std::set<std::string> active_set(const FunctionFamily& family, const Vec& x, const Rational& eps);

/// Penalization weights: 1 on the active set, eps / max{2f(x)-2f_t(x)-eps, eps}
/// elsewhere; defined for proper indices, all values in (0, 1].
std::map<std::string, Rational> rho_weights(const FunctionFamily& family, const Vec& x,
                                            const Rational& eps);

/// Validated weights for the proper indices under the given scheme.
/// Throws std::invalid_argument naming any violated side condition.
std::map<std::string, Rational> resolve_weights(const FunctionFamily& family, const Vec& x,
                                                const Rational& eps, const WeightScheme& scheme);

/// The three component hulls: active A, penalized B, improper C.
struct ComponentSets {
  Polyhedron active_hull = Polyhedron::empty_set(1);     // cl co A_eps(x)
  Polyhedron penalized_hull = Polyhedron::empty_set(1);  // cl co B_{eps,alpha}(x)
  Polyhedron improper_hull = Polyhedron::empty_set(1);   // cl co C_eps(x)
  bool hint_used = false;
};
ComponentSets component_sets(const FunctionFamily& family, const Vec& x, const Rational& eps,
                             const WeightScheme& scheme);

/// Normal cone to dom(sup f_t) for an all-proper family at one eps.
SetResult normal_cone_dom_proper(const FunctionFamily& family, const Vec& x, const Rational& eps,
                                 const WeightScheme& scheme);

/// General version allowing improper entries (they contribute eps-normal sets
/// of their domains).
SetResult normal_cone_dom(const FunctionFamily& family, const Vec& x, const Rational& eps,
                          const WeightScheme& scheme);

/// Limit form: intersection over the schedule of cl co of the eps-scaled
/// weighted subdifferentials; {0} when the intersection is empty.
SetResult normal_cone_dom_mainfc(const FunctionFamily& family, const Vec& x,
                                 const std::vector<Rational>& schedule);

/// Parameter-free form with the floored functions max{f_t, f(x) - eps}.
SetResult normal_cone_dom_parameterfree(const FunctionFamily& family, const Vec& x,
                                        const Rational& eps);

/// Normal cone to an intersection of closed convex sets via eps-normal sets.
SetResult normal_cone_intersection(const std::vector<Polyhedron>& domains, const Vec& x,
                                   const Rational& eps);

/// The subdifferential of the supremum:
/// intersection over the schedule of cl co(A_eps + eps (B u C u {0})).
SetResult subdifferential_sup(const FunctionFamily& family, const Vec& x,
                              const std::vector<Rational>& schedule, const WeightScheme& scheme);

/// Reference cross-check: intersection of cl co(A_eps + N_dom(x)).
SetResult subdifferential_refdem16(const FunctionFamily& family, const Vec& x,
                                   const std::vector<Rational>& schedule);

/// All-active formula; requires f_t(x) = f(x) finite for every entry.
SetResult subdifferential_brondsted(const FunctionFamily& family, const Vec& x,
                                    const std::vector<Rational>& schedule);

/// Three-part normal-cone decomposition under the continuity hypothesis.
struct NormalConeSplit {
  Polyhedron part_active = Polyhedron::empty_set(1);
  Polyhedron part_penalized = Polyhedron::empty_set(1);
  Polyhedron part_improper = Polyhedron::empty_set(1);
  Polyhedron total = Polyhedron::empty_set(1);
  bool hint_used = false;
};
NormalConeSplit normal_cone_split(const FunctionFamily& family, const Vec& x, const Rational& eps,
                                  const WeightScheme& scheme);

/// Three-term subdifferential decomposition under the continuity hypothesis;
/// exact_active switches the active index set from T_eps(x) to T(x).
SetResult subdifferential_split(const FunctionFamily& family, const Vec& x,
                                const std::vector<Rational>& schedule, const WeightScheme& scheme,
                                bool exact_active);

/// Writes g in d_eps f(x) as an eps-subgradient of a convex combination of at
/// most n+1 entries.
CaratheodoryDecomposition caratheodory_decompose(const FunctionFamily& family, const Vec& x,
                                                 const Rational& eps, const Vec& g);

/// Independent oracle: dom f as an explicit intersection, normal cone from it.
Polyhedron oracle_normal_cone_dom(const FunctionFamily& family, const Vec& x);

/// Independent oracle: the exact subdifferential of the assembled supremum.
Polyhedron oracle_subdifferential(const FunctionFamily& family, const Vec& x);

/// The supremum as a single Restricted spec (pieces pooled, domains
/// intersected); requires at least one proper entry and a nonempty domain.
ConvexFunctionSpec assemble_sup(const FunctionFamily& family);

/// Weighted combination sum(lambda_t f_t) over the support of lambda,
/// materialized as a single spec (piecewise products over the support).
ConvexFunctionSpec combine_entries(const FunctionFamily& family,
                                   const std::map<std::string, Rational>& lambda);

/// dom(sup f_t): the intersection of all entry domains.
Polyhedron family_domain(const FunctionFamily& family);

/// Continuity-hypothesis check: int of the intersected domains is nonempty.
bool continuity_hypothesis_holds(const FunctionFamily& family);

}  // namespace supdiff

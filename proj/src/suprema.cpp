#include "supdiff/suprema.hpp"

#include "supdiff/lp.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace supdiff {

namespace {

std::string scheme_tag(const WeightScheme& scheme) { return scheme.str(); }

Rational finite_sup(const FunctionFamily& family, const Vec& x, const char* who) {
  const ExtReal fx = sup_value(family, x);
  if (!fx.is_finite()) {
    throw std::invalid_argument(std::string(who) + ": sup value is not finite at the point");
  }
  return fx.finite_value();
}

void check_point_dim(const FunctionFamily& family, const Vec& x) {
  if (static_cast<int>(x.size()) != family.dim()) {
    throw std::invalid_argument("dimension mismatch");
  }
}

// x in dom f  <=>  every entry is finite-or-(-inf) at x  <=>  sup < +inf.
void require_in_domain(const FunctionFamily& family, const Vec& x, const char* who) {
  check_point_dim(family, x);
  if (sup_value(family, x).is_plus_infinity()) {
    throw std::invalid_argument(std::string(who) + ": point lies outside dom f");
  }
}

// Exact active indices T(x) = {t proper : f_t(x) = f(x)}.
std::set<std::string> exact_active_set(const FunctionFamily& family, const Vec& x) {
  const Rational fx = finite_sup(family, x, "exact active set");
  std::set<std::string> out;
  for (const auto& index : family.proper_indices()) {
    const ExtReal v = evaluate(family.entries().at(index), x);
    if (v.is_finite() && v.finite_value() == fx) out.insert(index);
  }
  return out;
}

Polyhedron append_hint_rays(const Polyhedron& hull, const std::vector<Vec>& hints) {
  if (hints.empty() || hull.is_empty()) return hull;
  std::vector<Vec> rays = hull.rays();
  rays.insert(rays.end(), hints.begin(), hints.end());
  return Polyhedron::from_vrep(hull.dim(), hull.vertices(), std::move(rays));
}

// Shared worker for the A/B/C hulls; the active set is T_eps(x) or T(x).
ComponentSets build_components(const FunctionFamily& family, const Vec& x, const Rational& eps,
                               const WeightScheme& scheme, bool exact_active) {
  const int n = family.dim();
  ComponentSets out;
  out.active_hull = Polyhedron::empty_set(n);
  out.penalized_hull = Polyhedron::empty_set(n);
  out.improper_hull = Polyhedron::empty_set(n);

  if (!family.proper_indices().empty()) {
    const auto weights = resolve_weights(family, x, eps, scheme);
    const auto active =
        exact_active ? exact_active_set(family, x) : active_set(family, x, eps);
    std::vector<Polyhedron> active_terms;
    std::vector<Polyhedron> penalized_terms;
    for (const auto& index : family.proper_indices()) {
      const auto& entry = family.entries().at(index);
      if (active.count(index) != 0) {
        active_terms.push_back(
            eps_subdifferential_from_epi(family.conjugate_epi(index), entry, x, eps));
      } else {
        penalized_terms.push_back(eps_subdifferential_scaled_from_epi(
            family.conjugate_epi(index), entry, weights.at(index), x, eps));
      }
    }
    if (!active_terms.empty()) out.active_hull = hull_union(active_terms);
    if (!penalized_terms.empty()) out.penalized_hull = hull_union(penalized_terms);
  }

  std::vector<Polyhedron> improper_terms;
  for (const auto& index : family.improper_indices()) {
    improper_terms.push_back(eps_normal_set(domain(family.entries().at(index)), x, eps));
  }
  if (!improper_terms.empty()) out.improper_hull = hull_union(improper_terms);

  if (!family.closure_hints().empty() && !out.active_hull.is_empty()) {
    out.active_hull = append_hint_rays(out.active_hull, family.closure_hints());
    out.hint_used = true;
  }
  return out;
}

// Intersection of all entry domains (improper ones included).
Polyhedron intersected_domain(const FunctionFamily& family) {
  Polyhedron dom = Polyhedron::whole_space(family.dim());
  for (const auto& [index, entry] : family.entries()) {
    dom = intersect(dom, domain(entry));
  }
  return dom;
}

struct ScheduleFold {
  std::optional<Polyhedron> running;
  bool stabilized = false;

  void feed(const Polyhedron& next) {
    if (!running.has_value()) {
      running = next;
      return;
    }
    const Polyhedron refined = intersect(*running, next);
    stabilized = set_equal(refined, *running);
    running = refined;
  }
};

// Exact eps -> 0 data of a schedule formula.  Every scheduled set is a
// polyhedron whose vertices trace polynomial paths in eps with eventually
// constant combinatorics, so the infinite intersection over eps > 0 is the
// eps = 0 evaluation: the exact-active subdifferential hull plus the domain
// normal cones of the penalized and improper parts (which enter only through
// their recession directions).
struct TailData {
  std::set<std::string> exact_active;
  Polyhedron active_hull = Polyhedron::empty_set(1);   // hull of d f_t(x), t in T(x)
  Polyhedron penalized_cone = Polyhedron::empty_set(1);  // hull of N_dom f_t, proper t off T(x)
  Polyhedron improper_cone = Polyhedron::empty_set(1);   // hull of N_dom f_t, improper t
  bool hint_used = false;
};

TailData exact_tail(const FunctionFamily& family, const Vec& x) {
  const int n = family.dim();
  TailData out;
  out.exact_active = exact_active_set(family, x);

  std::vector<Polyhedron> active_terms;
  std::vector<Polyhedron> penalized_terms;
  for (const auto& index : family.proper_indices()) {
    if (out.exact_active.count(index) != 0) {
      active_terms.push_back(eps_subdifferential_from_epi(
          family.conjugate_epi(index), family.entries().at(index), x, Rational(0)));
    } else {
      penalized_terms.push_back(
          eps_normal_set(domain(family.entries().at(index)), x, Rational(0)));
    }
  }
  std::vector<Polyhedron> improper_terms;
  for (const auto& index : family.improper_indices()) {
    improper_terms.push_back(eps_normal_set(domain(family.entries().at(index)), x, Rational(0)));
  }

  out.active_hull = active_terms.empty() ? Polyhedron::empty_set(n) : hull_union(active_terms);
  out.penalized_cone =
      penalized_terms.empty() ? Polyhedron::empty_set(n) : hull_union(penalized_terms);
  out.improper_cone =
      improper_terms.empty() ? Polyhedron::empty_set(n) : hull_union(improper_terms);
  if (!family.closure_hints().empty() && !out.active_hull.is_empty()) {
    out.active_hull = append_hint_rays(out.active_hull, family.closure_hints());
    out.hint_used = true;
  }
  return out;
}

// The eps = 0 evaluation is valid once the scheduled active sets have settled
// on T(x); the recession parts are eps-invariant cones.
bool tail_applies(const FunctionFamily& family, const Vec& x,
                  const std::vector<Rational>& schedule, const TailData& tail) {
  const std::size_t k = schedule.size();
  if (k < 2) return false;
  return active_set(family, x, schedule[k - 1]) == tail.exact_active &&
         active_set(family, x, schedule[k - 2]) == tail.exact_active;
}

Polyhedron cone_sum_with_origin(const Polyhedron& a, const Polyhedron& b, int n) {
  const Polyhedron origin = Polyhedron::singleton(zero_vec(n));
  Polyhedron out = origin;
  if (!a.is_empty()) out = minkowski_sum(out, a);
  if (!b.is_empty()) out = minkowski_sum(out, b);
  return out;
}

void check_schedule(const std::vector<Rational>& schedule) {
  if (schedule.empty()) throw std::invalid_argument("empty epsilon schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] <= 0) throw std::invalid_argument("schedule entries must be positive");
    if (i > 0 && schedule[i] >= schedule[i - 1]) {
      throw std::invalid_argument("schedule must be strictly decreasing");
    }
  }
}

std::string eps_to_note(const Rational& eps) { return "eps=" + to_string(eps); }

}  // namespace

FunctionFamily::FunctionFamily(int dim, std::map<std::string, ConvexFunctionSpec> entries,
                               std::vector<Vec> closure_hints)
    : dim_(dim), entries_(std::move(entries)), closure_hints_(std::move(closure_hints)) {
  if (entries_.empty()) throw std::invalid_argument("function family must be nonempty");
  for (const auto& [index, entry] : entries_) {
    if (entry.dim() != dim_) {
      throw std::invalid_argument("family entry '" + index + "' has wrong dimension");
    }
    (is_proper(entry) ? proper_ : improper_).insert(index);
  }
  for (const auto& hint : closure_hints_) {
    if (static_cast<int>(hint.size()) != dim_ || is_zero(hint)) {
      throw std::invalid_argument("closure hints must be nonzero vectors of the family dimension");
    }
  }
}

const Polyhedron& FunctionFamily::conjugate_epi(const std::string& index) const {
  auto it = epi_cache_.find(index);
  if (it == epi_cache_.end()) {
    it = epi_cache_.emplace(index, conjugate_epigraph(entries_.at(index))).first;
  }
  return it->second;
}

std::string WeightScheme::str() const {
  switch (kind) {
    case Kind::kRho:
      return "rho";
    case Kind::kUnit:
      return "unit";
    case Kind::kCustom:
      return "custom";
  }
  return "?";
}

int CaratheodoryDecomposition::support_size() const {
  int count = 0;
  for (const auto& [index, value] : lambda) {
    if (value != 0) ++count;
  }
  return count;
}

std::vector<Rational> geometric_schedule(int depth) {
  if (depth < 1) throw std::invalid_argument("schedule depth must be positive");
  std::vector<Rational> out;
  Rational eps(1);
  for (int k = 0; k < depth; ++k) {
    out.push_back(eps);
    eps /= 2;
  }
  return out;
}

ExtReal sup_value(const FunctionFamily& family, const Vec& x) {
  check_point_dim(family, x);
  ExtReal best = ExtReal::minus_infinity();
  for (const auto& [index, entry] : family.entries()) {
    const ExtReal v = evaluate(entry, x);
    if (best < v) best = v;
  }
  return best;
}

std::set<std::string> active_set(const FunctionFamily& family, const Vec& x,
                                 const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("active set requires eps > 0");
  check_point_dim(family, x);
  const ExtReal fx = sup_value(family, x);
  if (!fx.is_finite()) throw std::invalid_argument("active set undefined: sup value not finite");
  std::set<std::string> out;
  for (const auto& index : family.proper_indices()) {
    const ExtReal v = evaluate(family.entries().at(index), x);
    if (v.is_finite() && v.finite_value() >= fx.finite_value() - eps) out.insert(index);
  }
  return out;
}

std::map<std::string, Rational> rho_weights(const FunctionFamily& family, const Vec& x,
                                            const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("weights require eps > 0");
  check_point_dim(family, x);
  const ExtReal fx = sup_value(family, x);
  if (!fx.is_finite()) throw std::invalid_argument("active set undefined: sup value not finite");
  std::map<std::string, Rational> out;
  for (const auto& index : family.proper_indices()) {
    const ExtReal v = evaluate(family.entries().at(index), x);
    if (!v.is_finite()) {
      throw std::logic_error("proper entry with nonfinite value inside dom f");
    }
    // eps / max{2 f(x) - 2 f_t(x) - eps, eps}: equals 1 exactly on T_eps(x).
    const Rational gap = 2 * fx.finite_value() - 2 * v.finite_value() - eps;
    out.emplace(index, eps / std::max(gap, eps));
  }
  return out;
}

std::map<std::string, Rational> resolve_weights(const FunctionFamily& family, const Vec& x,
                                                const Rational& eps, const WeightScheme& scheme) {
  const auto rho = rho_weights(family, x, eps);
  std::map<std::string, Rational> out;
  switch (scheme.kind) {
    case WeightScheme::Kind::kRho:
      out = rho;
      break;
    case WeightScheme::Kind::kUnit:
      for (const auto& [index, value] : rho) out.emplace(index, Rational(1));
      break;
    case WeightScheme::Kind::kCustom: {
      for (const auto& [index, bound] : rho) {
        const auto it = scheme.custom.find(index);
        if (it == scheme.custom.end()) {
          throw std::invalid_argument("weight scheme invalid: missing weight for index '" +
                                      index + "'");
        }
        if (it->second <= 0) {
          throw std::invalid_argument("weight scheme invalid: weight for index '" + index +
                                      "' is not positive");
        }
        if (it->second < bound) {
          throw std::invalid_argument("weight scheme invalid: weight for index '" + index +
                                      "' is below rho = " + to_string(bound));
        }
        out.emplace(index, it->second);
      }
      break;
    }
  }
  // Side condition inf_t alpha_t f_t(x) > -inf: a finite minimum here, kept
  // explicit so nonfinite data fails loudly.
  for (const auto& [index, alpha] : out) {
    const ExtReal v = evaluate(family.entries().at(index), x);
    if (v.is_minus_infinity()) {
      throw std::invalid_argument("weight scheme invalid: alpha_t f_t(x) unbounded below");
    }
  }
  return out;
}

ComponentSets component_sets(const FunctionFamily& family, const Vec& x, const Rational& eps,
                             const WeightScheme& scheme) {
  return build_components(family, x, eps, scheme, /*exact_active=*/false);
}

SetResult normal_cone_dom_proper(const FunctionFamily& family, const Vec& x, const Rational& eps,
                                 const WeightScheme& scheme) {
  if (!family.improper_indices().empty()) {
    throw std::invalid_argument("family has improper entries: use normal_cone_dom");
  }
  require_in_domain(family, x, "normal_cone_dom_proper");
  finite_sup(family, x, "normal_cone_dom_proper");
  const auto weights = resolve_weights(family, x, eps, scheme);

  std::vector<Polyhedron> terms;
  for (const auto& index : family.proper_indices()) {
    terms.push_back(eps_subdifferential_scaled_from_epi(family.conjugate_epi(index),
                                                        family.entries().at(index),
                                                        weights.at(index), x, eps));
  }
  Polyhedron hull = hull_union(terms);
  const bool hinted = !family.closure_hints().empty();
  if (hinted) hull = append_hint_rays(hull, family.closure_hints());

  SetResult out;
  out.set = recession_cone(hull);
  out.formula = "Theo13b/mainfb";
  out.eps_used = {eps};
  out.scheme = scheme_tag(scheme);
  out.hint_used = hinted;
  return out;
}

SetResult normal_cone_dom(const FunctionFamily& family, const Vec& x, const Rational& eps,
                          const WeightScheme& scheme) {
  require_in_domain(family, x, "normal_cone_dom");
  const int n = family.dim();

  std::vector<Polyhedron> terms;
  if (!family.proper_indices().empty()) {
    const auto weights = resolve_weights(family, x, eps, scheme);
    for (const auto& index : family.proper_indices()) {
      terms.push_back(eps_subdifferential_scaled_from_epi(family.conjugate_epi(index),
                                                          family.entries().at(index),
                                                          weights.at(index), x, eps));
    }
  }
  for (const auto& index : family.improper_indices()) {
    terms.push_back(eps_normal_set(domain(family.entries().at(index)), x, eps));
  }

  Polyhedron hull = terms.empty() ? Polyhedron::empty_set(n) : hull_union(terms);
  const bool hinted = !family.closure_hints().empty() && !hull.is_empty();
  if (hinted) hull = append_hint_rays(hull, family.closure_hints());

  SetResult out;
  out.set = recession_cone(hull);
  out.formula = "Theo13";
  out.eps_used = {eps};
  out.scheme = scheme_tag(scheme);
  out.hint_used = hinted;
  return out;
}

SetResult normal_cone_dom_mainfc(const FunctionFamily& family, const Vec& x,
                                 const std::vector<Rational>& schedule) {
  if (!family.improper_indices().empty()) {
    throw std::invalid_argument("family has improper entries: use normal_cone_dom");
  }
  require_in_domain(family, x, "normal_cone_dom_mainfc");
  check_schedule(schedule);
  finite_sup(family, x, "normal_cone_dom_mainfc");

  ScheduleFold fold;
  for (const auto& eps : schedule) {
    const auto weights = rho_weights(family, x, eps);
    std::vector<Polyhedron> terms;
    for (const auto& index : family.proper_indices()) {
      terms.push_back(eps_subdifferential_scaled_from_epi(family.conjugate_epi(index),
                                                          family.entries().at(index),
                                                          eps * weights.at(index), x, eps));
    }
    Polyhedron hull = hull_union(terms);
    if (!family.closure_hints().empty()) hull = append_hint_rays(hull, family.closure_hints());
    fold.feed(hull);
  }

  // Every scheduled vertex path shrinks to the origin; what survives the
  // intersection are the eps-invariant recession directions, i.e. the hull
  // of the domain normal cones.
  std::vector<Polyhedron> cone_terms;
  for (const auto& index : family.proper_indices()) {
    cone_terms.push_back(eps_normal_set(domain(family.entries().at(index)), x, Rational(0)));
  }
  Polyhedron limit = hull_union(cone_terms);
  if (!family.closure_hints().empty()) limit = append_hint_rays(limit, family.closure_hints());
  limit = intersect(limit, *fold.running);

  SetResult out;
  out.formula = "Theo13b/mainfc";
  out.eps_used = schedule;
  out.scheme = "rho";
  out.hint_used = !family.closure_hints().empty();
  out.stabilized = true;
  if (limit.is_empty()) {
    out.set = Polyhedron::singleton(zero_vec(family.dim()));
    out.note = "empty-intersection branch: N = {0}";
  } else {
    out.set = limit;
  }
  return out;
}

SetResult normal_cone_dom_parameterfree(const FunctionFamily& family, const Vec& x,
                                        const Rational& eps) {
  require_in_domain(family, x, "normal_cone_dom_parameterfree");
  const int n = family.dim();
  std::vector<Polyhedron> terms;

  if (!family.proper_indices().empty()) {
    const Rational fx = finite_sup(family, x, "normal_cone_dom_parameterfree");
    const Rational floor = fx - eps;
    const auto active = active_set(family, x, eps);
    for (const auto& index : family.proper_indices()) {
      const auto& entry = family.entries().at(index);
      if (active.count(index) != 0) {
        terms.push_back(eps_subdifferential_from_epi(family.conjugate_epi(index), entry, x, eps));
      } else {
        // The floored function max{f_t, f(x) - eps} replaces the weights.
        terms.push_back(eps_subdifferential(max_with_floor(entry, floor), x, eps));
      }
    }
  }
  for (const auto& index : family.improper_indices()) {
    terms.push_back(eps_normal_set(domain(family.entries().at(index)), x, eps));
  }

  Polyhedron hull = terms.empty() ? Polyhedron::empty_set(n) : hull_union(terms);
  const bool hinted = !family.closure_hints().empty() && !hull.is_empty();
  if (hinted) hull = append_hint_rays(hull, family.closure_hints());

  SetResult out;
  out.set = recession_cone(hull);
  out.formula = "corThm13a";
  out.eps_used = {eps};
  out.scheme = "parameter-free";
  out.hint_used = hinted;
  return out;
}

SetResult normal_cone_intersection(const std::vector<Polyhedron>& domains, const Vec& x,
                                   const Rational& eps) {
  if (domains.empty()) throw std::invalid_argument("normal_cone_intersection needs sets");
  const int n = domains.front().dim();
  std::vector<Polyhedron> terms;
  for (const auto& c : domains) {
    if (c.dim() != n) throw std::invalid_argument("dimension mismatch");
    if (!c.contains(x)) {
      throw std::invalid_argument("normal_cone_intersection: point outside a member set");
    }
    terms.push_back(eps_normal_set(c, x, eps));
  }
  SetResult out;
  out.set = recession_cone(hull_union(terms));
  out.formula = "ew";
  out.eps_used = {eps};
  out.scheme = "none";
  return out;
}

SetResult subdifferential_sup(const FunctionFamily& family, const Vec& x,
                              const std::vector<Rational>& schedule,
                              const WeightScheme& scheme) {
  check_point_dim(family, x);
  check_schedule(schedule);
  const int n = family.dim();

  SetResult out;
  out.formula = "thmsub/FGSubSup";
  out.eps_used = schedule;
  out.scheme = scheme_tag(scheme);

  const ExtReal fx = sup_value(family, x);
  if (!fx.is_finite()) {
    out.set = Polyhedron::empty_set(n);
    out.note = "sup value not finite: subdifferential is empty";
    return out;
  }

  ScheduleFold fold;
  bool hinted = false;
  for (const auto& eps : schedule) {
    const ComponentSets cs = build_components(family, x, eps, scheme, /*exact_active=*/false);
    hinted = hinted || cs.hint_used;
    const Polyhedron penalty = hull_union(
        {cs.penalized_hull, cs.improper_hull, Polyhedron::singleton(zero_vec(n))});
    fold.feed(minkowski_sum(cs.active_hull, scale(penalty, eps)));
  }

  const TailData tail = exact_tail(family, x);
  if (tail_applies(family, x, schedule, tail)) {
    const Polyhedron limit = minkowski_sum(
        tail.active_hull, cone_sum_with_origin(tail.penalized_cone, tail.improper_cone, n));
    if (!is_subset(limit, *fold.running)) {
      throw std::logic_error("subdifferential tail escapes the scheduled intersection");
    }
    out.set = limit;
    out.stabilized = true;
    out.hint_used = hinted || tail.hint_used;
    return out;
  }
  out.set = *fold.running;
  out.stabilized = fold.stabilized;
  out.hint_used = hinted;
  out.note = "active set not settled within the schedule";
  return out;
}

SetResult subdifferential_refdem16(const FunctionFamily& family, const Vec& x,
                                   const std::vector<Rational>& schedule) {
  check_point_dim(family, x);
  check_schedule(schedule);
  const int n = family.dim();

  SetResult out;
  out.formula = "refdem16";
  out.eps_used = schedule;
  out.scheme = "rho";

  const ExtReal fx = sup_value(family, x);
  if (!fx.is_finite()) {
    out.set = Polyhedron::empty_set(n);
    out.note = "sup value not finite: subdifferential is empty";
    return out;
  }

  const SetResult cone = normal_cone_dom(family, x, schedule.front(), WeightScheme::rho());
  ScheduleFold fold;
  bool hinted = cone.hint_used;
  for (const auto& eps : schedule) {
    const ComponentSets cs =
        build_components(family, x, eps, WeightScheme::rho(), /*exact_active=*/false);
    hinted = hinted || cs.hint_used;
    fold.feed(minkowski_sum(cs.active_hull, cone.set));
  }

  const TailData tail = exact_tail(family, x);
  if (tail_applies(family, x, schedule, tail)) {
    const Polyhedron limit = minkowski_sum(tail.active_hull, cone.set);
    if (!is_subset(limit, *fold.running)) {
      throw std::logic_error("subdifferential tail escapes the scheduled intersection");
    }
    out.set = limit;
    out.stabilized = true;
    out.hint_used = hinted || tail.hint_used;
    return out;
  }
  out.set = *fold.running;
  out.stabilized = fold.stabilized;
  out.hint_used = hinted;
  out.note = "active set not settled within the schedule";
  return out;
}

SetResult subdifferential_brondsted(const FunctionFamily& family, const Vec& x,
                                    const std::vector<Rational>& schedule) {
  check_point_dim(family, x);
  check_schedule(schedule);
  const ExtReal fx = sup_value(family, x);
  if (!fx.is_finite()) throw HypothesisError("Brondsted hypothesis violated: f(x) not finite");
  for (const auto& [index, entry] : family.entries()) {
    if (evaluate(entry, x) != fx) {
      throw HypothesisError("Brondsted hypothesis violated: entry '" + index +
                            "' is not active at the point");
    }
  }

  ScheduleFold fold;
  for (const auto& eps : schedule) {
    std::vector<Polyhedron> terms;
    for (const auto& index : family.proper_indices()) {
      terms.push_back(eps_subdifferential_from_epi(family.conjugate_epi(index),
                                                   family.entries().at(index), x, eps));
    }
    Polyhedron hull = hull_union(terms);
    if (!family.closure_hints().empty()) hull = append_hint_rays(hull, family.closure_hints());
    fold.feed(hull);
  }

  // All entries are exactly active, so the nested sets shrink onto their
  // eps = 0 evaluation.
  std::vector<Polyhedron> exact_terms;
  for (const auto& index : family.proper_indices()) {
    exact_terms.push_back(eps_subdifferential_from_epi(family.conjugate_epi(index),
                                                       family.entries().at(index), x,
                                                       Rational(0)));
  }
  Polyhedron limit = hull_union(exact_terms);
  if (!family.closure_hints().empty()) limit = append_hint_rays(limit, family.closure_hints());
  if (!is_subset(limit, *fold.running)) {
    throw std::logic_error("subdifferential tail escapes the scheduled intersection");
  }

  SetResult out;
  out.set = limit;
  out.formula = "bronds/t2";
  out.eps_used = schedule;
  out.scheme = "unit";
  out.stabilized = true;
  out.hint_used = !family.closure_hints().empty();
  return out;
}

Polyhedron family_domain(const FunctionFamily& family) { return intersected_domain(family); }

bool continuity_hypothesis_holds(const FunctionFamily& family) {
  return has_interior(intersected_domain(family));
}

NormalConeSplit normal_cone_split(const FunctionFamily& family, const Vec& x, const Rational& eps,
                                  const WeightScheme& scheme) {
  require_in_domain(family, x, "normal_cone_split");
  if (!continuity_hypothesis_holds(family)) {
    throw HypothesisError("continuity hypothesis not verified: int of the domain is empty");
  }
  finite_sup(family, x, "normal_cone_split");
  const ComponentSets cs = build_components(family, x, eps, scheme, /*exact_active=*/false);
  NormalConeSplit out;
  out.part_active = recession_cone(cs.active_hull);
  out.part_penalized = recession_cone(cs.penalized_hull);
  out.part_improper = recession_cone(cs.improper_hull);
  out.total = minkowski_sum(out.part_active, minkowski_sum(out.part_penalized, out.part_improper));
  out.hint_used = cs.hint_used;
  return out;
}

SetResult subdifferential_split(const FunctionFamily& family, const Vec& x,
                                const std::vector<Rational>& schedule, const WeightScheme& scheme,
                                bool exact_active) {
  check_point_dim(family, x);
  check_schedule(schedule);
  if (!continuity_hypothesis_holds(family)) {
    throw HypothesisError("continuity hypothesis not verified: int of the domain is empty");
  }
  const int n = family.dim();
  SetResult out;
  out.formula = exact_active ? "olab" : "ola";
  out.eps_used = schedule;
  out.scheme = scheme_tag(scheme);

  const ExtReal fx = sup_value(family, x);
  if (!fx.is_finite()) {
    out.set = Polyhedron::empty_set(n);
    out.note = "sup value not finite: subdifferential is empty";
    return out;
  }

  ScheduleFold active_fold;
  ScheduleFold improper_fold;
  std::optional<Polyhedron> cone_small;   // [cl co B]_inf at the smallest eps
  std::optional<Polyhedron> cone_second;  // ... and at the second smallest
  bool hinted = false;
  for (const auto& eps : schedule) {
    const ComponentSets cs = build_components(family, x, eps, scheme, exact_active);
    hinted = hinted || cs.hint_used;
    active_fold.feed(cs.active_hull);
    improper_fold.feed(cs.improper_hull);
    cone_second = std::move(cone_small);
    cone_small = recession_cone(cs.penalized_hull);
  }

  const TailData tail = exact_tail(family, x);
  const bool settled = tail_applies(family, x, schedule, tail);

  // (i) the nested active intersection shrinks onto its eps = 0 evaluation;
  // (ii) the nested-closure middle term is the union of nondecreasing cones,
  //      i.e. the domain-normal cones of the proper entries off T(x);
  // (iii) the improper term likewise evaluates at eps = 0, joined with {0}.
  Polyhedron first = settled ? tail.active_hull : *active_fold.running;
  Polyhedron middle =
      settled ? tail.penalized_cone
              : (cone_second.has_value() ? hull_union(*cone_small, *cone_second) : *cone_small);
  if (middle.is_empty()) middle = Polyhedron::singleton(zero_vec(n));
  const Polyhedron improper_term = hull_union(
      settled ? tail.improper_cone : *improper_fold.running, Polyhedron::singleton(zero_vec(n)));

  out.set = minkowski_sum(first, minkowski_sum(middle, improper_term));
  out.stabilized = settled;
  out.hint_used = hinted || (settled && tail.hint_used);
  if (!settled) out.note = "active set not settled within the schedule";
  return out;
}

ConvexFunctionSpec assemble_sup(const FunctionFamily& family) {
  if (family.proper_indices().empty()) {
    throw std::invalid_argument("assemble_sup needs at least one proper entry");
  }
  std::vector<AffinePiece> pieces;
  bool free_domain = true;
  for (const auto& index : family.proper_indices()) {
    const auto& entry = family.entries().at(index);
    const auto entry_pieces = effective_pieces(entry);
    pieces.insert(pieces.end(), entry_pieces.begin(), entry_pieces.end());
    if (entry.get_if<Restricted>() != nullptr || entry.get_if<Indicator>() != nullptr) {
      free_domain = false;
    }
  }
  if (free_domain && family.improper_indices().empty()) {
    return ConvexFunctionSpec::max_affine(std::move(pieces));
  }
  Polyhedron dom = intersected_domain(family);
  if (dom.is_empty()) throw std::invalid_argument("assemble_sup: empty domain");
  return ConvexFunctionSpec::restricted(std::move(pieces), std::move(dom));
}

ConvexFunctionSpec combine_entries(const FunctionFamily& family,
                                   const std::map<std::string, Rational>& lambda) {
  std::vector<std::string> support;
  for (const auto& [index, weight] : lambda) {
    if (weight < 0) throw std::invalid_argument("combination weights must be nonnegative");
    if (weight == 0) continue;
    if (family.entries().find(index) == family.entries().end()) {
      throw std::invalid_argument("combination weight for unknown index '" + index + "'");
    }
    if (!is_proper(family.entries().at(index))) {
      throw std::invalid_argument("combination over improper entries is undefined");
    }
    support.push_back(index);
  }
  if (support.empty()) throw std::invalid_argument("combination with empty support");

  // sum(lambda_t (g_t + I_{D_t})) = max over piece choices + indicator of the
  // intersected support domains.
  std::vector<AffinePiece> combined{AffinePiece{zero_vec(family.dim()), Rational(0)}};
  bool free_domain = true;
  Polyhedron dom = Polyhedron::whole_space(family.dim());
  for (const auto& index : support) {
    const auto& entry = family.entries().at(index);
    const Rational& w = lambda.at(index);
    std::vector<AffinePiece> next;
    for (const auto& base : combined) {
      for (const auto& p : effective_pieces(entry)) {
        next.push_back(AffinePiece{add(base.gradient, scaled(p.gradient, w)),
                                   base.offset + w * p.offset});
      }
    }
    combined = std::move(next);
    if (entry.get_if<Restricted>() != nullptr || entry.get_if<Indicator>() != nullptr) {
      free_domain = false;
      dom = intersect(dom, domain(entry));
    }
  }
  if (free_domain) return ConvexFunctionSpec::max_affine(std::move(combined));
  if (dom.is_empty()) throw std::invalid_argument("combination has empty domain");
  return ConvexFunctionSpec::restricted(std::move(combined), std::move(dom));
}

CaratheodoryDecomposition caratheodory_decompose(const FunctionFamily& family, const Vec& x,
                                                 const Rational& eps, const Vec& g) {
  check_point_dim(family, x);
  if (!family.improper_indices().empty()) {
    throw std::invalid_argument("caratheodory_decompose needs an all-proper family");
  }
  const Rational fx = finite_sup(family, x, "caratheodory_decompose");
  const ConvexFunctionSpec assembled = assemble_sup(family);
  if (!subgradient_membership(assembled, x, eps, g)) {
    throw std::invalid_argument("not an eps-subgradient");
  }

  const int n = family.dim();
  std::vector<std::string> indices(family.proper_indices().begin(),
                                   family.proper_indices().end());
  const int m = static_cast<int>(indices.size());
  const int bound = std::min(m, n + 1);

  // Entry data reused across candidate supports.
  std::map<std::string, Rational> value_at_x;
  for (const auto& index : indices) {
    value_at_x.emplace(index, evaluate(family.entries().at(index), x).finite_value());
  }

  // Feasibility LP on one support S:
  //   lambda in simplex(S), sum lambda_i f_i(x) >= f(x) - eps,
  //   g = sum_i (sum_k eta_ik p_ik + sum_l nu_il d_il),  sum_k eta_ik = lambda_i,
  //   sum of conjugate heights + sum lambda_i f_i(x) <= eps + <g, x>,
  // where (p, q) / (d, e) run over vertices / rays of epi f_i*.
  auto try_support = [&](const std::vector<std::string>& support)
      -> std::optional<CaratheodoryDecomposition> {
    struct Block {
      const std::vector<Vec>* vertices;
      const std::vector<Vec>* rays;
      int eta_at;
      int nu_at;
    };
    const int k = static_cast<int>(support.size());
    int columns = k;
    std::vector<Block> blocks(k);
    for (int i = 0; i < k; ++i) {
      const Polyhedron& epi = family.conjugate_epi(support[i]);
      blocks[i].vertices = &epi.vertices();
      blocks[i].rays = &epi.rays();
      blocks[i].eta_at = columns;
      columns += static_cast<int>(blocks[i].vertices->size());
      blocks[i].nu_at = columns;
      columns += static_cast<int>(blocks[i].rays->size());
    }

    std::vector<lp::Constraint> constraints;
    // simplex over lambda
    {
      Vec row = zero_vec(columns);
      for (int i = 0; i < k; ++i) row[i] = 1;
      constraints.push_back(lp::equal(std::move(row), Rational(1)));
    }
    // sum lambda_i f_i(x) >= f(x) - eps
    {
      Vec row = zero_vec(columns);
      for (int i = 0; i < k; ++i) row[i] = -value_at_x.at(support[i]);
      constraints.push_back(lp::less_equal(std::move(row), eps - fx));
    }
    // eta block sums tie to lambda
    for (int i = 0; i < k; ++i) {
      Vec row = zero_vec(columns);
      row[i] = -1;
      for (std::size_t kk = 0; kk < blocks[i].vertices->size(); ++kk) {
        row[blocks[i].eta_at + static_cast<int>(kk)] = 1;
      }
      constraints.push_back(lp::equal(std::move(row), Rational(0)));
    }
    // gradient balance per coordinate
    for (int c = 0; c < n; ++c) {
      Vec row = zero_vec(columns);
      for (int i = 0; i < k; ++i) {
        for (std::size_t kk = 0; kk < blocks[i].vertices->size(); ++kk) {
          row[blocks[i].eta_at + static_cast<int>(kk)] = (*blocks[i].vertices)[kk][c];
        }
        for (std::size_t ll = 0; ll < blocks[i].rays->size(); ++ll) {
          row[blocks[i].nu_at + static_cast<int>(ll)] = (*blocks[i].rays)[ll][c];
        }
      }
      constraints.push_back(lp::equal(std::move(row), g[c]));
    }
    // conjugate height bound
    {
      Vec row = zero_vec(columns);
      for (int i = 0; i < k; ++i) {
        row[i] = value_at_x.at(support[i]);
        for (std::size_t kk = 0; kk < blocks[i].vertices->size(); ++kk) {
          row[blocks[i].eta_at + static_cast<int>(kk)] = (*blocks[i].vertices)[kk][n];
        }
        for (std::size_t ll = 0; ll < blocks[i].rays->size(); ++ll) {
          row[blocks[i].nu_at + static_cast<int>(ll)] = (*blocks[i].rays)[ll][n];
        }
      }
      constraints.push_back(lp::less_equal(std::move(row), eps + dot(g, x)));
    }
    // nonnegativity of every variable
    for (int j = 0; j < columns; ++j) {
      Vec row = zero_vec(columns);
      row[j] = -1;
      constraints.push_back(lp::less_equal(std::move(row), Rational(0)));
    }

    // Demand lambda_i >= tau > 0 on the whole support: a zero weight with
    // nonzero ray variables would test the wrong function (its domain
    // indicator would leak in), and genuine zero weights belong to a smaller
    // support that the enumeration has already tried.
    const int tau = columns;
    std::vector<lp::Constraint> widened;
    widened.reserve(constraints.size() + static_cast<std::size_t>(k));
    for (auto& c : constraints) {
      Vec row = std::move(c.coeffs);
      row.push_back(Rational(0));
      widened.push_back(lp::Constraint{std::move(row), c.rel, std::move(c.rhs)});
    }
    for (int i = 0; i < k; ++i) {
      Vec row = zero_vec(columns + 1);
      row[i] = -1;
      row[tau] = 1;
      widened.push_back(lp::less_equal(std::move(row), Rational(0)));
    }
    Vec objective = zero_vec(columns + 1);
    objective[tau] = 1;
    const lp::Solution sol = lp::maximize(objective, widened);
    if (sol.status != lp::Status::kOptimal || sol.value <= 0) return std::nullopt;
    CaratheodoryDecomposition out;
    for (const auto& index : indices) out.lambda[index] = Rational(0);
    for (int i = 0; i < k; ++i) out.lambda[support[i]] = sol.point[i];
    return out;
  };

  // Supports in increasing size, lexicographic within a size.
  std::vector<int> pick;
  std::optional<CaratheodoryDecomposition> found;
  auto search = [&](auto&& self, int start, int remaining) -> void {
    if (found.has_value()) return;
    if (!pick.empty()) {
      std::vector<std::string> support;
      for (int i : pick) support.push_back(indices[static_cast<std::size_t>(i)]);
      if (static_cast<int>(support.size()) == remaining) {
        found = try_support(support);
        if (found.has_value()) return;
      }
    }
    if (static_cast<int>(pick.size()) >= remaining) return;
    for (int i = start; i < m; ++i) {
      pick.push_back(i);
      self(self, i + 1, remaining);
      pick.pop_back();
      if (found.has_value()) return;
    }
  };
  for (int size = 1; size <= bound && !found.has_value(); ++size) {
    pick.clear();
    search(search, 0, size);
  }
  if (!found.has_value()) {
    throw std::logic_error("caratheodory decomposition not found despite membership");
  }

  // Re-verify both postconditions exactly.
  Rational combo_value(0);
  for (const auto& [index, weight] : found->lambda) {
    if (weight != 0) combo_value += weight * value_at_x.at(index);
  }
  if (combo_value < fx - eps) {
    throw std::logic_error("caratheodory decomposition violates the value bound");
  }
  if (!subgradient_membership(combine_entries(family, found->lambda), x, eps, g)) {
    throw std::logic_error("caratheodory decomposition fails the membership recheck");
  }
  if (found->support_size() > n + 1) {
    throw std::logic_error("caratheodory decomposition support too large");
  }
  return *found;
}

Polyhedron oracle_normal_cone_dom(const FunctionFamily& family, const Vec& x) {
  check_point_dim(family, x);
  const Polyhedron dom = intersected_domain(family);
  if (!dom.contains(x)) {
    throw std::invalid_argument("oracle_normal_cone_dom: point outside dom f");
  }
  return eps_normal_set(dom, x, Rational(0));
}

Polyhedron oracle_subdifferential(const FunctionFamily& family, const Vec& x) {
  check_point_dim(family, x);
  const ExtReal fx = sup_value(family, x);
  if (!fx.is_finite()) return Polyhedron::empty_set(family.dim());
  return eps_subdifferential(assemble_sup(family), x, Rational(0));
}

}  // namespace supdiff

#include <doctest.h>

#include "supdiff/suprema.hpp"

#include <random>

using namespace supdiff;

namespace {

Rational Q(long n, long d = 1) { return make_rational(Int(n), Int(d)); }

Polyhedron interval(const Rational& lo, const Rational& hi) {
  return Polyhedron::from_vrep(1, {{lo}, {hi}}, {});
}

Polyhedron half_line_leq(const Rational& bound) {
  return Polyhedron::from_hrep(1, {HalfSpace{{Q(1)}, bound}});
}

Polyhedron half_line_geq(const Rational& bound) {
  return Polyhedron::from_hrep(1, {HalfSpace{{Q(-1)}, -bound}});
}

// f_t(x) = t x - t truncated to t in {0, ..., top}.
FunctionFamily tilt_family(int top, std::vector<Vec> hints = {}) {
  std::map<std::string, ConvexFunctionSpec> entries;
  for (int t = 0; t <= top; ++t) {
    entries.emplace(std::to_string(t), ConvexFunctionSpec::affine({Q(t)}, Q(t)));
  }
  return FunctionFamily(1, std::move(entries), std::move(hints));
}

FunctionFamily abs_family() {
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("up", ConvexFunctionSpec::affine({Q(1)}, Q(0)));
  entries.emplace("down", ConvexFunctionSpec::affine({Q(-1)}, Q(0)));
  return FunctionFamily(1, std::move(entries));
}

// {x (affine), improper -inf on (-inf, 0]}
FunctionFamily mixed_family() {
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("lin", ConvexFunctionSpec::affine({Q(1)}, Q(0)));
  entries.emplace("imp", ConvexFunctionSpec::improper_neg_inf(half_line_leq(Q(0))));
  return FunctionFamily(1, std::move(entries));
}

// {x (affine), indicator of (-inf, 1]}
FunctionFamily line_plus_wall() {
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("lin", ConvexFunctionSpec::affine({Q(1)}, Q(0)));
  entries.emplace("wall", ConvexFunctionSpec::indicator(half_line_leq(Q(1))));
  return FunctionFamily(1, std::move(entries));
}

struct RandomFamilyOptions {
  int dim = 1;
  int max_entries = 8;
  bool allow_improper = false;
};

// Families whose domains all contain the anchor x, with a second strictly
// interior point so the continuity hypothesis holds by construction.
FunctionFamily random_family(std::mt19937_64& rng, const RandomFamilyOptions& opts, Vec* anchor) {
  std::uniform_int_distribution<int> coeff(-2, 2);
  std::uniform_int_distribution<int> count(1, 3);
  const int dim = opts.dim;
  Vec x(dim);
  for (auto& c : x) c = Q(coeff(rng));
  Vec strict(dim);
  for (std::size_t i = 0; i < strict.size(); ++i) strict[i] = x[i] + Q(1 + (rng() % 2));

  auto random_piece = [&] {
    AffinePiece p;
    p.gradient.resize(dim);
    for (auto& c : p.gradient) c = Q(coeff(rng));
    p.offset = Q(coeff(rng));
    return p;
  };
  // Half-spaces containing x (sometimes tightly) and strict strictly.
  auto random_domain = [&] {
    std::vector<HalfSpace> rows;
    const int m = count(rng);
    for (int i = 0; i < m; ++i) {
      Vec normal(dim);
      bool zero = true;
      for (auto& c : normal) {
        c = Q(coeff(rng));
        if (c != 0) zero = false;
      }
      if (zero) continue;
      const Rational at_x = dot(normal, x);
      const Rational at_strict = dot(normal, strict);
      Rational offset = (rng() % 2 == 0) ? at_x : at_x + Q(1);
      if (offset <= at_strict) offset = at_strict + Q(1);
      rows.push_back(HalfSpace{normal, offset});
    }
    return Polyhedron::from_hrep(dim, std::move(rows));
  };

  std::uniform_int_distribution<int> entry_count(1, opts.max_entries);
  const int m = entry_count(rng);
  std::map<std::string, ConvexFunctionSpec> entries;
  for (int i = 0; i < m; ++i) {
    const std::string index = "t" + std::to_string(i);
    const int which = static_cast<int>(rng() % (opts.allow_improper ? 5 : 4));
    switch (which) {
      case 0: {
        auto p = random_piece();
        entries.emplace(index, ConvexFunctionSpec::affine(p.gradient, p.offset));
        break;
      }
      case 1: {
        std::vector<AffinePiece> pieces;
        const int k = count(rng);
        for (int j = 0; j < k; ++j) pieces.push_back(random_piece());
        entries.emplace(index, ConvexFunctionSpec::max_affine(std::move(pieces)));
        break;
      }
      case 2: {
        std::vector<AffinePiece> pieces;
        const int k = count(rng) - 1;
        for (int j = 0; j < k; ++j) pieces.push_back(random_piece());
        entries.emplace(index, ConvexFunctionSpec::restricted(std::move(pieces), random_domain()));
        break;
      }
      case 3:
        entries.emplace(index, ConvexFunctionSpec::indicator(random_domain()));
        break;
      default:
        entries.emplace(index, ConvexFunctionSpec::improper_neg_inf(random_domain()));
        break;
    }
  }
  *anchor = x;
  return FunctionFamily(dim, std::move(entries));
}

}  // namespace

TEST_CASE("sup values over the tilt family") {
  auto family = tilt_family(2);
  CHECK(sup_value(family, {Q(0)}) == ExtReal(Q(0)));
  CHECK(sup_value(family, {Q(1)}) == ExtReal(Q(0)));
  CHECK(sup_value(family, {Q(2)}) == ExtReal(Q(2)));

  // one improper entry containing x and no proper entry -> -inf
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("imp", ConvexFunctionSpec::improper_neg_inf(interval(Q(0), Q(1))));
  FunctionFamily improper_only(1, std::move(entries));
  CHECK(sup_value(improper_only, {Q(1, 2)}).is_minus_infinity());
}

TEST_CASE("active sets of the tilt family") {
  auto family = tilt_family(2);
  CHECK(active_set(family, {Q(0)}, Q(1)) == std::set<std::string>{"0", "1"});
  CHECK(active_set(family, {Q(0)}, Q(3)) == std::set<std::string>{"0", "1", "2"});
  CHECK(active_set(family, {Q(1)}, Q(1, 2)) == std::set<std::string>{"0", "1", "2"});
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("imp", ConvexFunctionSpec::improper_neg_inf(interval(Q(0), Q(1))));
  FunctionFamily improper_only(1, std::move(entries));
  CHECK_THROWS_AS(active_set(improper_only, {Q(1, 2)}, Q(1)), std::invalid_argument);
}

TEST_CASE("penalization weights") {
  auto family = tilt_family(10);
  auto weights = rho_weights(family, {Q(0)}, Q(1));
  CHECK(weights.at("2") == Q(1, 3));
  CHECK(weights.at("10") == Q(1, 19));
  CHECK(weights.at("0") == Q(1));
  CHECK(weights.at("1") == Q(1));
  for (const auto& [index, w] : weights) {
    CHECK(w > 0);
    CHECK(w <= 1);
  }
}

TEST_CASE("weight scheme validation") {
  auto family = tilt_family(3);
  const Vec x = {Q(0)};
  CHECK(resolve_weights(family, x, Q(1), WeightScheme::unit()).at("3") == Q(1));
  std::map<std::string, Rational> too_small{
      {"0", Q(1)}, {"1", Q(1)}, {"2", Q(1, 10)}, {"3", Q(1)}};
  CHECK_THROWS_WITH_AS(resolve_weights(family, x, Q(1), WeightScheme::custom_weights(too_small)),
                       doctest::Contains("below rho"), std::invalid_argument);
  std::map<std::string, Rational> missing{{"0", Q(1)}};
  CHECK_THROWS_WITH_AS(resolve_weights(family, x, Q(1), WeightScheme::custom_weights(missing)),
                       doctest::Contains("missing weight"), std::invalid_argument);
}

TEST_CASE("component sets of the worked example") {
  auto family = tilt_family(2);
  auto cs = component_sets(family, {Q(0)}, Q(1), WeightScheme::rho());
  CHECK(set_equal(cs.active_hull, interval(Q(0), Q(1))));
  CHECK(set_equal(cs.penalized_hull, Polyhedron::singleton({Q(2, 3)})));
  CHECK(cs.improper_hull.is_empty());

  auto abs = abs_family();
  auto cs2 = component_sets(abs, {Q(0)}, Q(1), WeightScheme::rho());
  CHECK(cs2.penalized_hull.is_empty());
  CHECK(cs2.improper_hull.is_empty());

  auto mixed = mixed_family();
  auto cs3 = component_sets(mixed, {Q(0)}, Q(1), WeightScheme::rho());
  CHECK(set_equal(cs3.improper_hull, half_line_geq(Q(0))));
}

TEST_CASE("normal cone for proper families (worked example)") {
  auto family = tilt_family(2);
  auto r = normal_cone_dom_proper(family, {Q(0)}, Q(1), WeightScheme::rho());
  CHECK(set_equal(r.set, Polyhedron::singleton({Q(0)})));
  CHECK(r.formula == "Theo13b/mainfb");
  CHECK(!r.hint_used);

  auto wall = line_plus_wall();
  auto r2 = normal_cone_dom_proper(wall, {Q(1)}, Q(2), WeightScheme::unit());
  CHECK(set_equal(r2.set, half_line_geq(Q(0))));
  auto r3 = normal_cone_dom_proper(wall, {Q(0)}, Q(1), WeightScheme::rho());
  CHECK(set_equal(r3.set, Polyhedron::singleton({Q(0)})));

  CHECK_THROWS_AS(normal_cone_dom_proper(mixed_family(), {Q(0)}, Q(1), WeightScheme::rho()),
                  std::invalid_argument);
}

TEST_CASE("normal cone with improper entries") {
  auto mixed = mixed_family();
  auto r = normal_cone_dom(mixed, {Q(0)}, Q(1), WeightScheme::rho());
  CHECK(set_equal(r.set, half_line_geq(Q(0))));

  // all-proper agrees with the proper-only routine
  auto wall = line_plus_wall();
  CHECK(set_equal(normal_cone_dom(wall, {Q(1)}, Q(1), WeightScheme::rho()).set,
                  normal_cone_dom_proper(wall, {Q(1)}, Q(1), WeightScheme::rho()).set));

  // only an improper entry: N^eps of its domain at the right end
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("imp", ConvexFunctionSpec::improper_neg_inf(interval(Q(0), Q(1))));
  FunctionFamily improper_only(1, std::move(entries));
  auto r2 = normal_cone_dom(improper_only, {Q(1)}, Q(1), WeightScheme::rho());
  CHECK(set_equal(r2.set, half_line_geq(Q(0))));
}

TEST_CASE("limit form of the normal cone") {
  auto schedule = geometric_schedule(6);

  auto family = tilt_family(2);
  auto r = normal_cone_dom_mainfc(family, {Q(0)}, schedule);
  CHECK(set_equal(r.set, Polyhedron::singleton({Q(0)})));

  auto wall = line_plus_wall();
  auto r2 = normal_cone_dom_mainfc(wall, {Q(1)}, schedule);
  CHECK(set_equal(r2.set, half_line_geq(Q(0))));
  CHECK(r2.stabilized);

  // single affine entry: shrinking singletons, empty intersection -> {0}
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("lin", ConvexFunctionSpec::affine({Q(1)}, Q(0)));
  FunctionFamily single(1, std::move(entries));
  auto r3 = normal_cone_dom_mainfc(single, {Q(0)}, schedule);
  CHECK(set_equal(r3.set, Polyhedron::singleton({Q(0)})));
  CHECK(r3.note.find("empty-intersection") != std::string::npos);
}

TEST_CASE("parameter-free normal cone") {
  auto family = tilt_family(2);
  auto r = normal_cone_dom_parameterfree(family, {Q(0)}, Q(1));
  CHECK(set_equal(r.set, Polyhedron::singleton({Q(0)})));
  CHECK(set_equal(r.set, normal_cone_dom(family, {Q(0)}, Q(1), WeightScheme::rho()).set));

  auto abs = abs_family();
  auto r2 = normal_cone_dom_parameterfree(abs, {Q(0)}, Q(1));
  CHECK(set_equal(r2.set, normal_cone_dom(abs, {Q(0)}, Q(1), WeightScheme::unit()).set));
}

TEST_CASE("normal cone of an intersection") {
  auto r = normal_cone_intersection({half_line_leq(Q(1)), half_line_geq(Q(0))}, {Q(0)}, Q(1));
  CHECK(set_equal(r.set, half_line_leq(Q(0))));

  auto r2 = normal_cone_intersection({interval(Q(0), Q(1)), interval(Q(0), Q(1))}, {Q(1, 2)}, Q(1));
  CHECK(set_equal(r2.set, Polyhedron::singleton({Q(0)})));

  // two crossing lines through the origin in R^2: the normal cone at 0 is
  // the whole plane (spanned by both normals)
  auto line_x = Polyhedron::from_vrep(2, {{Q(0), Q(0)}}, {{Q(1), Q(0)}, {Q(-1), Q(0)}});
  auto diag = Polyhedron::from_vrep(2, {{Q(0), Q(0)}}, {{Q(1), Q(1)}, {Q(-1), Q(-1)}});
  auto r3 = normal_cone_intersection({line_x, diag}, {Q(0), Q(0)}, Q(1));
  CHECK(set_equal(r3.set, Polyhedron::whole_space(2)));
  CHECK_THROWS_AS(normal_cone_intersection({interval(Q(0), Q(1))}, {Q(2)}, Q(1)),
                  std::invalid_argument);
}

TEST_CASE("subdifferential of the supremum (worked examples)") {
  auto schedule = geometric_schedule(8);

  auto abs = abs_family();
  auto r = subdifferential_sup(abs, {Q(0)}, schedule, WeightScheme::rho());
  CHECK(set_equal(r.set, interval(Q(-1), Q(1))));
  CHECK(r.stabilized);

  // tilt family at x = 1: all active, A = [0, 2] for every eps
  auto family = tilt_family(2);
  auto r2 = subdifferential_sup(family, {Q(1)}, schedule, WeightScheme::rho());
  CHECK(set_equal(r2.set, interval(Q(0), Q(2))));

  // mixed family at 0: intersection over eps collapses to [1, inf)
  auto mixed = mixed_family();
  auto r3 = subdifferential_sup(mixed, {Q(0)}, schedule, WeightScheme::rho());
  CHECK(set_equal(r3.set, half_line_geq(Q(1))));
}

TEST_CASE("reference formula cross-check") {
  auto schedule = geometric_schedule(8);
  auto abs = abs_family();
  CHECK(set_equal(subdifferential_refdem16(abs, {Q(0)}, schedule).set, interval(Q(-1), Q(1))));

  auto wall = line_plus_wall();
  CHECK(set_equal(subdifferential_refdem16(wall, {Q(1)}, schedule).set, half_line_geq(Q(1))));
  CHECK(set_equal(subdifferential_sup(wall, {Q(1)}, schedule, WeightScheme::rho()).set,
                  half_line_geq(Q(1))));
}

TEST_CASE("Brondsted formula and its hypothesis") {
  auto schedule = geometric_schedule(8);
  auto abs = abs_family();
  CHECK(set_equal(subdifferential_brondsted(abs, {Q(0)}, schedule).set, interval(Q(-1), Q(1))));

  auto family = tilt_family(2);
  CHECK(set_equal(subdifferential_brondsted(family, {Q(1)}, schedule).set, interval(Q(0), Q(2))));
  CHECK_THROWS_AS(subdifferential_brondsted(family, {Q(0)}, schedule), HypothesisError);
}

TEST_CASE("normal-cone split under the continuity hypothesis") {
  auto family = tilt_family(2);
  auto split = normal_cone_split(family, {Q(0)}, Q(1), WeightScheme::rho());
  auto origin = Polyhedron::singleton({Q(0)});
  CHECK(set_equal(split.part_active, origin));
  CHECK(set_equal(split.part_penalized, origin));
  CHECK(set_equal(split.part_improper, origin));
  CHECK(set_equal(split.total, origin));

  auto wall = line_plus_wall();
  auto split2 = normal_cone_split(wall, {Q(1)}, Q(1), WeightScheme::rho());
  CHECK(set_equal(split2.total, normal_cone_dom(wall, {Q(1)}, Q(1), WeightScheme::rho()).set));

  // a line in R^2 as the only domain: empty interior, hypothesis refused
  std::map<std::string, ConvexFunctionSpec> entries;
  auto vertical_line =
      Polyhedron::from_hrep(2, {HalfSpace{{Q(1), Q(0)}, Q(0)}, HalfSpace{{Q(-1), Q(0)}, Q(0)}});
  entries.emplace("wall", ConvexFunctionSpec::indicator(vertical_line));
  FunctionFamily degenerate(2, std::move(entries));
  CHECK_THROWS_AS(normal_cone_split(degenerate, {Q(0), Q(0)}, Q(1), WeightScheme::rho()),
                  HypothesisError);
}

TEST_CASE("subdifferential split (three-term sum)") {
  auto schedule = geometric_schedule(8);
  auto abs = abs_family();
  auto r = subdifferential_split(abs, {Q(0)}, schedule, WeightScheme::rho(), false);
  CHECK(set_equal(r.set, interval(Q(-1), Q(1))));
  auto r_exact = subdifferential_split(abs, {Q(0)}, schedule, WeightScheme::rho(), true);
  CHECK(set_equal(r_exact.set, interval(Q(-1), Q(1))));

  auto mixed = mixed_family();
  auto r2 = subdifferential_split(mixed, {Q(0)}, schedule, WeightScheme::rho(), false);
  CHECK(set_equal(r2.set, half_line_geq(Q(1))));
}

TEST_CASE("caratheodory decomposition") {
  // F = {x, -x, x/2} on R: m = 3 > n + 1 = 2
  std::map<std::string, ConvexFunctionSpec> entries;
  entries.emplace("a", ConvexFunctionSpec::affine({Q(1)}, Q(0)));
  entries.emplace("b", ConvexFunctionSpec::affine({Q(-1)}, Q(0)));
  entries.emplace("c", ConvexFunctionSpec::affine({Q(1, 2)}, Q(0)));
  FunctionFamily family(1, std::move(entries));

  auto d = caratheodory_decompose(family, {Q(0)}, Q(0), {Q(0)});
  CHECK(d.support_size() <= 2);
  Rational combo(0);
  for (const auto& [index, w] : d.lambda) {
    combo += w * (index == "a" ? Q(1) : index == "b" ? Q(-1) : Q(1, 2));
  }
  CHECK(combo == Q(0));

  auto d2 = caratheodory_decompose(family, {Q(0)}, Q(0), {Q(1)});
  CHECK(d2.lambda.at("a") == Q(1));
  CHECK(d2.support_size() == 1);

  CHECK_THROWS_WITH_AS(caratheodory_decompose(family, {Q(0)}, Q(0), {Q(2)}),
                       doctest::Contains("not an eps-subgradient"), std::invalid_argument);

  // m <= n + 1 passthrough still produces a valid certificate
  std::map<std::string, ConvexFunctionSpec> two;
  two.emplace("a", ConvexFunctionSpec::affine({Q(1)}, Q(0)));
  two.emplace("b", ConvexFunctionSpec::affine({Q(-1)}, Q(0)));
  FunctionFamily pair(1, std::move(two));
  auto d3 = caratheodory_decompose(pair, {Q(0)}, Q(0), {Q(0)});
  CHECK(d3.support_size() <= 2);
}

TEST_CASE("oracles on the worked families") {
  auto family = tilt_family(2);
  CHECK(set_equal(oracle_normal_cone_dom(family, {Q(0)}), Polyhedron::singleton({Q(0)})));
  CHECK(set_equal(oracle_subdifferential(family, {Q(1)}), interval(Q(0), Q(2))));

  auto wall = line_plus_wall();
  CHECK(set_equal(oracle_normal_cone_dom(wall, {Q(1)}), half_line_geq(Q(0))));

  auto abs = abs_family();
  CHECK(set_equal(oracle_subdifferential(abs, {Q(0)}), interval(Q(-1), Q(1))));

  auto mixed = mixed_family();
  CHECK(set_equal(oracle_subdifferential(mixed, {Q(0)}), half_line_geq(Q(1))));
  CHECK(set_equal(oracle_normal_cone_dom(mixed, {Q(0)}), half_line_geq(Q(0))));
}

TEST_CASE("closure hints reproduce the infinite-family limits") {
  auto hinted = tilt_family(10, {{Q(1)}});
  auto r = normal_cone_dom_proper(hinted, {Q(1)}, Q(1), WeightScheme::rho());
  CHECK(set_equal(r.set, half_line_geq(Q(0))));
  CHECK(r.hint_used);

  // at x = 0 the weighted family stays bounded without hints
  auto plain = tilt_family(10);
  auto r2 = normal_cone_dom_proper(plain, {Q(0)}, Q(1), WeightScheme::rho());
  CHECK(set_equal(r2.set, Polyhedron::singleton({Q(0)})));
  CHECK(!r2.hint_used);

  // hinted subdifferential at x = 1 opens the right end
  auto r3 = subdifferential_sup(hinted, {Q(1)}, geometric_schedule(6), WeightScheme::rho());
  CHECK(set_equal(r3.set, half_line_geq(Q(0))));
  CHECK(r3.hint_used);
}

TEST_CASE("upper bound with unweighted subdifferentials") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    RandomFamilyOptions opts;
    opts.dim = 1 + static_cast<int>(rng() % 2);
    opts.max_entries = 5;
    Vec x;
    auto family = random_family(rng, opts, &x);
    if (sup_value(family, x).is_plus_infinity()) continue;
    auto cone = normal_cone_dom(family, x, Q(1), WeightScheme::rho()).set;
    // [cl co(union of unweighted eps-subdifferentials)]_inf always contains it
    std::vector<Polyhedron> terms;
    for (const auto& index : family.proper_indices()) {
      terms.push_back(eps_subdifferential(family.entries().at(index), x, Q(1)));
    }
    for (const auto& index : family.improper_indices()) {
      terms.push_back(eps_normal_set(domain(family.entries().at(index)), x, Q(1)));
    }
    auto upper = recession_cone(hull_union(terms));
    CHECK(is_subset(cone, upper));
  }
}

TEST_CASE("tail-weight monotonicity of the penalized cones") {
  // weights built from the supremum of the non-active tail; the cones are
  // nondecreasing as eps drops
  auto family = tilt_family(6);
  const Vec x = {Q(0)};
  auto penalized_cone = [&](const Rational& eps) {
    const auto active = active_set(family, x, eps);
    Rational tail_sup;
    bool first = true;
    for (const auto& [index, entry] : family.entries()) {
      if (active.count(index) != 0) continue;
      const Rational v = evaluate(entry, x).finite_value();
      if (first || v > tail_sup) tail_sup = v;
      first = false;
    }
    std::vector<Polyhedron> terms;
    for (const auto& [index, entry] : family.entries()) {
      if (active.count(index) != 0) continue;
      const Rational v = evaluate(entry, x).finite_value();
      const Rational gap = 2 * tail_sup - 2 * v - eps;
      const Rational rho_tilde = eps / std::max(gap, eps);
      terms.push_back(eps_subdifferential_scaled(entry, rho_tilde, x, eps));
    }
    REQUIRE(!terms.empty());
    return recession_cone(hull_union(terms));
  };
  auto cone_2 = penalized_cone(Q(2));
  auto cone_1 = penalized_cone(Q(1));
  auto cone_half = penalized_cone(Q(1, 2));
  CHECK(is_subset(cone_2, cone_1));
  CHECK(is_subset(cone_1, cone_half));
}

TEST_CASE("randomized agreement across every formula") {
  std::mt19937_64 rng(987654);
  auto schedule = geometric_schedule(8);
  int done = 0;
  for (int trial = 0; trial < 40 && done < 20; ++trial) {
    RandomFamilyOptions opts;
    opts.dim = 1 + static_cast<int>(rng() % 2);
    opts.max_entries = 4;
    opts.allow_improper = (trial % 3 == 0);
    Vec x;
    auto family = random_family(rng, opts, &x);
    if (sup_value(family, x).is_plus_infinity()) continue;
    ++done;
    CAPTURE(trial);

    const auto oracle_cone = oracle_normal_cone_dom(family, x);
    CHECK(set_equal(normal_cone_dom(family, x, Q(1), WeightScheme::rho()).set, oracle_cone));
    CHECK(set_equal(normal_cone_dom_parameterfree(family, x, Q(1)).set, oracle_cone));
    CHECK(set_equal(normal_cone_split(family, x, Q(1), WeightScheme::rho()).total, oracle_cone));

    const auto oracle_sd = oracle_subdifferential(family, x);
    CHECK(set_equal(subdifferential_sup(family, x, schedule, WeightScheme::rho()).set, oracle_sd));
    CHECK(set_equal(subdifferential_refdem16(family, x, schedule).set, oracle_sd));
    CHECK(set_equal(subdifferential_split(family, x, schedule, WeightScheme::rho(), false).set,
                    oracle_sd));
  }
  CHECK(done >= 15);
}

#include "supdiff/convex_function.hpp"

#include "supdiff/lp.hpp"

#include <stdexcept>

namespace supdiff {

namespace {

void check_pieces(const std::vector<AffinePiece>& pieces, int dim) {
  for (const auto& p : pieces) {
    if (static_cast<int>(p.gradient.size()) != dim) {
      throw std::invalid_argument("affine piece has wrong dimension");
    }
  }
}

}  // namespace

ConvexFunctionSpec ConvexFunctionSpec::affine(Vec gradient, Rational offset) {
  const int dim = static_cast<int>(gradient.size());
  if (dim < 1) throw std::invalid_argument("affine function needs dimension >= 1");
  return ConvexFunctionSpec(Affine{AffinePiece{std::move(gradient), std::move(offset)}}, dim);
}

ConvexFunctionSpec ConvexFunctionSpec::max_affine(std::vector<AffinePiece> pieces) {
  if (pieces.empty()) throw std::invalid_argument("max_affine needs at least one piece");
  const int dim = static_cast<int>(pieces.front().gradient.size());
  check_pieces(pieces, dim);
  return ConvexFunctionSpec(MaxAffine{std::move(pieces)}, dim);
}

ConvexFunctionSpec ConvexFunctionSpec::restricted(std::vector<AffinePiece> pieces,
                                                  Polyhedron domain) {
  const int dim = domain.dim();
  check_pieces(pieces, dim);
  if (domain.is_empty()) throw std::invalid_argument("restricted function needs a nonempty domain");
  return ConvexFunctionSpec(Restricted{std::move(pieces), std::move(domain)}, dim);
}

ConvexFunctionSpec ConvexFunctionSpec::indicator(Polyhedron domain) {
  const int dim = domain.dim();
  return ConvexFunctionSpec(Indicator{std::move(domain)}, dim);
}

ConvexFunctionSpec ConvexFunctionSpec::improper_neg_inf(Polyhedron domain) {
  const int dim = domain.dim();
  if (domain.is_empty()) {
    throw std::invalid_argument("improper function needs a nonempty domain");
  }
  return ConvexFunctionSpec(ImproperNegInf{std::move(domain)}, dim);
}

ExtReal evaluate(const ConvexFunctionSpec& f, const Vec& x) {
  if (static_cast<int>(x.size()) != f.dim()) throw std::invalid_argument("dimension mismatch");
  return std::visit(
      [&](const auto& fn) -> ExtReal {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return ExtReal(dot(fn.piece.gradient, x) - fn.piece.offset);
        } else if constexpr (std::is_same_v<T, MaxAffine>) {
          ExtReal best = ExtReal::minus_infinity();
          for (const auto& p : fn.pieces) {
            ExtReal v(dot(p.gradient, x) - p.offset);
            if (best < v) best = v;
          }
          return best;
        } else if constexpr (std::is_same_v<T, Restricted>) {
          if (!fn.domain.contains(x)) return ExtReal::plus_infinity();
          ExtReal best(Rational(0));
          bool first = true;
          for (const auto& p : fn.pieces) {
            ExtReal v(dot(p.gradient, x) - p.offset);
            if (first || best < v) best = v;
            first = false;
          }
          return best;
        } else if constexpr (std::is_same_v<T, Indicator>) {
          return fn.domain.contains(x) ? ExtReal(Rational(0)) : ExtReal::plus_infinity();
        } else {
          return fn.domain.contains(x) ? ExtReal::minus_infinity() : ExtReal::plus_infinity();
        }
      },
      f.variant());
}

Polyhedron domain(const ConvexFunctionSpec& f) {
  return std::visit(
      [&](const auto& fn) -> Polyhedron {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, Affine> || std::is_same_v<T, MaxAffine>) {
          return Polyhedron::whole_space(f.dim());
        } else {
          return fn.domain;
        }
      },
      f.variant());
}

bool is_proper(const ConvexFunctionSpec& f) {
  return std::visit(
      [](const auto& fn) -> bool {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, Indicator>) {
          return !fn.domain.is_empty();
        } else {
          return !std::is_same_v<T, ImproperNegInf>;
        }
      },
      f.variant());
}

std::vector<AffinePiece> effective_pieces(const ConvexFunctionSpec& f) {
  if (!is_proper(f)) throw std::invalid_argument("effective_pieces requires a proper function");
  const AffinePiece zero{zero_vec(f.dim()), Rational(0)};
  return std::visit(
      [&](const auto& fn) -> std::vector<AffinePiece> {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return {fn.piece};
        } else if constexpr (std::is_same_v<T, MaxAffine>) {
          return fn.pieces;
        } else if constexpr (std::is_same_v<T, Restricted>) {
          return fn.pieces.empty() ? std::vector<AffinePiece>{zero} : fn.pieces;
        } else if constexpr (std::is_same_v<T, Indicator>) {
          return {zero};
        } else {
          return {};
        }
      },
      f.variant());
}

Polyhedron conjugate_epigraph(const ConvexFunctionSpec& f) {
  if (!is_proper(f)) throw std::invalid_argument("conjugate of improper function not supported");
  const int n = f.dim();

  // Conjugate of the max-affine part: epi g* = conv{(a_i, b_i)} + cone{(0, 1)}.
  std::vector<Vec> vertices;
  for (const auto& p : effective_pieces(f)) {
    Vec v = p.gradient;
    v.push_back(p.offset);
    vertices.push_back(std::move(v));
  }
  Vec up = zero_vec(n + 1);
  up[n] = 1;
  Polyhedron pieces_epi = Polyhedron::from_vrep(n + 1, std::move(vertices), {up});

  const bool restricted_domain =
      f.get_if<Restricted>() != nullptr || f.get_if<Indicator>() != nullptr;
  if (!restricted_domain) return pieces_epi;

  // epi sigma_D straight from the domain's V-representation:
  //   <v, g> - r <= 0 per vertex, <d, g> <= 0 per ray.
  const Polyhedron dom = domain(f);
  std::vector<HalfSpace> rows;
  for (const auto& v : dom.vertices()) {
    Vec normal = v;
    normal.push_back(Rational(-1));
    rows.push_back(HalfSpace{std::move(normal), Rational(0)});
  }
  for (const auto& d : dom.rays()) {
    Vec normal = d;
    normal.push_back(Rational(0));
    rows.push_back(HalfSpace{std::move(normal), Rational(0)});
  }
  Polyhedron support_epi = Polyhedron::from_hrep(n + 1, std::move(rows));
  if (f.get_if<Indicator>() != nullptr) return support_epi;
  // Polyhedral inf-convolution is exact: epi (g + I_D)* = epi g* + epi sigma_D.
  return minkowski_sum(pieces_epi, support_epi);
}

Polyhedron eps_subdifferential_from_epi(const Polyhedron& epi, const ConvexFunctionSpec& f,
                                        const Vec& x, const Rational& eps) {
  if (eps < 0) throw std::invalid_argument("eps_subdifferential requires eps >= 0");
  if (static_cast<int>(x.size()) != f.dim()) throw std::invalid_argument("dimension mismatch");
  const int n = f.dim();
  const ExtReal fx = evaluate(f, x);
  if (!fx.is_finite()) return Polyhedron::empty_set(n);

  // d_eps f(x) = { g : exists r with (g, r) in epi f*, r <= <g, x> - f(x) + eps }.
  Vec cut = scaled(x, Rational(-1));
  cut.push_back(Rational(1));
  Polyhedron slab =
      Polyhedron::from_hrep(n + 1, {HalfSpace{std::move(cut), eps - fx.finite_value()}});
  return drop_last_coordinate(intersect(epi, slab));
}

Polyhedron eps_subdifferential(const ConvexFunctionSpec& f, const Vec& x, const Rational& eps) {
  if (eps < 0) throw std::invalid_argument("eps_subdifferential requires eps >= 0");
  if (!is_proper(f)) return Polyhedron::empty_set(f.dim());
  return eps_subdifferential_from_epi(conjugate_epigraph(f), f, x, eps);
}

Polyhedron eps_subdifferential_scaled(const ConvexFunctionSpec& f, const Rational& alpha,
                                      const Vec& x, const Rational& eps) {
  if (alpha <= 0) throw std::invalid_argument("scaling factor must be positive");
  return scale(eps_subdifferential(f, x, eps / alpha), alpha);
}

Polyhedron eps_subdifferential_scaled_from_epi(const Polyhedron& epi, const ConvexFunctionSpec& f,
                                               const Rational& alpha, const Vec& x,
                                               const Rational& eps) {
  if (alpha <= 0) throw std::invalid_argument("scaling factor must be positive");
  return scale(eps_subdifferential_from_epi(epi, f, x, eps / alpha), alpha);
}

ExtReal conjugate_value(const ConvexFunctionSpec& f, const Vec& g) {
  if (!is_proper(f)) throw std::invalid_argument("conjugate of improper function not supported");
  if (static_cast<int>(g.size()) != f.dim()) throw std::invalid_argument("dimension mismatch");
  // maximize <g, x> - s  subject to  <a_i, x> - s <= b_i  and  x in D.
  std::vector<lp::Constraint> constraints;
  for (const auto& p : effective_pieces(f)) {
    Vec row = p.gradient;
    row.push_back(Rational(-1));
    constraints.push_back(lp::less_equal(std::move(row), p.offset));
  }
  const Polyhedron dom = domain(f);
  for (const auto& h : dom.inequalities()) {
    Vec row = h.normal;
    row.push_back(Rational(0));
    constraints.push_back(lp::less_equal(std::move(row), h.offset));
  }
  Vec objective = g;
  objective.push_back(Rational(-1));
  lp::Solution s = lp::maximize(objective, constraints);
  if (s.status == lp::Status::kUnbounded) return ExtReal::plus_infinity();
  if (s.status == lp::Status::kInfeasible) {
    throw std::logic_error("conjugate LP infeasible for a proper function");
  }
  return ExtReal(s.value);
}

bool subgradient_membership(const ConvexFunctionSpec& f, const Vec& x, const Rational& eps,
                            const Vec& g) {
  const ExtReal gap = conjugate_value(f, g) + evaluate(f, x) + ExtReal(-dot(g, x));
  return gap <= ExtReal(eps);
}

ConvexFunctionSpec max_with_floor(const ConvexFunctionSpec& f, const Rational& c) {
  if (!is_proper(f)) throw std::invalid_argument("max_with_floor requires a proper function");
  std::vector<AffinePiece> pieces = effective_pieces(f);
  pieces.push_back(AffinePiece{zero_vec(f.dim()), -c});
  if (f.get_if<Affine>() != nullptr || f.get_if<MaxAffine>() != nullptr) {
    return ConvexFunctionSpec::max_affine(std::move(pieces));
  }
  return ConvexFunctionSpec::restricted(std::move(pieces), domain(f));
}

}  // namespace supdiff

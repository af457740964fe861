#pragma once

#include "supdiff/extreal.hpp"
#include "supdiff/polyhedron.hpp"

#include <variant>
#include <vector>

namespace supdiff {

/// One affine piece x -> <gradient, x> - offset.
struct AffinePiece {
  Vec gradient;
  Rational offset;
};

struct Affine {
  AffinePiece piece;
};

/// max over a nonempty list of affine pieces.
struct MaxAffine {
  std::vector<AffinePiece> pieces;
};

/// max over pieces plus the indicator of a nonempty domain; an empty piece
/// list means the zero function on the domain.
struct Restricted {
  std::vector<AffinePiece> pieces;
  Polyhedron domain;
};

struct Indicator {
  Polyhedron domain;
};

/// -inf on a nonempty closed domain, +inf outside: lsc convex and improper.
struct ImproperNegInf {
  Polyhedron domain;
};

/// Tagged description of one lsc convex polyhedral function.
class ConvexFunctionSpec {
 public:
  using Variant = std::variant<Affine, MaxAffine, Restricted, Indicator, ImproperNegInf>;

  static ConvexFunctionSpec affine(Vec gradient, Rational offset);
  static ConvexFunctionSpec max_affine(std::vector<AffinePiece> pieces);
  static ConvexFunctionSpec restricted(std::vector<AffinePiece> pieces, Polyhedron domain);
  static ConvexFunctionSpec indicator(Polyhedron domain);
  static ConvexFunctionSpec improper_neg_inf(Polyhedron domain);

  int dim() const { return dim_; }
  const Variant& variant() const { return variant_; }

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&variant_);
  }

 private:
  ConvexFunctionSpec(Variant v, int dim) : variant_(std::move(v)), dim_(dim) {}
  Variant variant_;
  int dim_;
};

ExtReal evaluate(const ConvexFunctionSpec& f, const Vec& x);
Polyhedron domain(const ConvexFunctionSpec& f);
bool is_proper(const ConvexFunctionSpec& f);

/// Exact eps-subdifferential, assembled by projecting the constrained
/// conjugate epigraph; empty whenever f(x) is not finite.
Polyhedron eps_subdifferential(const ConvexFunctionSpec& f, const Vec& x, const Rational& eps);

/// d_eps(alpha f)(x) = alpha * d_{eps/alpha} f(x), alpha > 0.
Polyhedron eps_subdifferential_scaled(const ConvexFunctionSpec& f, const Rational& alpha,
                                      const Vec& x, const Rational& eps);

/// f*(g) by exact linear programming; throws on improper variants.
ExtReal conjugate_value(const ConvexFunctionSpec& f, const Vec& g);

/// Fenchel-Young membership test: f*(g) + f(x) - <g, x> <= eps.
bool subgradient_membership(const ConvexFunctionSpec& f, const Vec& x, const Rational& eps,
                            const Vec& g);

/// Pieces with indicators normalized to the zero piece; proper variants only.
std::vector<AffinePiece> effective_pieces(const ConvexFunctionSpec& f);

/// epi f* in dimension n+1; proper variants only.
Polyhedron conjugate_epigraph(const ConvexFunctionSpec& f);

/// Same as eps_subdifferential but with a precomputed epi f*.
Polyhedron eps_subdifferential_from_epi(const Polyhedron& epi, const ConvexFunctionSpec& f,
                                        const Vec& x, const Rational& eps);

/// Same as eps_subdifferential_scaled but with a precomputed epi f*.
Polyhedron eps_subdifferential_scaled_from_epi(const Polyhedron& epi, const ConvexFunctionSpec& f,
                                               const Rational& alpha, const Vec& x,
                                               const Rational& eps);

/// max{f, c} for a proper f, keeping the same domain.
ConvexFunctionSpec max_with_floor(const ConvexFunctionSpec& f, const Rational& c);

}  // namespace supdiff

#pragma once

#include "supdiff/extreal.hpp"
#include "supdiff/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace supdiff {

/// One linear inequality <normal, x> <= offset.
struct HalfSpace {
  Vec normal;
  Rational offset;
};

/// Closed convex polyhedron over exact rationals with synchronized
/// H-representation (inequalities) and V-representation (vertices + rays).
///
/// Conventions: a polyhedron is empty iff its V-representation has no
/// vertices; every nonempty polyhedron carries at least one vertex (cones
/// carry the zero vertex); rays are primitive integer vectors.  Values are
/// immutable; representation conversions fill a cache on first use, so
/// concurrent first access to one object is not synchronized, but completed
/// values can move freely between threads.
class Polyhedron {
 public:
  static Polyhedron from_hrep(int dim, std::vector<HalfSpace> constraints);
  static Polyhedron from_vrep(int dim, std::vector<Vec> vertices, std::vector<Vec> rays);
  static Polyhedron empty_set(int dim);
  static Polyhedron whole_space(int dim);
  static Polyhedron singleton(Vec point);

  int dim() const { return dim_; }

  /// Forces the V-representation if only inequalities were given.
  bool is_empty() const;

  /// Canonical minimal vertex list (sorted); empty iff the set is empty.
  const std::vector<Vec>& vertices() const;
  /// Canonical primitive ray list (sorted).
  const std::vector<Vec>& rays() const;
  /// Canonical minimal inequality list (sorted).
  const std::vector<HalfSpace>& inequalities() const;

  bool contains(const Vec& point) const;
  bool is_bounded() const;

  std::string str() const;

 private:
  struct VRep {
    std::vector<Vec> vertices;
    std::vector<Vec> rays;
  };

  Polyhedron(int dim) : dim_(dim) {}
  void ensure_vrep() const;
  void ensure_some_hrep() const;
  void ensure_canonical_hrep() const;

  int dim_ = 1;
  mutable std::optional<VRep> vrep_;
  mutable std::optional<std::vector<HalfSpace>> hrep_;
  mutable bool hrep_canonical_ = false;

  friend bool is_subset(const Polyhedron& inner, const Polyhedron& outer);
  friend std::optional<Vec> interior_point(const Polyhedron& p);
};

// Pure set operations.

bool contains_point(const Polyhedron& p, const Vec& x);

/// Exact Minkowski sum; empty if either operand is empty.
Polyhedron minkowski_sum(const Polyhedron& p, const Polyhedron& q);

/// Closed convex hull of the union; empty members are ignored.
Polyhedron hull_union(const std::vector<Polyhedron>& sets);
Polyhedron hull_union(const Polyhedron& p, const Polyhedron& q);

/// {factor * p}; factor 0 on a nonempty set gives the origin.
Polyhedron scale(const Polyhedron& p, const Rational& factor);

/// Recession cone; the empty set yields {0} by convention.
Polyhedron recession_cone(const Polyhedron& p);

Polyhedron intersect(const Polyhedron& p, const Polyhedron& q);

bool is_subset(const Polyhedron& inner, const Polyhedron& outer);
bool set_equal(const Polyhedron& p, const Polyhedron& q);

/// sup_{a in p} <a, direction>; -inf on the empty set.
ExtReal support_value(const Polyhedron& p, const Vec& direction);

/// {g : <g, v - x> <= eps for vertices v, <g, r> <= 0 for rays r}; the empty
/// set when x is outside p.  eps = 0 gives the normal cone.
Polyhedron eps_normal_set(const Polyhedron& p, const Vec& x, const Rational& eps);

/// Strict interior witness via an l1-margin LP; nullopt when int(p) is empty.
std::optional<Vec> interior_point(const Polyhedron& p);
bool has_interior(const Polyhedron& p);

/// Coordinate projection dropping the last coordinate (epigraph elimination).
Polyhedron drop_last_coordinate(const Polyhedron& p);

}  // namespace supdiff

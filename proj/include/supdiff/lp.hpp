#pragma once

#include "supdiff/linalg.hpp"

#include <vector>

namespace supdiff::lp {

enum class Relation { kLessEqual, kEqual };

/// coeffs . x  (<= or ==)  rhs, over free variables x.
struct Constraint {
  Vec coeffs;
  Relation rel;
  Rational rhs;
};

inline Constraint less_equal(Vec coeffs, Rational rhs) {
  return Constraint{std::move(coeffs), Relation::kLessEqual, std::move(rhs)};
}
inline Constraint equal(Vec coeffs, Rational rhs) {
  return Constraint{std::move(coeffs), Relation::kEqual, std::move(rhs)};
}

enum class Status { kOptimal, kUnbounded, kInfeasible };

struct Solution {
  Status status = Status::kInfeasible;
  Rational value;  // optimal objective (kOptimal only)
  Vec point;       // optimizer (kOptimal) or a feasible point (kUnbounded)
  Vec ray;         // strictly improving feasible direction (kUnbounded only)
};

/// Exact rational simplex (two-phase, Bland's rule). Variables are free.
Solution maximize(const Vec& objective, const std::vector<Constraint>& constraints);

Solution minimize(const Vec& objective, const std::vector<Constraint>& constraints);

/// Feasibility of the system; fills *point with a witness when given.
bool feasible(const std::vector<Constraint>& constraints, int num_vars, Vec* point = nullptr);

}  // namespace supdiff::lp

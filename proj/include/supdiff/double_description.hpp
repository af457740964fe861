#pragma once

#include "supdiff/linalg.hpp"

#include <vector>

namespace supdiff::detail {

/// Generators of the cone {x : <a, x> <= 0 for every row a}.  Output rays are
/// primitive integer vectors, irredundant (no ray is a nonnegative combination
/// of the others) and sorted.  The zero cone yields an empty list.
std::vector<Vec> cone_generators(const std::vector<Vec>& normals, int dim);

/// Irredundant inequality normals of cone(generators): the output rows a
/// satisfy cone = {x : <a, x> <= 0}.  Computed by polarity, so this is the
/// same machinery run on the dual side.
std::vector<Vec> cone_inequalities(const std::vector<Vec>& generators, int dim);

/// True iff target is a nonnegative combination of the generators.
bool in_cone(const std::vector<Vec>& generators, const Vec& target);

}  // namespace supdiff::detail

#include "supdiff/double_description.hpp"

#include "supdiff/lp.hpp"

#include <algorithm>
#include <set>

namespace supdiff::detail {

namespace {

// Removes every generator that is a nonnegative combination of the others.
// Greedy over a lexicographically sorted list, so the result is deterministic.
void prune(std::vector<Vec>& rays) {
  std::sort(rays.begin(), rays.end(), VecLess{});
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  for (std::size_t i = 0; i < rays.size();) {
    std::vector<Vec> others;
    others.reserve(rays.size() - 1);
    for (std::size_t j = 0; j < rays.size(); ++j) {
      if (j != i) others.push_back(rays[j]);
    }
    if (in_cone(others, rays[i])) {
      rays.erase(rays.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
}

}  // namespace

bool in_cone(const std::vector<Vec>& generators, const Vec& target) {
  if (is_zero(target)) return true;
  if (generators.empty()) return false;
  const int dim = static_cast<int>(target.size());
  const int k = static_cast<int>(generators.size());
  // Find lambda >= 0 with sum(lambda_i g_i) = target.
  std::vector<lp::Constraint> constraints;
  constraints.reserve(dim + k);
  for (int c = 0; c < dim; ++c) {
    Vec row(k);
    for (int i = 0; i < k; ++i) row[i] = generators[i][c];
    constraints.push_back(lp::equal(std::move(row), target[c]));
  }
  for (int i = 0; i < k; ++i) {
    Vec row(k, Rational(0));
    row[i] = -1;
    constraints.push_back(lp::less_equal(std::move(row), Rational(0)));
  }
  return lp::feasible(constraints, k);
}

std::vector<Vec> cone_generators(const std::vector<Vec>& normals, int dim) {
  // Start from a generating system of the whole space and refine one
  // half-space at a time.
  std::vector<Vec> rays;
  rays.reserve(2 * dim);
  for (int i = 0; i < dim; ++i) {
    Vec e = zero_vec(dim);
    e[i] = 1;
    rays.push_back(e);
    e[i] = -1;
    rays.push_back(e);
  }

  for (const Vec& raw_normal : normals) {
    const Vec normal = primitive(raw_normal);
    if (is_zero(normal)) continue;  // 0 <= 0 carries no information

    std::vector<Vec> keep;
    std::vector<Vec> positive;
    std::vector<Rational> positive_dot;
    std::vector<Vec> negative;
    std::vector<Rational> negative_dot;
    for (const Vec& r : rays) {
      const Rational s = dot(normal, r);
      if (s > 0) {
        positive.push_back(r);
        positive_dot.push_back(s);
      } else if (s < 0) {
        negative.push_back(r);
        negative_dot.push_back(s);
        keep.push_back(r);
      } else {
        keep.push_back(r);
      }
    }
    // Every positive/negative pair contributes the combination that lands on
    // the hyperplane; redundant ones are pruned right after.
    std::set<Vec, VecLess> combos;
    for (std::size_t p = 0; p < positive.size(); ++p) {
      for (std::size_t q = 0; q < negative.size(); ++q) {
        Vec combo(dim);
        for (int c = 0; c < dim; ++c) {
          combo[c] = positive_dot[p] * negative[q][c] - negative_dot[q] * positive[p][c];
        }
        combo = primitive(combo);
        if (!is_zero(combo)) combos.insert(std::move(combo));
      }
    }
    keep.insert(keep.end(), combos.begin(), combos.end());
    rays = std::move(keep);
    prune(rays);
    if (rays.empty()) break;  // cone collapsed to {0}
  }
  return rays;
}

std::vector<Vec> cone_inequalities(const std::vector<Vec>& generators, int dim) {
  // Inequality normals of cone(G) are the generators of its polar cone
  // {y : <g, y> <= 0 for all g in G}.
  return cone_generators(generators, dim);
}

}  // namespace supdiff::detail

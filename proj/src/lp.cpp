#include "supdiff/lp.hpp"

#include <cassert>
#include <stdexcept>

namespace supdiff::lp {

namespace {

// Dense two-phase simplex over exact rationals.
//
// Free variables x are split as x = u - w with u, w >= 0.  Every row is
// normalized to nonnegative right-hand side; <= rows get a slack, >= rows a
// surplus plus an artificial, == rows an artificial.  Bland's rule guarantees
// termination.
class Simplex {
 public:
  Simplex(const Vec& objective, const std::vector<Constraint>& constraints)
      : num_free_(objective.size()) {
    build(constraints);
    objective_ = objective;
  }

  Solution run() {
    if (!phase_one()) {
      return Solution{Status::kInfeasible, Rational(0), {}, {}};
    }
    return phase_two();
  }

 private:
  enum class Row { kLe, kGe, kEq };

  void build(const std::vector<Constraint>& constraints) {
    const std::size_t m = constraints.size();
    std::vector<Row> kinds(m);
    std::vector<Vec> rows(m);
    std::vector<Rational> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Constraint& c = constraints[i];
      assert(c.coeffs.size() == num_free_);
      rows[i] = c.coeffs;
      rhs[i] = c.rhs;
      kinds[i] = c.rel == Relation::kEqual ? Row::kEq : Row::kLe;
      if (rhs[i] < 0) {
        for (auto& v : rows[i]) v = -v;
        rhs[i] = -rhs[i];
        if (kinds[i] == Row::kLe) kinds[i] = Row::kGe;
      }
    }

    std::size_t num_slack = 0;
    std::size_t num_art = 0;
    for (auto k : kinds) {
      if (k == Row::kLe || k == Row::kGe) ++num_slack;
      if (k == Row::kGe || k == Row::kEq) ++num_art;
    }
    num_structural_ = 2 * num_free_ + num_slack;
    num_cols_ = num_structural_ + num_art;
    first_artificial_ = num_structural_;

    tableau_.assign(m, Vec(num_cols_ + 1, Rational(0)));
    basis_.assign(m, 0);
    std::size_t slack_at = 2 * num_free_;
    std::size_t art_at = first_artificial_;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < num_free_; ++j) {
        tableau_[i][j] = rows[i][j];
        tableau_[i][num_free_ + j] = -rows[i][j];
      }
      tableau_[i][num_cols_] = rhs[i];
      switch (kinds[i]) {
        case Row::kLe:
          tableau_[i][slack_at] = 1;
          basis_[i] = slack_at++;
          break;
        case Row::kGe:
          tableau_[i][slack_at] = -1;
          ++slack_at;
          tableau_[i][art_at] = 1;
          basis_[i] = art_at++;
          break;
        case Row::kEq:
          tableau_[i][art_at] = 1;
          basis_[i] = art_at++;
          break;
      }
    }
  }

  // Minimizes cost over the current tableau with Bland's rule.
  // Returns false when unbounded below; *unbounded_col then names the column.
  bool iterate(Vec& cost_row, Rational& cost_value, std::size_t* unbounded_col) {
    const std::size_t m = tableau_.size();
    for (;;) {
      std::size_t entering = num_cols_;
      for (std::size_t j = 0; j < num_cols_; ++j) {
        if (banned_[j]) continue;
        if (cost_row[j] < 0) {
          entering = j;
          break;
        }
      }
      if (entering == num_cols_) return true;

      std::size_t leaving = m;
      Rational best_ratio(0);
      for (std::size_t i = 0; i < m; ++i) {
        if (tableau_[i][entering] <= 0) continue;
        Rational ratio = tableau_[i][num_cols_] / tableau_[i][entering];
        if (leaving == m || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving == m) {
        if (unbounded_col != nullptr) *unbounded_col = entering;
        return false;
      }
      pivot(leaving, entering, cost_row, cost_value);
    }
  }

  void pivot(std::size_t row, std::size_t col, Vec& cost_row, Rational& cost_value) {
    const Rational inv = Rational(1) / tableau_[row][col];
    for (auto& v : tableau_[row]) v *= inv;
    tableau_[row][col] = 1;  // guard against residue
    const std::size_t m = tableau_.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || tableau_[i][col] == 0) continue;
      const Rational factor = tableau_[i][col];
      for (std::size_t j = 0; j <= num_cols_; ++j) {
        tableau_[i][j] -= factor * tableau_[row][j];
      }
      tableau_[i][col] = 0;
    }
    if (cost_row[col] != 0) {
      const Rational factor = cost_row[col];
      for (std::size_t j = 0; j < num_cols_; ++j) {
        cost_row[j] -= factor * tableau_[row][j];
      }
      cost_value -= factor * tableau_[row][num_cols_];
      cost_row[col] = 0;
    }
    basis_[row] = col;
  }

  // Builds the reduced-cost row for raw costs c over the current basis.
  void reduced_costs(const Vec& raw, Vec& cost_row, Rational& cost_value) const {
    cost_row = raw;
    cost_value = 0;
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      const Rational cb = raw[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < num_cols_; ++j) {
        cost_row[j] -= cb * tableau_[i][j];
      }
      cost_value -= cb * tableau_[i][num_cols_];
    }
  }

  bool phase_one() {
    banned_.assign(num_cols_, false);
    if (first_artificial_ == num_cols_) return true;  // no artificials needed

    Vec raw(num_cols_, Rational(0));
    for (std::size_t j = first_artificial_; j < num_cols_; ++j) raw[j] = 1;
    Vec cost_row;
    Rational cost_value;
    reduced_costs(raw, cost_row, cost_value);
    const bool ok = iterate(cost_row, cost_value, nullptr);
    assert(ok);  // phase-1 objective is bounded below by 0
    (void)ok;
    // cost_value holds -(current sum of artificials)
    if (cost_value != 0) return false;

    // Pivot leftover artificials out of the basis; drop genuinely
    // redundant rows.
    for (std::size_t i = 0; i < tableau_.size();) {
      if (basis_[i] < first_artificial_) {
        ++i;
        continue;
      }
      std::size_t col = num_cols_;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (tableau_[i][j] != 0) {
          col = j;
          break;
        }
      }
      if (col == num_cols_) {
        tableau_.erase(tableau_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      Vec dummy(num_cols_, Rational(0));
      Rational dummy_value(0);
      pivot(i, col, dummy, dummy_value);
      ++i;
    }
    for (std::size_t j = first_artificial_; j < num_cols_; ++j) banned_[j] = true;
    return true;
  }

  Solution phase_two() {
    // maximize objective . x  ==  minimize (-objective) . (u - w)
    Vec raw(num_cols_, Rational(0));
    for (std::size_t j = 0; j < num_free_; ++j) {
      raw[j] = -objective_[j];
      raw[num_free_ + j] = objective_[j];
    }
    Vec cost_row;
    Rational cost_value;
    reduced_costs(raw, cost_row, cost_value);
    std::size_t unbounded_col = 0;
    if (iterate(cost_row, cost_value, &unbounded_col)) {
      // cost_value tracks -(raw objective) and raw = -objective, so the
      // maximized objective is cost_value itself.
      Solution out;
      out.status = Status::kOptimal;
      out.value = cost_value;
      out.point = extract_point();
      return out;
    }
    Solution out;
    out.status = Status::kUnbounded;
    out.point = extract_point();
    out.ray = extract_ray(unbounded_col);
    return out;
  }

  Vec extract_point() const {
    Vec standard(num_cols_, Rational(0));
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      standard[basis_[i]] = tableau_[i][num_cols_];
    }
    Vec x(num_free_);
    for (std::size_t j = 0; j < num_free_; ++j) {
      x[j] = standard[j] - standard[num_free_ + j];
    }
    return x;
  }

  Vec extract_ray(std::size_t entering) const {
    Vec standard(num_cols_, Rational(0));
    standard[entering] = 1;
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      standard[basis_[i]] = -tableau_[i][entering];
    }
    Vec d(num_free_);
    for (std::size_t j = 0; j < num_free_; ++j) {
      d[j] = standard[j] - standard[num_free_ + j];
    }
    return d;
  }

  std::size_t num_free_;
  std::size_t num_structural_ = 0;
  std::size_t num_cols_ = 0;
  std::size_t first_artificial_ = 0;
  Vec objective_;
  std::vector<Vec> tableau_;
  std::vector<std::size_t> basis_;
  std::vector<bool> banned_;
};

}  // namespace

Solution maximize(const Vec& objective, const std::vector<Constraint>& constraints) {
  return Simplex(objective, constraints).run();
}

Solution minimize(const Vec& objective, const std::vector<Constraint>& constraints) {
  Vec neg(objective.size());
  for (std::size_t i = 0; i < objective.size(); ++i) neg[i] = -objective[i];
  Solution s = maximize(neg, constraints);
  if (s.status == Status::kOptimal) s.value = -s.value;
  return s;
}

bool feasible(const std::vector<Constraint>& constraints, int num_vars, Vec* point) {
  Solution s = maximize(zero_vec(num_vars), constraints);
  if (s.status == Status::kInfeasible) return false;
  if (point != nullptr) *point = s.point;
  return true;
}

}  // namespace supdiff::lp

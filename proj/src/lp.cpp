#include "adjcone/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adjcone {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

LinearProgram::LinearProgram(int num_vars)
    : num_vars_(num_vars), cost_(Vector::Zero(num_vars)), free_(num_vars, false) {
  if (num_vars <= 0) throw InputError("LinearProgram: need at least one variable");
}

void LinearProgram::set_objective(const Vector& c) {
  require_dim(c, num_vars_, "LinearProgram::set_objective");
  cost_ = c;
}

void LinearProgram::set_free(int var, bool is_free) {
  if (var < 0 || var >= num_vars_) throw InputError("LinearProgram::set_free: bad index");
  free_[var] = is_free;
}

void LinearProgram::set_all_free() { std::fill(free_.begin(), free_.end(), true); }

void LinearProgram::add_le(const Vector& row, double rhs) {
  require_dim(row, num_vars_, "LinearProgram::add_le");
  le_rows_.push_back(row);
  le_rhs_.push_back(rhs);
}

void LinearProgram::add_eq(const Vector& row, double rhs) {
  require_dim(row, num_vars_, "LinearProgram::add_eq");
  eq_rows_.push_back(row);
  eq_rhs_.push_back(rhs);
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;

// Row-major dense tableau. Column `cols` holds the right-hand side.
struct Tableau {
  int rows = 0;
  int cols = 0;
  std::vector<double> t;
  std::vector<double> z;  // reduced costs, z[cols] = -objective
  std::vector<int> basis;

  double& at(int i, int j) { return t[static_cast<size_t>(i) * (cols + 1) + j]; }
  double at(int i, int j) const { return t[static_cast<size_t>(i) * (cols + 1) + j]; }
  double rhs(int i) const { return at(i, cols); }

  void pivot(int r, int c) {
    const double p = at(r, c);
    for (int j = 0; j <= cols; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    const double f = z[c];
    if (f != 0.0) {
      for (int j = 0; j <= cols; ++j) z[j] -= f * at(r, j);
      z[c] = 0.0;
    }
    basis[r] = c;
  }
};

// Bland's rule primal simplex over the columns with allowed[j] set.
LpStatus run_simplex(Tableau& tab, const std::vector<bool>& allowed, long max_iter) {
  for (long iter = 0; iter < max_iter; ++iter) {
    int enter = -1;
    for (int j = 0; j < tab.cols; ++j) {
      if (allowed[j] && tab.z[j] < -kCostEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return LpStatus::optimal;

    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < tab.rows; ++i) {
      const double a = tab.at(i, enter);
      if (a <= kPivotEps) continue;
      const double ratio = std::max(tab.rhs(i), 0.0) / a;
      if (leave < 0) {
        best = ratio;
        leave = i;
        continue;
      }
      const double slack = 1e-12 * std::max(1.0, std::abs(best));
      if (ratio < best - slack) {
        best = ratio;
        leave = i;
      } else if (ratio <= best + slack && tab.basis[i] < tab.basis[leave]) {
        leave = i;
      }
    }
    if (leave < 0) return LpStatus::unbounded;
    tab.pivot(leave, enter);
  }
  return LpStatus::iteration_limit;
}

}  // namespace

LpResult LinearProgram::minimize() const {
  // Standard-form column layout: [structural (+ negated copies for free vars)]
  // [slacks for <= rows] [artificials].
  std::vector<int> pos_col(num_vars_), neg_col(num_vars_, -1);
  int ncol = 0;
  for (int j = 0; j < num_vars_; ++j) {
    pos_col[j] = ncol++;
    if (free_[j]) neg_col[j] = ncol++;
  }
  const int n_le = static_cast<int>(le_rows_.size());
  const int n_eq = static_cast<int>(eq_rows_.size());
  const int m = n_le + n_eq;
  const int slack0 = ncol;
  ncol += n_le;

  // Decide which rows need an artificial.
  std::vector<int> art_of_row(m, -1);
  for (int i = 0; i < m; ++i) {
    const bool is_le = i < n_le;
    const double r = is_le ? le_rhs_[i] : eq_rhs_[i - n_le];
    if (!is_le || r < 0) art_of_row[i] = ncol++;
  }
  const int art0 = slack0 + n_le;

  Tableau tab;
  tab.rows = m;
  tab.cols = ncol;
  tab.t.assign(static_cast<size_t>(m) * (ncol + 1), 0.0);
  tab.z.assign(ncol + 1, 0.0);
  tab.basis.assign(m, -1);

  for (int i = 0; i < m; ++i) {
    const bool is_le = i < n_le;
    const Vector& row = is_le ? le_rows_[i] : eq_rows_[i - n_le];
    double r = is_le ? le_rhs_[i] : eq_rhs_[i - n_le];
    const double sign = (r < 0) ? -1.0 : 1.0;
    for (int j = 0; j < num_vars_; ++j) {
      tab.at(i, pos_col[j]) = sign * row[j];
      if (neg_col[j] >= 0) tab.at(i, neg_col[j]) = -sign * row[j];
    }
    if (is_le) tab.at(i, slack0 + i) = sign;
    tab.at(i, ncol) = sign * r;
    if (art_of_row[i] >= 0) {
      tab.at(i, art_of_row[i]) = 1.0;
      tab.basis[i] = art_of_row[i];
    } else {
      tab.basis[i] = slack0 + i;
    }
  }

  const long max_iter = 200L * (m + ncol) + 1000;
  double rhs_scale = 1.0;
  for (int i = 0; i < m; ++i) rhs_scale = std::max(rhs_scale, std::abs(tab.rhs(i)));

  // Phase 1: minimize the sum of artificials.
  if (ncol > art0) {
    for (int i = 0; i < m; ++i) {
      if (art_of_row[i] < 0) continue;
      for (int j = 0; j <= ncol; ++j) tab.z[j] -= tab.at(i, j);
    }
    for (int i = 0; i < m; ++i) {
      if (art_of_row[i] >= 0) tab.z[art_of_row[i]] = 0.0;
    }
    std::vector<bool> allowed(ncol, true);
    const LpStatus st = run_simplex(tab, allowed, max_iter);
    if (st == LpStatus::iteration_limit) return {st, Vector(), 0.0};
    if (-tab.z[ncol] > 1e-9 * rhs_scale) return {LpStatus::infeasible, Vector(), 0.0};

    // Drive remaining artificials out of the basis.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < art0) continue;
      int best = -1;
      double best_abs = 1e-9;
      for (int j = 0; j < art0; ++j) {
        if (std::abs(tab.at(i, j)) > best_abs) {
          best_abs = std::abs(tab.at(i, j));
          best = j;
        }
      }
      if (best >= 0) tab.pivot(i, best);
    }
  }

  // Phase 2.
  Vector c_std = Vector::Zero(ncol);
  for (int j = 0; j < num_vars_; ++j) {
    c_std[pos_col[j]] = cost_[j];
    if (neg_col[j] >= 0) c_std[neg_col[j]] = -cost_[j];
  }
  std::fill(tab.z.begin(), tab.z.end(), 0.0);
  for (int j = 0; j < ncol; ++j) tab.z[j] = c_std[j];
  for (int i = 0; i < m; ++i) {
    const double cb = c_std[tab.basis[i]];
    if (cb == 0.0) continue;
    for (int j = 0; j <= ncol; ++j) tab.z[j] -= cb * tab.at(i, j);
  }
  std::vector<bool> allowed(ncol, true);
  for (int j = art0; j < ncol; ++j) allowed[j] = false;
  const LpStatus st = run_simplex(tab, allowed, max_iter);
  if (st != LpStatus::optimal) return {st, Vector(), 0.0};

  Vector x_std = Vector::Zero(ncol);
  for (int i = 0; i < m; ++i) x_std[tab.basis[i]] = std::max(tab.rhs(i), 0.0);

  LpResult res;
  res.status = LpStatus::optimal;
  res.x.resize(num_vars_);
  for (int j = 0; j < num_vars_; ++j) {
    res.x[j] = x_std[pos_col[j]] - (neg_col[j] >= 0 ? x_std[neg_col[j]] : 0.0);
  }
  res.objective = cost_.dot(res.x);
  return res;
}

}  // namespace adjcone

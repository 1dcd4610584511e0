#pragma once

#include <vector>

#include "adjcone/types.hpp"

namespace adjcone {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double objective = 0.0;

  bool ok() const { return status == LpStatus::optimal; }
};

/// Dense linear program
///
///   minimize    c^T x
///   subject to  a_i^T x <= b_i   (inequality rows)
///               e_k^T x  = d_k   (equality rows)
///               x_j >= 0         unless variable j is marked free
///
/// solved by a two-phase tableau simplex with Bland's pivoting rule, which
/// guarantees termination on degenerate problems. Intended for the small
/// problems that arise here (tens of rows, a handful of columns); the
/// object is a plain value and `minimize` is const and reentrant.
class LinearProgram {
 public:
  explicit LinearProgram(int num_vars);

  int num_vars() const { return num_vars_; }

  void set_objective(const Vector& c);
  void set_free(int var, bool is_free = true);
  void set_all_free();
  void add_le(const Vector& row, double rhs);
  void add_ge(const Vector& row, double rhs) { add_le(-row, -rhs); }
  void add_eq(const Vector& row, double rhs);

  LpResult minimize() const;

 private:
  int num_vars_;
  Vector cost_;
  std::vector<bool> free_;
  std::vector<Vector> le_rows_;
  std::vector<double> le_rhs_;
  std::vector<Vector> eq_rows_;
  std::vector<double> eq_rhs_;
};

}  // namespace adjcone

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adjcone/polytope.hpp"

namespace adjcone {

/// K(x) = {y : A y ≤ b + D x} ∩ box.
class MovingPolytope {
 public:
  MovingPolytope(Matrix A, Vector b, Matrix D, Polytope box);
  /// K(x) = box for every x.
  static MovingPolytope constant(const Polytope& box);

  int dim() const { return box_.dim(); }
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const Matrix& D() const { return D_; }
  const Polytope& box() const { return box_; }

  /// Halfspace system H y ≤ h of K(x), box rows included.
  void system(const Vector& x, Matrix& H, Vector& h) const;
  /// K(x) as a validated polytope; InputError when empty.
  Polytope at(const Vector& x) const;
  /// x ∈ K(x) within tol.
  bool is_fixed_point(const Vector& x, double tol = 1e-9) const;

 private:
  Matrix A_;
  Vector b_;
  Matrix D_;
  Polytope box_;
};

/// fix K = {x : (A − D) x ≤ b} ∩ box.
Polytope fixed_point_set(const MovingPolytope& K);

/// Polytope-valued operator T.
class PolytopeOperator {
 public:
  enum class Kind { constant, tabulated, normal_base };
  using Fn = std::function<Polytope(const Vector&)>;

  static PolytopeOperator constant(Polytope value);
  /// Value at the nearest site (first one on ties).
  static PolytopeOperator tabulated(std::vector<Vector> sites, std::vector<Polytope> values);
  static PolytopeOperator function(Fn fn, Kind kind = Kind::normal_base);

  Kind kind() const { return kind_; }
  Polytope operator()(const Vector& x) const { return fn_(x); }
  /// x ↦ s·T(x).
  PolytopeOperator scaled(double s) const;

 private:
  PolytopeOperator(Kind kind, Fn fn) : kind_(kind), fn_(std::move(fn)) {}
  Kind kind_;
  Fn fn_;
};

std::string to_string(PolytopeOperator::Kind kind);

struct SolverConfig {
  int starts = 8;               ///< random starting points on top of the start grid
  double start_mesh = 0.25;     ///< start grid mesh as a fraction of the fix K diameter
  int max_iter = 200;
  double gamma = 0.5;           ///< damping
  double mesh = 1.0 / 32.0;     ///< fallback grid mesh as a fraction of the fix K diameter
  double tau_solve = 1e-6;
  std::uint64_t seed = 42;
  bool trace = false;
};

struct GqviInstance {
  MovingPolytope K;
  PolytopeOperator T;
  SolverConfig solver;
  double feas_tol = 1e-9;
};

struct MinimaxResult {
  double value = 0.0;
  Vector y_star;
  Vector xstar;  ///< vertex of T(x) attaining the max at y_star
};

/// min_{y ∈ K(x)} max_j ⟨v_j, y − x⟩ over the vertices v_j of T(x), as one LP.
MinimaxResult minimax_value(const Polytope& Tx, const MovingPolytope& K, const Vector& x);
MinimaxResult minimax_value(const PolytopeOperator& T, const MovingPolytope& K, const Vector& x);

struct SionResult {
  double minmax = 0.0;
  /// max over x* ∈ T(x) of min_{y ∈ K(x)} ⟨x*, y − x⟩ (joint LP over conv T(x)).
  double maxmin = 0.0;
  double gap = 0.0;
  /// The same max restricted to the vertices of T(x).
  double vertex_maxmin = 0.0;
  Vector xstar;  ///< maximizer of the max-min
};

SionResult sion_check(const Polytope& Tx, const MovingPolytope& K, const Vector& x);
SionResult sion_check(const PolytopeOperator& T, const MovingPolytope& K, const Vector& x);

enum class SolveStatus { solved, residual_floor, infeasible };
std::string to_string(SolveStatus s);

struct TraceRow {
  int start = 0;
  int iter = 0;
  Vector x;
  double value = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::infeasible;
  Vector x;
  double residual = 0.0;
  Vector xstar;
  int iterations = 0;
  int starts_run = 0;
  int evaluation_failures = 0;  ///< points where T or K could not be evaluated
  bool from_grid = false;
  double wall_time = 0.0;
  std::vector<TraceRow> trace;
};

/// Damped fixed-point multistart x ← (1−γ)x + γ y*(x), projected onto fix K,
/// with an exhaustive fix-K grid as fallback. Only re-verified points are
/// reported as solved.
SolveReport solve(const GqviInstance& inst);

/// True when x ∈ K(x) within tol and the minimax value is ≥ −tau.
bool verify_solution(const GqviInstance& inst, const Vector& x, double tau, MinimaxResult* out = nullptr);

using ConstraintMap = std::function<Polytope(const Vector&)>;

struct HypothesisCheck {
  std::string name;
  bool pass = true;
  std::string detail;
  Vector witness;  ///< offending point, empty when none
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool all_pass() const;
};

struct HypothesisOptions {
  double mesh_fraction = 1.0 / 64.0;
  int random_points = 100;
  std::vector<double> radii{1e-1, 1e-2, 1e-3};
  double tau_lsc = 1e-2;
  std::uint64_t seed = 42;
};

/// Informational record of the existence hypotheses: bounded and
/// nonempty values, closed convex values, closed fix K, and an inner
/// continuity probe for lower semicontinuity.
HypothesisReport hypothesis_report(const ConstraintMap& K, const Polytope& box,
                                   const HypothesisOptions& opt = {});
HypothesisReport hypothesis_report(const MovingPolytope& K, const HypothesisOptions& opt = {});

}  // namespace adjcone

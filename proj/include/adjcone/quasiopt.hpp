#pragma once

#include <string>
#include <vector>

#include "adjcone/gqvi.hpp"
#include "adjcone/normal_op.hpp"

namespace adjcone {

/// Find x ∈ K(x) with f(x) ≤ f(y) for every y ∈ K(x).
struct QuasioptInstance {
  StepLevelFunction f;
  MovingPolytope K;
  Atlas atlas;
  NormalOpOptions normal;
  SolverConfig solver;
  double tau_opt = 1e-6;
  double verify_mesh = 1.0 / 200.0;  ///< verification grid mesh as a fraction of the fix K diameter
};

/// Rejects instances with unnested f, a box of K outside dom f, empty fix K,
/// or an atlas region outside the box of K.
void validate(const QuasioptInstance& inst);

/// T(x) = [−1,1]^n on argmin f, global_base(atlas, f, x) elsewhere.
/// Evaluation throws InputError at coverage holes.
PolytopeOperator build_T(const StepLevelFunction& f, const Atlas& atlas, const NormalOpOptions& opt = {});

enum class QuasioptStatus { verified, residual_floor, verification_failed, infeasible };
std::string to_string(QuasioptStatus s);

struct QuasioptReport {
  QuasioptStatus status = QuasioptStatus::infeasible;
  Vector x;
  SolveReport gqvi;
  double f_x = 0.0;
  double grid_min = 0.0;      ///< min of f over the verification grid of K(x)
  Vector grid_argmin;
  long grid_points = 0;
  bool argmin_shortcut = false;  ///< x ∈ argmin f ∩ K(x)
  bool witness_in_cone = true;   ///< x* ∈ N^a(x) with ‖x*‖ ≥ τ_zero (off argmin)
  double witness_norm = 0.0;
};

/// Solves GQVI(build_T, K) and verifies f(x) ≤ min f over a grid of K(x) + τ_opt.
QuasioptReport solve_quasiopt(const QuasioptInstance& inst);

/// Minimum of f over the grid of spacing `mesh` anchored at the lower corner
/// of P, together with the vertices of P. Returns the number of points scanned.
long grid_min_f(const StepLevelFunction& f, const Polytope& P, double mesh, double& value, Vector& where);

/// Grid points x of fix K (spacing `mesh`) with x ∈ K(x) and f(x) ≤ f(y) + τ_opt
/// for every grid point y of K(x).
std::vector<Vector> brute_force_quasiopt(const QuasioptInstance& inst, double mesh);

}  // namespace adjcone

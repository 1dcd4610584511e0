#include "adjcone/quasiopt.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "adjcone/parallel.hpp"

namespace adjcone {

namespace {

Polytope dual_box(int n) { return Polytope::box(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)); }

}  // namespace

void validate(const QuasioptInstance& inst) {
  const int n = inst.f.dim();
  if (inst.K.dim() != n) throw InputError("quasiopt: f and K dimensions differ");
  if (inst.atlas.region().dim() != n) throw InputError("quasiopt: atlas dimension differs");
  if (!inst.f.nested()) throw InputError("quasiopt: f must be given by a nested family");
  inst.normal.tol.validate();
  const Polytope& top = inst.f.pieces().back();
  for (const Vector& v : inst.K.box().vertices()) {
    if (!contains(top, v, inst.normal.tol.feas)) throw InputError("quasiopt: box of K leaves dom f");
  }
  for (const Vector& v : inst.atlas.region().vertices()) {
    if (!contains(inst.K.box(), v, inst.normal.tol.feas)) {
      throw InputError("quasiopt: atlas region leaves the box of K");
    }
  }
  fixed_point_set(inst.K);
  if (!(inst.tau_opt >= 0) || !(inst.verify_mesh > 0)) throw InputError("quasiopt: invalid tolerances");
}

PolytopeOperator build_T(const StepLevelFunction& f, const Atlas& atlas, const NormalOpOptions& opt) {
  const Polytope box = dual_box(f.dim());
  return PolytopeOperator::function(
      [&f, &atlas, opt, box](const Vector& x) {
        if (in_argmin(f, x, opt.tol.feas)) return box;
        return global_base(atlas, f, x, opt).base;
      },
      PolytopeOperator::Kind::normal_base);
}

std::string to_string(QuasioptStatus s) {
  switch (s) {
    case QuasioptStatus::verified: return "verified";
    case QuasioptStatus::residual_floor: return "residual_floor";
    case QuasioptStatus::verification_failed: return "verification_failed";
    case QuasioptStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

long grid_min_f(const StepLevelFunction& f, const Polytope& P, double mesh, double& value, Vector& where) {
  std::vector<Vector> pts = region_grid(P, mesh);
  for (const Vector& v : P.vertices()) pts.push_back(v);
  value = kInfinity;
  for (const Vector& y : pts) {
    const double fy = evaluate(f, y);
    if (fy < value) {
      value = fy;
      where = y;
    }
  }
  return static_cast<long>(pts.size());
}

QuasioptReport solve_quasiopt(const QuasioptInstance& inst) {
  validate(inst);
  QuasioptReport rep;
  const GqviInstance g{inst.K, build_T(inst.f, inst.atlas, inst.normal), inst.solver, inst.normal.tol.feas};
  rep.gqvi = solve(g);
  if (rep.gqvi.status == SolveStatus::infeasible) return rep;
  rep.x = rep.gqvi.x;
  if (rep.gqvi.status != SolveStatus::solved) {
    rep.status = QuasioptStatus::residual_floor;
    return rep;
  }
  const Vector& x = rep.x;
  rep.f_x = evaluate(inst.f, x);
  const Polytope Kx = inst.K.at(x);
  const double mesh = inst.verify_mesh * std::max(fixed_point_set(inst.K).diameter_bound(), 1e-12);
  rep.grid_points = grid_min_f(inst.f, Kx, mesh, rep.grid_min, rep.grid_argmin);
  rep.argmin_shortcut = in_argmin(inst.f, x, inst.normal.tol.feas);
  if (!rep.argmin_shortcut) {
    const GeneratedCone N = adjusted_normal_cone(inst.f, x, inst.normal);
    rep.witness_norm = rep.gqvi.xstar.norm();
    rep.witness_in_cone =
        cone_contains(N, rep.gqvi.xstar, inst.normal.tol.cone) && rep.witness_norm >= inst.normal.tol.zero;
  }
  const bool optimal = rep.f_x <= rep.grid_min + inst.tau_opt;
  rep.status = optimal && rep.witness_in_cone ? QuasioptStatus::verified : QuasioptStatus::verification_failed;
  return rep;
}

std::vector<Vector> brute_force_quasiopt(const QuasioptInstance& inst, double mesh) {
  if (!(mesh > 0)) throw InputError("brute_force_quasiopt: mesh must be positive");
  std::optional<Polytope> F;
  try {
    F = fixed_point_set(inst.K);
  } catch (const InputError&) {
    return {};
  }
  const std::vector<Vector> grid = region_grid(*F, mesh);
  std::vector<char> keep(grid.size(), 0);
  const double feas = inst.normal.tol.feas;
  parallel_for(grid.size(), [&](std::size_t i) {
    const Vector& x = grid[i];
    if (!inst.K.is_fixed_point(x, feas)) return;
    const double fx = evaluate(inst.f, x, feas);
    if (fx == inst.f.levels().front()) {
      keep[i] = 1;
      return;
    }
    const Polytope Kx = inst.K.at(x);
    for (const Vector& y : region_grid(Kx, mesh)) {
      if (fx > evaluate(inst.f, y, feas) + inst.tau_opt) return;
    }
    keep[i] = 1;
  });
  std::vector<Vector> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (keep[i]) out.push_back(grid[i]);
  }
  return out;
}

}  // namespace adjcone

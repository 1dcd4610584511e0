#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "adjcone/polytope.hpp"
#include "adjcone/quasiconvex.hpp"

namespace adjcone {

struct NormalOpOptions {
  Tolerances tol;
  int verify_samples = 1000;    ///< sampled points of S^a used to verify N^a
  int fallback_directions = 64; ///< sample cap for the polar fallback when dim ≥ 3
  std::uint64_t seed = 42;
};

/// N^<(x): polar of S^<_{f(x)} − x, from the vertices of the strict pieces.
GeneratedCone strict_normal_cone(const StepLevelFunction& f, const Vector& x,
                                 const NormalOpOptions& opt = {});

struct AdjustedCone {
  GeneratedCone cone;
  bool fallback = false;      ///< polar of sampled directions replaced the sum rule
  int verified_points = 0;
  double worst_violation = 0.0;  ///< max ⟨g, y − x⟩ over the verification sample
};

/// N^a(x). Off argmin: active facet normals of S_{f(x)} plus the enlargement
/// ray (x − p)/ρ_x, verified by sampling S^a_f(x). At argmin points: active
/// facet normals of S_{f(x)}, verified on its vertices.
AdjustedCone adjusted_normal_cone_detail(const StepLevelFunction& f, const Vector& x,
                                         const NormalOpOptions& opt = {});
GeneratedCone adjusted_normal_cone(const StepLevelFunction& f, const Vector& x,
                                   const NormalOpOptions& opt = {});

/// Convex hull of the unit generators of N^a(x).
Polytope normalized_base(const StepLevelFunction& f, const Vector& x, const NormalOpOptions& opt = {});

struct LocalChart {
  Vector z;
  double lambda = 0.0;  ///< chart level, below f(z)
  Vector z0;            ///< Chebyshev center of the strict sublevel polytope
  double r_c = 0.0;     ///< its Chebyshev radius
  double eps = 0.0;
  Vector c;             ///< z − z0, normal of the section hyperplane
};

LocalChart build_chart(const StepLevelFunction& f, const Vector& z, double tol = 1e-9);

/// Section of N^a(x) by {x* : ⟨x*, c⟩ = ε}.
Polytope chart_base(const LocalChart& chart, const GeneratedCone& cone, double tol = 1e-9);
Polytope chart_base(const LocalChart& chart, const StepLevelFunction& f, const Vector& x,
                    const NormalOpOptions& opt = {});

/// Charts with hat bumps d_i(x) = max(0, ε_i − ‖x − z_i‖) and the partition
/// of unity λ_i = d_i / Σ_j d_j.
class Atlas {
 public:
  Atlas(std::vector<LocalChart> charts, Polytope region, double cover_step);

  const std::vector<LocalChart>& charts() const { return charts_; }
  const Polytope& region() const { return region_; }
  double cover_step() const { return cover_step_; }

  double bump(std::size_t i, const Vector& x) const;
  /// Active charts with their weights, in chart order; empty on a coverage hole.
  std::vector<std::pair<int, double>> weights(const Vector& x) const;

 private:
  std::vector<LocalChart> charts_;
  Polytope region_;
  double cover_step_;
};

/// Points of `region` on the axis grid of spacing `mesh` anchored at the
/// region's lower corner.
std::vector<Vector> region_grid(const Polytope& region, double mesh);

struct AtlasOptions {
  std::size_t max_charts = 20000;
  double tol = 1e-9;
};

/// Charts at the grid of spacing `cover_step`, densified greedily until every
/// point of the verification grid (mesh cover_step/4) has positive bump sum.
/// The region must stay at distance ≥ cover_step from argmin f.
Atlas build_atlas(const StepLevelFunction& f, const Polytope& region, double cover_step,
                  const AtlasOptions& opt = {});

struct BaseResult {
  Polytope base;
  std::vector<std::pair<int, double>> active;
  GeneratedCone cone;
  double min_norm = 0.0;
  double max_norm = 0.0;
};

/// A(x) = Σ λ_i(x) A_i(x), with its invariants verified: vertices in the
/// dual unit ball, min-norm point at least τ_zero, and cone(A(x)) = N^a(x).
BaseResult global_base(const Atlas& atlas, const StepLevelFunction& f, const Vector& x,
                       const NormalOpOptions& opt = {});

/// Cone generated by a polytope's vertices.
GeneratedCone cone_from(const Polytope& base);

}  // namespace adjcone

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "adjcone/normal_op.hpp"

namespace adjcone {

using PolytopeMap = std::function<Polytope(const Vector&)>;
using ConeMap = std::function<GeneratedCone(const Vector&)>;
using PointSampler = std::function<Vector(std::mt19937_64&)>;

struct UscOptions {
  std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
  int samples_per_radius = 16;  ///< random ball points, on top of the 2n axis points
  std::uint64_t seed = 42;
  double tau = 1e-6;
};

/// Upper-Hausdorff deviation curve of a polytope-valued map at x.
struct UscReport {
  Vector x;
  std::vector<double> radii;
  std::vector<double> deviation;
  int holes = 0;  ///< samples where the map was undefined
  bool monotone = true;
  bool pass = false;
};

UscReport usc_probe(const PolytopeMap& map, const Vector& x, const UscOptions& opt = {});

struct ClosednessOptions {
  int sequences = 1000;
  int terms = 6;  ///< x_k = x + 10^{-k} u, k = 1..terms
  double tau_cluster = 1e-3;
  double tau_cone = 1e-6;
  std::uint64_t seed = 42;
};

struct ClosednessWitness {
  Vector direction;  ///< approach direction u
  Vector limit;      ///< accumulated unit normal
};

struct ClosednessReport {
  long sequences = 0;
  long settled = 0;  ///< sequences whose tail clustered
  long holes = 0;    ///< sequence terms where the map was undefined
  std::vector<ClosednessWitness> violations;
  bool pass = true;
};

/// Along x_k → x, selects the unit generator of N(x_k) best aligned with a
/// random direction; the limit of a clustered tail, extrapolated from its
/// last two terms, must lie in N(x).
ClosednessReport closedness_probe(const ConeMap& map, const Vector& x, const ClosednessOptions& opt = {});
ClosednessReport closedness_probe(const StepLevelFunction& f, const Vector& x,
                                  const ClosednessOptions& opt = {}, const NormalOpOptions& nopt = {});

struct QuasimonotoneOptions {
  int pairs = 1000;
  double tau_cone = 1e-6;
  std::uint64_t seed = 42;
};

struct QuasimonotoneViolation {
  Vector x, y, xstar, ystar;
};

struct QuasimonotoneReport {
  long pairs = 0;
  std::vector<QuasimonotoneViolation> violations;
  bool pass = true;
};

/// Checks ⟨x*, y−x⟩ > τ ⟹ ⟨y*, y−x⟩ ≥ −τ over generator pairs of sampled
/// points.
QuasimonotoneReport quasimonotonicity_probe(const ConeMap& map, const PointSampler& sampler,
                                            const QuasimonotoneOptions& opt = {});
/// Pairs drawn from dom f \ argmin f, with N = N^a.
QuasimonotoneReport quasimonotonicity_probe(const StepLevelFunction& f, const QuasimonotoneOptions& opt = {},
                                            const NormalOpOptions& nopt = {});

}  // namespace adjcone

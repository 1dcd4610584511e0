#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "adjcone/types.hpp"

namespace adjcone {

/// Bounded, nonempty convex polyhedron {x : A x <= b} in R^n.
///
/// Rows are stored unit-normalized. Construction from halfspaces validates
/// nonemptiness and boundedness by linear programming and records the
/// bounding box and a Chebyshev center. Construction from points builds the
/// convex hull (with equality pairs for lower-dimensional hulls) and keeps
/// the extreme points as cached vertices.
///
/// Values are immutable; copies share a lazily filled vertex cache, which is
/// safe for concurrent readers.
class Polytope {
 public:
  static Polytope from_halfspaces(const Matrix& A, const Vector& b);
  /// Same as above, with a vertex list supplied by the caller. Each vertex
  /// must satisfy every halfspace within `feas_tol`.
  static Polytope from_halfspaces(const Matrix& A, const Vector& b,
                                  const std::vector<Vector>& vertices,
                                  double feas_tol = 1e-9);
  static Polytope from_points(std::span<const Vector> points);
  static Polytope box(const Vector& lo, const Vector& hi);
  static Polytope point(const Vector& p);

  int dim() const { return static_cast<int>(A_.cols()); }
  int num_halfspaces() const { return static_cast<int>(A_.rows()); }
  const Matrix& normals() const { return A_; }
  const Vector& offsets() const { return b_; }

  const Vector& lower() const { return lo_; }
  const Vector& upper() const { return hi_; }
  /// Chebyshev center; any feasible point for lower-dimensional polytopes.
  const Vector& center() const { return center_; }
  /// Radius of the largest inscribed ball (0 when not full-dimensional).
  double inradius() const { return inradius_; }
  double diameter_bound() const { return (hi_ - lo_).norm(); }

  /// Irredundant vertex list, computed on first use.
  const std::vector<Vector>& vertices() const;

 private:
  struct VertexCache;

  Polytope() = default;
  void compute_chebyshev();

  Matrix A_;
  Vector b_;
  Vector lo_, hi_, center_;
  double inradius_ = 0.0;
  std::shared_ptr<VertexCache> cache_;
};

/// Finitely generated convex cone {sum_k t_k g_k : t_k >= 0}. An empty
/// generator list is the trivial cone {0}.
class GeneratedCone {
 public:
  GeneratedCone(int dim, std::vector<Vector> generators, double min_norm = 1e-12);

  int dim() const { return dim_; }
  const std::vector<Vector>& generators() const { return gens_; }
  bool is_trivial() const { return gens_.empty(); }

  /// Same cone with unit generators, duplicates and redundant generators
  /// removed.
  GeneratedCone pruned(double tol = 1e-9) const;

 private:
  int dim_;
  std::vector<Vector> gens_;
};

struct Projection {
  Vector point;
  double distance = 0.0;
};

/// Proper face as the set of halfspaces active on all of it.
struct Face {
  std::vector<int> halfspaces;
  std::vector<int> vertices;  ///< indices into vertices(P)
  int dim = 0;
};

struct WeightedTerm {
  double weight;
  Polytope set;
};

bool contains(const Polytope& P, const Vector& x, double tol = 1e-9);

/// Euclidean projection by a primal active-set method with a 10*(#rows)
/// pivot cap; Dykstra's alternating projections take over if the cap is hit.
Projection project(const Polytope& P, const Vector& x, double tol = 1e-9);

bool enlarged_contains(const Polytope& P, double r, const Vector& x, double tol = 1e-9);

/// Vertex enumeration over all dim-subsets of halfspaces (dim <= 4).
std::vector<Vector> vertices(const Polytope& P);

/// Halfspaces active on every vertex (implicit equalities of the affine hull).
std::vector<int> implicit_equalities(const Polytope& P, double tol = 1e-9);

/// Affine dimension of P.
int affine_dim(const Polytope& P, double tol = 1e-9);

std::vector<Face> proper_faces(const Polytope& P, double tol = 1e-9);

bool is_inside_point(const Polytope& P, const Vector& x, double tol = 1e-9);

/// Polytopes are closed and convex, so they always belong to the class of
/// convex sets that contain the inside points of their closure.
bool in_class_D(const Polytope& P);

Polytope weighted_minkowski(std::span<const WeightedTerm> terms);

bool cone_contains(const GeneratedCone& K, const Vector& v, double tol = 1e-6);

/// Mutual containment of generators.
bool cones_equal(const GeneratedCone& K1, const GeneratedCone& K2, double tol = 1e-6);

/// Section of K by the hyperplane {x* : <x*, c> = level}.
Polytope cone_section(const GeneratedCone& K, const Vector& c, double level);

/// Polar {v : <v, d> <= 0 for all directions d} as a generated cone.
GeneratedCone polar_cone(int dim, std::span<const Vector> directions, double tol = 1e-10);

/// Extreme points of the convex hull of `points` (duplicates merged).
std::vector<Vector> extreme_points(std::span<const Vector> points);

constexpr int kMaxEnumerationDim = 4;
constexpr double kMinkowskiScaleBound = 1e5;

}  // namespace adjcone

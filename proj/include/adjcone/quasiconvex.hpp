#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "adjcone/polytope.hpp"

namespace adjcone {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Quasiconvex function given by a nested family P_0 ⊆ ... ⊆ P_m with levels
/// λ_0 < ... < λ_m: f(x) = min{λ_j : x ∈ P_j}, +∞ outside P_m.
///
/// A family that fails the nestedness check is rejected unless
/// `allow_unnested` is set. Unnested families keep the same formula for f;
/// their level sets are unions of pieces, so `sublevel` and
/// `strict_sublevel` (which return a single polytope) refuse them, while
/// evaluation, ρ and adjusted-set membership use the union semantics.
class StepLevelFunction {
 public:
  StepLevelFunction(std::vector<double> levels, std::vector<Polytope> pieces,
                    bool allow_unnested = false, double tol = 1e-9);

  int dim() const { return pieces_.front().dim(); }
  int size() const { return static_cast<int>(pieces_.size()); }
  const std::vector<double>& levels() const { return levels_; }
  const std::vector<Polytope>& pieces() const { return pieces_; }
  bool nested() const { return nested_; }
  /// Every piece has nonempty interior.
  bool full_dimensional() const { return full_dimensional_; }

  /// Least j with x ∈ P_j, or -1 outside the domain.
  int level_index(const Vector& x, double tol = 1e-9) const;
  /// Indices j with λ_j < λ (the pieces whose union is S^<_λ).
  std::vector<int> strict_indices(double lambda) const;
  /// Indices j with λ_j ≤ λ.
  std::vector<int> sublevel_indices(double lambda) const;

  /// Bounding box of the domain.
  const Vector& domain_lower() const { return lo_; }
  const Vector& domain_upper() const { return hi_; }

 private:
  std::vector<double> levels_;
  std::vector<Polytope> pieces_;
  bool nested_ = true;
  bool full_dimensional_ = true;
  Vector lo_, hi_;
};

/// Function given by an evaluator on an axis box, +∞ outside the box.
class AnalyticFunction {
 public:
  using Evaluator = std::function<double(const Vector&)>;

  AnalyticFunction(std::string name, Evaluator fn, Polytope box, bool advertised_quasiconvex);

  /// Registered functions: "two_wells" |‖x‖²−1|, "max_abs" max|x_i|, "norm" ‖x‖.
  static AnalyticFunction registered(const std::string& name, const Polytope& box);

  double operator()(const Vector& x) const;
  int dim() const { return box_.dim(); }
  const std::string& name() const { return name_; }
  const Polytope& box() const { return box_; }
  bool advertised_quasiconvex() const { return advertised_; }

 private:
  std::string name_;
  Evaluator fn_;
  Polytope box_;
  bool advertised_;
};

struct LevelSet {
  enum class Kind { sublevel, strict_sublevel };
  Kind kind = Kind::sublevel;
  std::optional<Polytope> realization;  ///< empty set when absent
  bool closed = true;                   ///< step-function level sets are closed

  bool empty() const { return !realization.has_value(); }
};

double evaluate(const StepLevelFunction& f, const Vector& x, double tol = 1e-9);
double evaluate(const AnalyticFunction& f, const Vector& x);

LevelSet sublevel(const StepLevelFunction& f, double lambda);
LevelSet strict_sublevel(const StepLevelFunction& f, double lambda);

bool in_argmin(const StepLevelFunction& f, const Vector& x, double tol = 1e-9);

/// Distance from y to S^<_λ (union of the strict pieces) and a nearest point.
/// Distance is +∞ when S^<_λ is empty.
Projection strict_projection(const StepLevelFunction& f, double lambda, const Vector& y,
                             double tol = 1e-9);

/// ρ_x = dist(x, S^<_{f(x)}).
double rho(const StepLevelFunction& f, const Vector& x, double tol = 1e-9);

/// S^a_f(x) for a fixed base point, prepared once for repeated membership
/// queries. Keeps a reference to `f`.
class AdjustedSet {
 public:
  AdjustedSet(const StepLevelFunction& f, const Vector& x, double tol = 1e-9);

  bool contains(const Vector& y) const;
  /// Positive lower bound on how far y is from S^a_f(x) when outside;
  /// at most `tol` when inside.
  double excess(const Vector& y) const;

  const Vector& base() const { return x_; }
  double level() const { return level_; }
  bool at_argmin() const { return argmin_; }
  /// ρ_x; zero at argmin points where it is not defined.
  double radius() const { return rho_; }
  /// Nearest point of S^<_{f(x)} to x (undefined at argmin points).
  const Vector& anchor() const { return anchor_; }
  /// Indices of the pieces whose union is S_{f(x)}.
  const std::vector<int>& sublevel_pieces() const { return sub_; }
  const std::vector<int>& strict_pieces() const { return strict_; }

 private:
  const StepLevelFunction* f_;
  Vector x_;
  double tol_;
  double level_ = 0.0;
  bool argmin_ = false;
  double rho_ = 0.0;
  Vector anchor_;
  std::vector<int> sub_, strict_;
};

bool adjusted_contains(const StepLevelFunction& f, const Vector& x, const Vector& y,
                       double tol = 1e-9);

/// Estimate of ρ for analytic functions: dist(x, S_{f(x)−δ}) on a grid, for
/// each δ of the ladder. `value` is the estimate at the smallest δ and
/// `spread` the range across the ladder.
struct RhoEstimate {
  double value = 0.0;
  double spread = 0.0;
  std::vector<double> deltas;
  std::vector<double> values;
  double grid_step = 0.0;
};

RhoEstimate analytic_rho(const AnalyticFunction& f, const Vector& x, int grid_per_axis = 0);

struct SamplingPlan {
  int base_points = 1000;
  int pairs = 100;
  std::uint64_t seed = 42;
  int grid_per_axis = 0;  ///< analytic grids; 0 picks a size from the dimension
};

/// Violating triple: for quasiconvexity `a`, `b`, `t` with
/// f(t a + (1−t) b) > max(f(a), f(b)); for adjusted convexity the same
/// segment inside S^a_f(base) whose point leaves it.
struct SegmentWitness {
  Vector base;
  Vector a, b;
  double t = 0.5;
  double excess = 0.0;
};

struct Verdict {
  bool pass = true;
  std::optional<SegmentWitness> witness;
  long checks = 0;
};

Verdict quasiconvexity_check(const StepLevelFunction& f, const SamplingPlan& plan, double tol = 1e-9);
Verdict quasiconvexity_check(const AnalyticFunction& f, const SamplingPlan& plan, double tol = 1e-9);
Verdict adjusted_convexity_check(const StepLevelFunction& f, const SamplingPlan& plan, double tol = 1e-9);
Verdict adjusted_convexity_check(const AnalyticFunction& f, const SamplingPlan& plan, double tol = 1e-9);

/// Rejection sample of a point of the domain (or of a union of pieces).
std::optional<Vector> sample_union(const StepLevelFunction& f, const std::vector<int>& pieces,
                                   std::mt19937_64& rng, int max_attempts = 10000);

}  // namespace adjcone

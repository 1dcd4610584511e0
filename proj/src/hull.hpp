#pragma once

#include <functional>
#include <span>
#include <vector>

#include "adjcone/types.hpp"

namespace adjcone::detail {

struct HullData {
  Matrix A;  // unit rows
  Vector b;
  std::vector<Vector> extreme;
  int affine_dim = 0;
};

/// Convex hull of a finite point set in R^n (n <= 4 for the facet search).
/// Lower-dimensional hulls are described by equality pairs for the
/// orthogonal complement of their affine hull plus facets inside it.
HullData convex_hull(std::span<const Vector> points);

/// Points with pairwise distance > radius (first occurrence kept).
std::vector<Vector> merge_close(std::span<const Vector> points, double radius);

/// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn);

}  // namespace adjcone::detail

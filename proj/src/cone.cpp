#include <algorithm>
#include <cmath>

#include "adjcone/lp.hpp"
#include "adjcone/polytope.hpp"
#include "hull.hpp"

namespace adjcone {

GeneratedCone::GeneratedCone(int dim, std::vector<Vector> generators, double min_norm)
    : dim_(dim), gens_(std::move(generators)) {
  if (dim <= 0) throw InputError("GeneratedCone: dimension must be positive");
  for (const Vector& g : gens_) {
    require_dim(g, dim, "GeneratedCone generator");
    if (!(g.norm() >= min_norm)) throw InputError("GeneratedCone: generator below minimum norm");
  }
}

GeneratedCone GeneratedCone::pruned(double tol) const {
  std::vector<Vector> unit;
  for (const Vector& g : gens_) {
    const Vector u = g.normalized();
    bool dup = false;
    for (const Vector& w : unit) {
      if ((w - u).norm() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) unit.push_back(u);
  }
  // Drop generators that are nonnegative combinations of the others.
  for (size_t i = 0; i < unit.size();) {
    std::vector<Vector> others;
    for (size_t j = 0; j < unit.size(); ++j) {
      if (j != i) others.push_back(unit[j]);
    }
    if (!others.empty() && cone_contains(GeneratedCone(dim_, others), unit[i], tol)) {
      unit.erase(unit.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  return GeneratedCone(dim_, std::move(unit));
}

bool cone_contains(const GeneratedCone& K, const Vector& v, double tol) {
  require_dim(v, K.dim(), "cone_contains");
  const double nv = v.norm();
  if (nv <= tol) return true;
  const Vector u = v / nv;
  const auto& G = K.generators();
  if (G.empty()) return false;

  // min s  s.t.  -s <= (sum_k t_k g_k - u)_j <= s,  t, s >= 0
  const int k = static_cast<int>(G.size());
  const int n = K.dim();
  LinearProgram lp(k + 1);
  Vector c = Vector::Zero(k + 1);
  c[k] = 1.0;
  lp.set_objective(c);
  for (int j = 0; j < n; ++j) {
    Vector row(k + 1);
    for (int i = 0; i < k; ++i) row[i] = G[i][j] / G[i].norm();
    row[k] = -1.0;
    lp.add_le(row, u[j]);
    Vector row2 = -row;
    row2[k] = -1.0;
    lp.add_le(row2, -u[j]);
  }
  const LpResult res = lp.minimize();
  if (!res.ok()) throw NumericalError(std::string("cone_contains: LP ") + to_string(res.status));
  return res.objective <= tol;
}

bool cones_equal(const GeneratedCone& K1, const GeneratedCone& K2, double tol) {
  for (const Vector& g : K1.generators()) {
    if (!cone_contains(K2, g, tol)) return false;
  }
  for (const Vector& g : K2.generators()) {
    if (!cone_contains(K1, g, tol)) return false;
  }
  return true;
}

Polytope cone_section(const GeneratedCone& K, const Vector& c, double level) {
  require_dim(c, K.dim(), "cone_section");
  if (K.is_trivial()) throw InputError("cone_section: trivial cone has no base");
  if (!(level > 0)) throw InputError("cone_section: level must be positive");
  std::vector<Vector> pts;
  for (const Vector& g : K.generators()) {
    const double s = g.dot(c);
    if (!(s > 0)) {
      throw NumericalError("cone_section: generator not strictly on the positive side of the section normal");
    }
    pts.push_back(level * g / s);
  }
  return Polytope::from_points(pts);
}

GeneratedCone polar_cone(int dim, std::span<const Vector> directions, double tol) {
  std::vector<Vector> dirs;
  for (const Vector& d : directions) {
    require_dim(d, dim, "polar_cone");
    if (d.norm() > tol) dirs.push_back(d.normalized());
  }
  std::vector<Vector> gens;
  if (dirs.empty()) {
    for (int k = 0; k < dim; ++k) {
      gens.push_back(Vector::Unit(dim, k));
      gens.push_back(-Vector::Unit(dim, k));
    }
    return GeneratedCone(dim, gens);
  }

  // Lineality space L = {v : <v, d> = 0 for all d}; the remaining part lives
  // in L-perp where the polar is pointed.
  Matrix D(static_cast<int>(dirs.size()), dim);
  for (size_t i = 0; i < dirs.size(); ++i) D.row(i) = dirs[i].transpose();
  Eigen::JacobiSVD<Matrix> svd(D, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-9 * std::max(1.0, sv[0])) ++r;
  }
  const Matrix V = svd.matrixV();
  for (int j = r; j < dim; ++j) {
    gens.push_back(V.col(j));
    gens.push_back(-V.col(j));
  }
  const Matrix Q = V.leftCols(r);  // basis of L-perp
  std::vector<Vector> red;
  for (const Vector& d : dirs) red.push_back(Q.transpose() * d);

  auto feasible = [&](const Vector& w) {
    for (const Vector& d : red) {
      if (w.dot(d) > tol) return false;
    }
    return true;
  };
  std::vector<Vector> rays;
  auto push_ray = [&](const Vector& w) {
    const Vector u = w.normalized();
    for (const Vector& e : rays) {
      if ((e - u).norm() <= 1e-9) return;
    }
    rays.push_back(u);
  };
  if (r == 1) {
    for (double s : {1.0, -1.0}) {
      const Vector w = Vector::Constant(1, s);
      if (feasible(w)) push_ray(w);
    }
  } else {
    // Extreme rays of a pointed cone in R^r sit on r-1 independent facets.
    detail::for_each_combination(static_cast<int>(red.size()), r - 1, [&](const std::vector<int>& idx) {
      Matrix E(r - 1, r);
      for (int j = 0; j < r - 1; ++j) E.row(j) = red[idx[j]].transpose();
      Eigen::JacobiSVD<Matrix> esvd(E, Eigen::ComputeFullV);
      const Vector& es = esvd.singularValues();
      if (es[r - 2] <= 1e-9 * std::max(1.0, es[0])) return;
      const Vector w = esvd.matrixV().col(r - 1);
      if (feasible(w)) push_ray(w);
      if (feasible(-w)) push_ray(-w);
    });
  }
  for (const Vector& w : rays) gens.push_back(Q * w);
  return GeneratedCone(dim, gens);
}

}  // namespace adjcone

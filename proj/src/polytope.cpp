#include "adjcone/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "adjcone/lp.hpp"
#include "hull.hpp"

namespace adjcone {

struct Polytope::VertexCache {
  std::once_flag once;
  std::vector<Vector> vertices;
};

namespace {

std::vector<Vector> enumerate_vertices(const Matrix& A, const Vector& b) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  if (n > kMaxEnumerationDim) {
    throw InputError("vertex enumeration supports dimension <= 4");
  }
  std::vector<Vector> out;
  detail::for_each_combination(m, n, [&](const std::vector<int>& idx) {
    Matrix S(n, n);
    Vector rhs(n);
    for (int j = 0; j < n; ++j) {
      S.row(j) = A.row(idx[j]);
      rhs[j] = b[idx[j]];
    }
    Eigen::FullPivLU<Matrix> lu(S);
    lu.setThreshold(1e-10);
    if (lu.rank() < n) return;
    const Vector v = lu.solve(rhs);
    if ((A * v - b).maxCoeff() > 1e-9) return;
    for (const Vector& w : out) {
      if ((w - v).norm() <= 1e-9) return;
    }
    out.push_back(v);
  });
  return out;
}

}  // namespace

Polytope Polytope::from_halfspaces(const Matrix& A, const Vector& b) {
  if (A.cols() <= 0) throw InputError("Polytope: dimension must be positive");
  if (A.rows() != b.size()) throw InputError("Polytope: A and b row counts differ");
  const int n = static_cast<int>(A.cols());

  std::vector<int> keep;
  for (int i = 0; i < A.rows(); ++i) {
    const double nr = A.row(i).norm();
    if (!std::isfinite(nr) || !std::isfinite(b[i])) {
      throw InputError("Polytope: non-finite halfspace data");
    }
    if (nr < 1e-14) {
      if (b[i] < -1e-12) throw InputError("Polytope: empty (contradictory zero row)");
      continue;
    }
    keep.push_back(i);
  }

  Polytope P;
  P.A_.resize(static_cast<int>(keep.size()), n);
  P.b_.resize(static_cast<int>(keep.size()));
  for (size_t r = 0; r < keep.size(); ++r) {
    const double nr = A.row(keep[r]).norm();
    P.A_.row(r) = A.row(keep[r]) / nr;
    P.b_[r] = b[keep[r]] / nr;
  }
  P.cache_ = std::make_shared<VertexCache>();
  P.compute_chebyshev();

  P.lo_.resize(n);
  P.hi_.resize(n);
  for (int k = 0; k < n; ++k) {
    for (int sgn : {1, -1}) {
      LinearProgram lp(n);
      lp.set_all_free();
      Vector c = Vector::Zero(n);
      c[k] = sgn;
      lp.set_objective(c);
      for (int i = 0; i < P.A_.rows(); ++i) lp.add_le(P.A_.row(i).transpose(), P.b_[i]);
      const LpResult res = lp.minimize();
      if (res.status == LpStatus::unbounded) throw InputError("Polytope: unbounded");
      if (!res.ok()) throw NumericalError(std::string("Polytope: bounding LP ") + to_string(res.status));
      if (sgn > 0) {
        P.lo_[k] = res.x[k];
      } else {
        P.hi_[k] = res.x[k];
      }
    }
  }
  return P;
}

Polytope Polytope::from_halfspaces(const Matrix& A, const Vector& b,
                                   const std::vector<Vector>& verts, double feas_tol) {
  Polytope P = from_halfspaces(A, b);
  for (const Vector& v : verts) {
    require_dim(v, P.dim(), "Polytope vertex");
    if (!contains(P, v, feas_tol)) {
      throw InputError("Polytope: supplied vertex violates a halfspace");
    }
  }
  std::call_once(P.cache_->once, [&] { P.cache_->vertices = verts; });
  return P;
}

Polytope Polytope::from_points(std::span<const Vector> points) {
  detail::HullData h = detail::convex_hull(points);
  const int n = static_cast<int>(points.front().size());
  Polytope P;
  P.A_ = std::move(h.A);
  P.b_ = std::move(h.b);
  P.lo_ = Vector::Constant(n, std::numeric_limits<double>::infinity());
  P.hi_ = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  P.center_ = Vector::Zero(n);
  for (const Vector& v : h.extreme) {
    P.lo_ = P.lo_.cwiseMin(v);
    P.hi_ = P.hi_.cwiseMax(v);
    P.center_ += v;
  }
  P.center_ /= static_cast<double>(h.extreme.size());
  P.cache_ = std::make_shared<VertexCache>();
  std::call_once(P.cache_->once, [&] { P.cache_->vertices = std::move(h.extreme); });
  if (h.affine_dim == n) P.compute_chebyshev();
  return P;
}

Polytope Polytope::box(const Vector& lo, const Vector& hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw InputError("box: bad bounds");
  if ((hi - lo).minCoeff() < 0) throw InputError("box: lower bound exceeds upper bound");
  const int n = static_cast<int>(lo.size());
  Polytope P;
  P.A_ = Matrix::Zero(2 * n, n);
  P.b_.resize(2 * n);
  for (int k = 0; k < n; ++k) {
    P.A_(2 * k, k) = 1.0;
    P.b_[2 * k] = hi[k];
    P.A_(2 * k + 1, k) = -1.0;
    P.b_[2 * k + 1] = -lo[k];
  }
  P.lo_ = lo;
  P.hi_ = hi;
  P.center_ = 0.5 * (lo + hi);
  P.inradius_ = 0.5 * (hi - lo).minCoeff();
  P.cache_ = std::make_shared<VertexCache>();
  return P;
}

Polytope Polytope::point(const Vector& p) { return box(p, p); }

void Polytope::compute_chebyshev() {
  const int n = dim();
  LinearProgram lp(n + 1);
  for (int k = 0; k < n; ++k) lp.set_free(k);
  Vector c = Vector::Zero(n + 1);
  c[n] = -1.0;
  lp.set_objective(c);
  for (int i = 0; i < A_.rows(); ++i) {
    Vector row(n + 1);
    row.head(n) = A_.row(i).transpose();
    row[n] = 1.0;
    lp.add_le(row, b_[i]);
  }
  const LpResult res = lp.minimize();
  if (res.status == LpStatus::infeasible) throw InputError("Polytope: empty");
  if (res.status == LpStatus::unbounded) throw InputError("Polytope: unbounded");
  if (!res.ok()) throw NumericalError(std::string("Polytope: Chebyshev LP ") + to_string(res.status));
  center_ = res.x.head(n);
  inradius_ = std::max(res.x[n], 0.0);
}

const std::vector<Vector>& Polytope::vertices() const {
  std::call_once(cache_->once, [this] { cache_->vertices = enumerate_vertices(A_, b_); });
  return cache_->vertices;
}

bool contains(const Polytope& P, const Vector& x, double tol) {
  require_dim(x, P.dim(), "contains");
  if (P.num_halfspaces() == 0) return true;
  return (P.normals() * x - P.offsets()).maxCoeff() <= tol;
}

namespace {

Vector dykstra(const Matrix& A, const Vector& b, const Vector& x) {
  const int m = static_cast<int>(A.rows());
  Vector y = x;
  std::vector<Vector> incr(m, Vector::Zero(x.size()));
  for (int sweep = 0; sweep < 200000; ++sweep) {
    const Vector prev = y;
    for (int i = 0; i < m; ++i) {
      const Vector z = y + incr[i];
      const double v = A.row(i).dot(z) - b[i];
      const Vector pz = v > 0 ? Vector(z - v * A.row(i).transpose()) : z;
      incr[i] = z - pz;
      y = pz;
    }
    if ((y - prev).norm() <= 1e-15 * (1.0 + y.norm())) break;
  }
  return y;
}

}  // namespace

Projection project(const Polytope& P, const Vector& x, double tol) {
  require_dim(x, P.dim(), "project");
  const Matrix& A = P.normals();
  const Vector& b = P.offsets();
  const int m = static_cast<int>(A.rows());
  if (m == 0 || (A * x - b).maxCoeff() <= 0.0) return {x, 0.0};

  Vector y = P.center();
  std::vector<int> work;
  std::vector<bool> in_work(m, false);
  bool converged = false;
  const int cap = 10 * m + 10;
  for (int it = 0; it < cap; ++it) {
    const Vector g = y - x;
    Vector p = -g;
    Vector mu;
    if (!work.empty()) {
      Matrix At(P.dim(), static_cast<int>(work.size()));
      for (size_t j = 0; j < work.size(); ++j) At.col(j) = A.row(work[j]).transpose();
      mu = At.colPivHouseholderQr().solve(-g);
      p = -g - At * mu;
    }
    if (p.norm() <= 1e-13 * (1.0 + g.norm())) {
      int worst = -1;
      double worst_mu = -1e-12;
      for (size_t j = 0; j < work.size(); ++j) {
        if (mu[j] < worst_mu) {
          worst_mu = mu[j];
          worst = static_cast<int>(j);
        }
      }
      if (worst < 0) {
        converged = true;
        break;
      }
      in_work[work[worst]] = false;
      work.erase(work.begin() + worst);
      continue;
    }
    double alpha = 1.0;
    int block = -1;
    for (int i = 0; i < m; ++i) {
      if (in_work[i]) continue;
      const double ap = A.row(i).dot(p);
      if (ap <= 1e-14) continue;
      const double slack = std::max(0.0, b[i] - A.row(i).dot(y));
      const double step = slack / ap;
      if (step < alpha) {
        alpha = step;
        block = i;
      }
    }
    y += alpha * p;
    if (block >= 0) {
      work.push_back(block);
      in_work[block] = true;
    }
  }
  if (!converged) y = dykstra(A, b, x);
  const double viol = (A * y - b).maxCoeff();
  if (viol > tol) {
    throw NumericalError("project: no feasible projection within tolerance (residual " +
                         std::to_string(viol) + ")");
  }
  return {y, (x - y).norm()};
}

bool enlarged_contains(const Polytope& P, double r, const Vector& x, double tol) {
  if (r < 0) throw InputError("enlarged_contains: negative radius");
  return project(P, x, tol).distance <= r + tol;
}

std::vector<Vector> vertices(const Polytope& P) { return P.vertices(); }

std::vector<int> implicit_equalities(const Polytope& P, double tol) {
  const auto& V = P.vertices();
  std::vector<int> out;
  for (int i = 0; i < P.num_halfspaces(); ++i) {
    bool all = true;
    for (const Vector& v : V) {
      if (std::abs(P.normals().row(i).dot(v) - P.offsets()[i]) > tol) {
        all = false;
        break;
      }
    }
    if (all) out.push_back(i);
  }
  return out;
}

namespace {

int rank_of_points(const std::vector<Vector>& pts, double tol) {
  if (pts.size() <= 1) return 0;
  Matrix M(pts.front().size(), static_cast<int>(pts.size()) - 1);
  for (size_t i = 1; i < pts.size(); ++i) M.col(i - 1) = pts[i] - pts[0];
  Eigen::FullPivLU<Matrix> lu(M);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

}  // namespace

int affine_dim(const Polytope& P, double tol) { return rank_of_points(P.vertices(), std::max(tol, 1e-9)); }

std::vector<Face> proper_faces(const Polytope& P, double tol) {
  const auto& V = P.vertices();
  const int nv = static_cast<int>(V.size());
  const int m = P.num_halfspaces();

  auto active_on = [&](int i, int v) {
    return std::abs(P.normals().row(i).dot(V[v]) - P.offsets()[i]) <= tol;
  };

  std::set<std::vector<int>> faces;
  std::vector<std::vector<int>> frontier;
  for (int i = 0; i < m; ++i) {
    std::vector<int> s;
    for (int v = 0; v < nv; ++v) {
      if (active_on(i, v)) s.push_back(v);
    }
    if (s.empty() || static_cast<int>(s.size()) == nv) continue;
    if (faces.insert(s).second) frontier.push_back(s);
  }
  // Close the family of facet-like vertex sets under intersection.
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    const std::vector<std::vector<int>> current(faces.begin(), faces.end());
    for (const auto& a : frontier) {
      for (const auto& b : current) {
        std::vector<int> inter;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
        if (inter.empty()) continue;
        if (faces.insert(inter).second) next.push_back(inter);
      }
    }
    frontier = std::move(next);
  }

  std::vector<Face> out;
  for (const auto& s : faces) {
    Face f;
    f.vertices = s;
    for (int i = 0; i < m; ++i) {
      bool all = true;
      for (int v : s) {
        if (!active_on(i, v)) {
          all = false;
          break;
        }
      }
      if (all) f.halfspaces.push_back(i);
    }
    std::vector<Vector> pts;
    for (int v : s) pts.push_back(V[v]);
    f.dim = rank_of_points(pts, 1e-9);
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim > b.dim;
    return a.vertices < b.vertices;
  });
  return out;
}

bool is_inside_point(const Polytope& P, const Vector& x, double tol) {
  require_dim(x, P.dim(), "is_inside_point");
  if (!contains(P, x, tol)) return false;
  const std::vector<int> eq = implicit_equalities(P, tol);
  for (int i = 0; i < P.num_halfspaces(); ++i) {
    if (std::binary_search(eq.begin(), eq.end(), i)) continue;
    if (P.normals().row(i).dot(x) >= P.offsets()[i] - tol) return false;
  }
  return true;
}

bool in_class_D(const Polytope&) { return true; }

Polytope weighted_minkowski(std::span<const WeightedTerm> terms) {
  if (terms.empty()) throw InputError("weighted_minkowski: no terms");
  const int n = terms.front().set.dim();
  double wsum = 0.0;
  double product = 1.0;
  for (const auto& t : terms) {
    if (t.set.dim() != n) throw InputError("weighted_minkowski: dimension mismatch");
    if (!(t.weight >= 0.0)) throw InputError("weighted_minkowski: negative weight");
    wsum += t.weight;
    product *= static_cast<double>(t.set.vertices().size());
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw InputError("weighted_minkowski: weights must sum to 1");
  }
  if (product > kMinkowskiScaleBound) {
    throw InputError("weighted_minkowski: vertex product exceeds scale bound");
  }
  // Pairwise accumulation with hull pruning after each term.
  std::vector<Vector> acc{Vector::Zero(n)};
  for (const auto& t : terms) {
    if (t.weight == 0.0) continue;
    std::vector<Vector> sums;
    for (const Vector& a : acc) {
      for (const Vector& v : t.set.vertices()) sums.push_back(a + t.weight * v);
    }
    acc = extreme_points(sums);
  }
  return Polytope::from_points(acc);
}

std::vector<Vector> extreme_points(std::span<const Vector> points) {
  return detail::convex_hull(points).extreme;
}

}  // namespace adjcone

#include "hull.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adjcone::detail {

std::vector<Vector> merge_close(std::span<const Vector> points, double radius) {
  std::vector<Vector> out;
  for (const Vector& p : points) {
    bool dup = false;
    for (const Vector& q : out) {
      if ((p - q).norm() <= radius) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(p);
  }
  return out;
}

void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

namespace {

double cross2(const Vector& o, const Vector& a, const Vector& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; returns hull indices in counterclockwise order,
// collinear points dropped.
std::vector<int> monotone_chain(const std::vector<Vector>& q, double tol) {
  std::vector<int> order(q.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (q[a][0] != q[b][0]) return q[a][0] < q[b][0];
    return q[a][1] < q[b][1];
  });
  std::vector<int> hull(2 * q.size());
  int k = 0;
  for (int i : order) {
    while (k >= 2 && cross2(q[hull[k - 2]], q[hull[k - 1]], q[i]) <= tol) --k;
    hull[k++] = i;
  }
  for (int t = static_cast<int>(order.size()) - 2, lower = k + 1; t >= 0; --t) {
    const int i = order[t];
    while (k >= lower && cross2(q[hull[k - 2]], q[hull[k - 1]], q[i]) <= tol) --k;
    hull[k++] = i;
  }
  hull.resize(std::max(k - 1, 1));
  return hull;
}

struct LocalFacet {
  Vector a;
  double beta;
};

void add_unique(std::vector<LocalFacet>& facets, const Vector& a, double beta, double tol) {
  for (const auto& f : facets) {
    if ((f.a - a).norm() <= tol && std::abs(f.beta - beta) <= tol) return;
  }
  facets.push_back({a, beta});
}

}  // namespace

HullData convex_hull(std::span<const Vector> input) {
  if (input.empty()) throw InputError("convex hull of an empty point set");
  const int n = static_cast<int>(input.front().size());
  for (const Vector& p : input) require_dim(p, n, "convex_hull");

  const std::vector<Vector> pts = merge_close(input, 1e-9);
  const int N = static_cast<int>(pts.size());

  Vector c = Vector::Zero(n);
  for (const Vector& p : pts) c += p;
  c /= N;

  Matrix M(n, N);
  for (int i = 0; i < N; ++i) M.col(i) = pts[i] - c;
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  const double s0 = sv.size() > 0 ? sv[0] : 0.0;
  int k = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-9 * std::max(1.0, s0)) ++k;
  }
  const Matrix U = svd.matrixU();
  const Matrix basis = U.leftCols(k);
  const Matrix complement = U.rightCols(n - k);

  std::vector<Vector> q(N);
  for (int i = 0; i < N; ++i) q[i] = basis.transpose() * (pts[i] - c);

  std::vector<LocalFacet> facets;
  std::vector<int> extreme_idx;
  double scale = 1.0;
  if (k > 0) {
    for (const Vector& p : q) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  }
  const double tol = 1e-9 * scale;

  if (k == 0) {
    extreme_idx = {0};
  } else if (k == 1) {
    int lo = 0, hi = 0;
    for (int i = 1; i < N; ++i) {
      if (q[i][0] < q[lo][0]) lo = i;
      if (q[i][0] > q[hi][0]) hi = i;
    }
    extreme_idx = {lo, hi};
    facets.push_back({Vector::Constant(1, 1.0), q[hi][0]});
    facets.push_back({Vector::Constant(1, -1.0), -q[lo][0]});
  } else if (k == 2) {
    extreme_idx = monotone_chain(q, tol * scale);
    const int h = static_cast<int>(extreme_idx.size());
    for (int i = 0; i < h; ++i) {
      const Vector& a = q[extreme_idx[i]];
      const Vector& b = q[extreme_idx[(i + 1) % h]];
      Vector nrm(2);
      nrm << (b[1] - a[1]), -(b[0] - a[0]);
      nrm.normalize();
      facets.push_back({nrm, nrm.dot(a)});
    }
  } else {
    for_each_combination(N, k, [&](const std::vector<int>& idx) {
      Matrix E(k - 1, k);
      for (int j = 1; j < k; ++j) E.row(j - 1) = (q[idx[j]] - q[idx[0]]).transpose();
      Eigen::JacobiSVD<Matrix> esvd(E, Eigen::ComputeFullV);
      const Vector& es = esvd.singularValues();
      if (es.size() < k - 1 || es[k - 2] <= 1e-9 * std::max(1.0, es[0])) return;
      Vector a = esvd.matrixV().col(k - 1);
      a.normalize();
      const double beta = a.dot(q[idx[0]]);
      bool all_le = true, all_ge = true;
      for (const Vector& p : q) {
        const double s = a.dot(p) - beta;
        if (s > tol) all_le = false;
        if (s < -tol) all_ge = false;
        if (!all_le && !all_ge) return;
      }
      if (all_le) add_unique(facets, a, beta, 1e-9);
      if (all_ge) add_unique(facets, -a, -beta, 1e-9);
    });
    for (int i = 0; i < N; ++i) {
      std::vector<Vector> active;
      for (const auto& f : facets) {
        if (std::abs(f.a.dot(q[i]) - f.beta) <= tol) active.push_back(f.a);
      }
      if (static_cast<int>(active.size()) < k) continue;
      Matrix act(active.size(), k);
      for (size_t r = 0; r < active.size(); ++r) act.row(r) = active[r].transpose();
      Eigen::FullPivLU<Matrix> lu(act);
      lu.setThreshold(1e-9);
      if (lu.rank() == k) extreme_idx.push_back(i);
    }
  }

  HullData out;
  out.affine_dim = k;
  const int rows = static_cast<int>(facets.size()) + 2 * (n - k);
  out.A.resize(rows, n);
  out.b.resize(rows);
  int r = 0;
  for (const auto& f : facets) {
    const Vector lifted = basis * f.a;
    out.A.row(r) = lifted.transpose();
    out.b[r] = f.beta + lifted.dot(c);
    ++r;
  }
  for (int j = 0; j < n - k; ++j) {
    const Vector w = complement.col(j);
    out.A.row(r) = w.transpose();
    out.b[r] = w.dot(c);
    ++r;
    out.A.row(r) = -w.transpose();
    out.b[r] = -w.dot(c);
    ++r;
  }
  for (int i : extreme_idx) out.extreme.push_back(pts[i]);
  return out;
}

}  // namespace adjcone::detail

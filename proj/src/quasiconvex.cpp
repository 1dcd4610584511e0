#include "adjcone/quasiconvex.hpp"

#include <algorithm>
#include <cmath>

#include "adjcone/parallel.hpp"

namespace adjcone {

namespace {

double max_violation(const Polytope& P, const Vector& y) {
  if (P.num_halfspaces() == 0) return -kInfinity;
  return (P.normals() * y - P.offsets()).maxCoeff();
}

Vector uniform_point(const Vector& lo, const Vector& hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector x(lo.size());
  for (int k = 0; k < lo.size(); ++k) x[k] = lo[k] + u(rng) * (hi[k] - lo[k]);
  return x;
}

// Larger excess wins; on ties the earlier candidate is kept.
void keep_worst(std::optional<SegmentWitness>& best, SegmentWitness cand) {
  if (!best || cand.excess > best->excess) best = std::move(cand);
}

Verdict reduce(std::vector<std::optional<SegmentWitness>>& local, std::vector<long>& counts) {
  Verdict v;
  for (std::size_t i = 0; i < local.size(); ++i) {
    v.checks += counts[i];
    if (local[i]) keep_worst(v.witness, std::move(*local[i]));
  }
  v.pass = !v.witness.has_value();
  return v;
}

int default_grid(int n) {
  switch (n) {
    case 1: return 2001;
    case 2: return 201;
    case 3: return 41;
    default: return 11;
  }
}

struct AnalyticGrid {
  std::vector<Vector> pts;
  std::vector<double> vals;
  double h = 0.0;
  double fmin = kInfinity;
};

AnalyticGrid make_grid(const AnalyticFunction& f, int per_axis) {
  const int n = f.dim();
  if (per_axis <= 0) per_axis = default_grid(n);
  if (per_axis < 2) throw InputError("analytic grid needs at least two points per axis");
  const Vector lo = f.box().lower(), hi = f.box().upper();
  AnalyticGrid g;
  g.h = ((hi - lo) / (per_axis - 1)).maxCoeff();
  std::vector<int> idx(n, 0);
  while (true) {
    Vector y(n);
    for (int k = 0; k < n; ++k) y[k] = lo[k] + (hi[k] - lo[k]) * idx[k] / (per_axis - 1);
    g.pts.push_back(y);
    g.vals.push_back(f(y));
    g.fmin = std::min(g.fmin, g.vals.back());
    int k = 0;
    while (k < n && ++idx[k] >= per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  return g;
}

double grid_distance(const AnalyticGrid& g, const std::vector<int>& subset, const Vector& y) {
  double best = kInfinity;
  for (int i : subset) best = std::min(best, (g.pts[i] - y).squaredNorm());
  return std::sqrt(best);
}

std::vector<int> grid_level(const AnalyticGrid& g, double lambda) {
  std::vector<int> out;
  for (std::size_t i = 0; i < g.vals.size(); ++i) {
    if (g.vals[i] <= lambda) out.push_back(static_cast<int>(i));
  }
  return out;
}

constexpr double kRhoLadder[] = {1e-2, 1e-3, 1e-4};

}  // namespace

StepLevelFunction::StepLevelFunction(std::vector<double> levels, std::vector<Polytope> pieces,
                                     bool allow_unnested, double tol)
    : levels_(std::move(levels)), pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw InputError("StepLevelFunction: no pieces");
  if (levels_.size() != pieces_.size()) {
    throw InputError("StepLevelFunction: levels and polytopes differ in length");
  }
  const int n = pieces_.front().dim();
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    if (!std::isfinite(levels_[j])) throw InputError("StepLevelFunction: levels must be finite");
    if (j > 0 && !(levels_[j] > levels_[j - 1])) {
      throw InputError("StepLevelFunction: levels must be strictly increasing");
    }
    if (pieces_[j].dim() != n) throw InputError("StepLevelFunction: polytope dimension mismatch");
    if (pieces_[j].inradius() <= tol) full_dimensional_ = false;
  }
  for (std::size_t j = 0; j + 1 < pieces_.size() && nested_; ++j) {
    for (const Vector& v : pieces_[j].vertices()) {
      if (!contains(pieces_[j + 1], v, tol)) {
        nested_ = false;
        break;
      }
    }
  }
  if (!nested_ && !allow_unnested) {
    throw InputError("StepLevelFunction: polytope family is not nested");
  }
  lo_ = pieces_.front().lower();
  hi_ = pieces_.front().upper();
  for (const Polytope& P : pieces_) {
    lo_ = lo_.cwiseMin(P.lower());
    hi_ = hi_.cwiseMax(P.upper());
  }
}

int StepLevelFunction::level_index(const Vector& x, double tol) const {
  require_dim(x, dim(), "StepLevelFunction");
  for (int j = 0; j < size(); ++j) {
    if (contains(pieces_[j], x, tol)) return j;
  }
  return -1;
}

std::vector<int> StepLevelFunction::strict_indices(double lambda) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    if (levels_[j] < lambda) out.push_back(j);
  }
  return out;
}

std::vector<int> StepLevelFunction::sublevel_indices(double lambda) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    if (levels_[j] <= lambda) out.push_back(j);
  }
  return out;
}

AnalyticFunction::AnalyticFunction(std::string name, Evaluator fn, Polytope box, bool advertised)
    : name_(std::move(name)), fn_(std::move(fn)), box_(std::move(box)), advertised_(advertised) {
  if (!fn_) throw InputError("AnalyticFunction: missing evaluator");
}

AnalyticFunction AnalyticFunction::registered(const std::string& name, const Polytope& box) {
  if (name == "two_wells") {
    return AnalyticFunction(name, [](const Vector& x) { return std::abs(x.squaredNorm() - 1.0); }, box, false);
  }
  if (name == "max_abs") {
    return AnalyticFunction(name, [](const Vector& x) { return x.cwiseAbs().maxCoeff(); }, box, true);
  }
  if (name == "norm") {
    return AnalyticFunction(name, [](const Vector& x) { return x.norm(); }, box, true);
  }
  throw InputError("unknown analytic function '" + name + "'");
}

double AnalyticFunction::operator()(const Vector& x) const {
  require_dim(x, dim(), "AnalyticFunction");
  if (!contains(box_, x, 1e-12)) return kInfinity;
  return fn_(x);
}

double evaluate(const StepLevelFunction& f, const Vector& x, double tol) {
  const int j = f.level_index(x, tol);
  return j < 0 ? kInfinity : f.levels()[j];
}

double evaluate(const AnalyticFunction& f, const Vector& x) { return f(x); }

LevelSet sublevel(const StepLevelFunction& f, double lambda) {
  if (!f.nested()) throw InputError("sublevel: level sets of an unnested family are unions");
  LevelSet s;
  s.kind = LevelSet::Kind::sublevel;
  const auto idx = f.sublevel_indices(lambda);
  if (!idx.empty()) s.realization = f.pieces()[idx.back()];
  return s;
}

LevelSet strict_sublevel(const StepLevelFunction& f, double lambda) {
  if (!f.nested()) throw InputError("strict_sublevel: level sets of an unnested family are unions");
  LevelSet s;
  s.kind = LevelSet::Kind::strict_sublevel;
  const auto idx = f.strict_indices(lambda);
  if (!idx.empty()) s.realization = f.pieces()[idx.back()];
  return s;
}

bool in_argmin(const StepLevelFunction& f, const Vector& x, double tol) {
  require_dim(x, f.dim(), "in_argmin");
  return contains(f.pieces().front(), x, tol);
}

Projection strict_projection(const StepLevelFunction& f, double lambda, const Vector& y, double tol) {
  require_dim(y, f.dim(), "strict_projection");
  std::vector<int> idx = f.strict_indices(lambda);
  if (f.nested() && !idx.empty()) idx = {idx.back()};
  Projection best;
  best.distance = kInfinity;
  for (int j : idx) {
    Projection p = project(f.pieces()[j], y, tol);
    if (p.distance < best.distance) best = std::move(p);
  }
  return best;
}

double rho(const StepLevelFunction& f, const Vector& x, double tol) {
  const double L = evaluate(f, x, tol);
  if (!std::isfinite(L)) throw InputError("rho: point outside the domain");
  if (in_argmin(f, x, tol)) throw InputError("rho: undefined on argmin points");
  return strict_projection(f, L, x, tol).distance;
}

AdjustedSet::AdjustedSet(const StepLevelFunction& f, const Vector& x, double tol)
    : f_(&f), x_(x), tol_(tol) {
  level_ = evaluate(f, x, tol);
  if (!std::isfinite(level_)) throw InputError("adjusted set: base point outside the domain");
  argmin_ = in_argmin(f, x, tol);
  sub_ = f.sublevel_indices(level_);
  if (f.nested()) sub_ = {sub_.back()};
  if (!argmin_) {
    strict_ = f.strict_indices(level_);
    if (f.nested()) strict_ = {strict_.back()};
    const Projection p = strict_projection(f, level_, x, tol);
    rho_ = p.distance;
    anchor_ = p.point;
  }
}

double AdjustedSet::excess(const Vector& y) const {
  require_dim(y, f_->dim(), "adjusted set");
  const auto& pieces = f_->pieces();
  // Rows are unit-normalized, so a row violation bounds the distance from below.
  double level_gap = kInfinity;
  for (int j : sub_) level_gap = std::min(level_gap, max_violation(pieces[j], y));
  if (level_gap > tol_) return level_gap;
  if (argmin_) return 0.0;
  double d = kInfinity;
  for (int j : strict_) {
    const double viol = max_violation(pieces[j], y);
    if (viol <= tol_) return -rho_;
    d = std::min(d, viol > rho_ + tol_ ? viol : project(pieces[j], y, tol_).distance);
  }
  return d - rho_;
}

bool AdjustedSet::contains(const Vector& y) const { return excess(y) <= tol_; }

bool adjusted_contains(const StepLevelFunction& f, const Vector& x, const Vector& y, double tol) {
  return AdjustedSet(f, x, tol).contains(y);
}

std::optional<Vector> sample_union(const StepLevelFunction& f, const std::vector<int>& pieces,
                                   std::mt19937_64& rng, int max_attempts) {
  if (pieces.empty()) return std::nullopt;
  Vector lo = f.pieces()[pieces.front()].lower();
  Vector hi = f.pieces()[pieces.front()].upper();
  for (int j : pieces) {
    lo = lo.cwiseMin(f.pieces()[j].lower());
    hi = hi.cwiseMax(f.pieces()[j].upper());
  }
  for (int a = 0; a < max_attempts; ++a) {
    const Vector y = uniform_point(lo, hi, rng);
    for (int j : pieces) {
      if (contains(f.pieces()[j], y, 0.0)) return y;
    }
  }
  return std::nullopt;
}

RhoEstimate analytic_rho(const AnalyticFunction& f, const Vector& x, int grid_per_axis) {
  const double L = f(x);
  if (!std::isfinite(L)) throw InputError("analytic_rho: point outside the domain");
  const AnalyticGrid g = make_grid(f, grid_per_axis);
  RhoEstimate r;
  r.grid_step = g.h;
  double lo = kInfinity, hi = -kInfinity;
  for (double delta : kRhoLadder) {
    const double d = grid_distance(g, grid_level(g, L - delta), x);
    r.deltas.push_back(delta);
    r.values.push_back(d);
    if (std::isfinite(d)) {
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  r.value = r.values.back();
  r.spread = std::isfinite(lo) ? hi - lo : 0.0;
  return r;
}

Verdict quasiconvexity_check(const StepLevelFunction& f, const SamplingPlan& plan, double tol) {
  std::vector<int> all(f.size());
  for (int j = 0; j < f.size(); ++j) all[j] = j;
  const std::size_t N = static_cast<std::size_t>(std::max(plan.base_points, 0));
  std::vector<std::optional<SegmentWitness>> local(N);
  std::vector<long> counts(N, 0);
  parallel_for(N, [&](std::size_t i) {
    auto rng = stream_rng(plan.seed, i);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto x = sample_union(f, all, rng);
    if (!x) return;
    const double fx = evaluate(f, *x, tol);
    for (int p = 0; p < plan.pairs; ++p) {
      const auto y = sample_union(f, all, rng);
      if (!y) continue;
      const double t = u(rng);
      const Vector z = t * *x + (1 - t) * *y;
      const double excess = evaluate(f, z, tol) - std::max(fx, evaluate(f, *y, tol));
      ++counts[i];
      if (excess > tol) keep_worst(local[i], {Vector(), *x, *y, t, excess});
    }
  });
  return reduce(local, counts);
}

Verdict quasiconvexity_check(const AnalyticFunction& f, const SamplingPlan& plan, double tol) {
  const Vector lo = f.box().lower(), hi = f.box().upper();
  const std::size_t N = static_cast<std::size_t>(std::max(plan.base_points, 0));
  std::vector<std::optional<SegmentWitness>> local(N);
  std::vector<long> counts(N, 0);
  parallel_for(N, [&](std::size_t i) {
    auto rng = stream_rng(plan.seed, i);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Vector x = uniform_point(lo, hi, rng);
    const double fx = f(x);
    for (int p = 0; p < plan.pairs; ++p) {
      const Vector y = uniform_point(lo, hi, rng);
      const double t = u(rng);
      const double excess = f(t * x + (1 - t) * y) - std::max(fx, f(y));
      ++counts[i];
      if (excess > tol) keep_worst(local[i], {Vector(), x, y, t, excess});
    }
  });
  return reduce(local, counts);
}

Verdict adjusted_convexity_check(const StepLevelFunction& f, const SamplingPlan& plan, double tol) {
  std::vector<int> all(f.size());
  for (int j = 0; j < f.size(); ++j) all[j] = j;
  const std::size_t N = static_cast<std::size_t>(std::max(plan.base_points, 0));
  std::vector<std::optional<SegmentWitness>> local(N);
  std::vector<long> counts(N, 0);
  parallel_for(N, [&](std::size_t i) {
    auto rng = stream_rng(plan.seed, i);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto x = sample_union(f, all, rng);
    if (!x) return;
    const AdjustedSet S(f, *x, tol);
    std::vector<Vector> pool{*x};
    const int want = 2 * plan.pairs;
    for (int a = 0; a < 100 * want && static_cast<int>(pool.size()) < want; ++a) {
      const auto y = sample_union(f, S.sublevel_pieces(), rng, 1);
      if (y && S.contains(*y)) pool.push_back(*y);
    }
    if (pool.size() < 2) return;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int p = 0; p < plan.pairs; ++p) {
      const Vector& a = pool[pick(rng)];
      const Vector& b = pool[pick(rng)];
      const double t = u(rng);
      const double excess = S.excess(t * a + (1 - t) * b);
      ++counts[i];
      if (excess > tol) keep_worst(local[i], {*x, a, b, t, excess});
    }
  });
  return reduce(local, counts);
}

Verdict adjusted_convexity_check(const AnalyticFunction& f, const SamplingPlan& plan, double tol) {
  const AnalyticGrid g = make_grid(f, plan.grid_per_axis);
  const double delta = kRhoLadder[std::size(kRhoLadder) - 1];
  // Grid distances carry up to half a cell diagonal of error on each side.
  const double slack = 2.0 * g.h * std::sqrt(static_cast<double>(f.dim())) + tol;
  const Vector lo = f.box().lower(), hi = f.box().upper();
  const std::size_t N = static_cast<std::size_t>(std::max(plan.base_points, 0));
  std::vector<std::optional<SegmentWitness>> local(N);
  std::vector<long> counts(N, 0);
  parallel_for(N, [&](std::size_t i) {
    auto rng = stream_rng(plan.seed, i);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Vector x = uniform_point(lo, hi, rng);
    const double L = f(x);
    const std::vector<int> strict = grid_level(g, L - delta);
    const bool argmin = strict.empty();
    const double r = argmin ? 0.0 : grid_distance(g, strict, x);

    auto excess = [&](const Vector& z, double fz) {
      if (!argmin && fz <= L - delta) return -1.0;
      if (fz <= L + tol) return argmin ? -1.0 : grid_distance(g, strict, z) - r;
      return grid_distance(g, grid_level(g, L), z);
    };

    std::vector<int> pool;
    for (std::size_t k = 0; k < g.pts.size(); ++k) {
      if (g.vals[k] <= L + tol && excess(g.pts[k], g.vals[k]) <= slack) pool.push_back(static_cast<int>(k));
    }
    if (pool.size() < 2) return;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int p = 0; p < plan.pairs; ++p) {
      const Vector& a = g.pts[pool[pick(rng)]];
      const Vector& b = g.pts[pool[pick(rng)]];
      const double t = u(rng);
      const Vector z = t * a + (1 - t) * b;
      const double e = excess(z, f(z));
      ++counts[i];
      if (e > slack) keep_worst(local[i], {x, a, b, t, e});
    }
  });
  return reduce(local, counts);
}

}  // namespace adjcone

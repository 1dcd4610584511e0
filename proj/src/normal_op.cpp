#include "adjcone/normal_op.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adjcone/parallel.hpp"

namespace adjcone {

namespace {

std::vector<Vector> active_normals(const Polytope& P, const Vector& x, double tol) {
  std::vector<Vector> out;
  const Vector slack = P.offsets() - P.normals() * x;
  for (int i = 0; i < P.num_halfspaces(); ++i) {
    if (slack[i] <= tol) out.push_back(P.normals().row(i).transpose());
  }
  return out;
}

double worst_pairing(const GeneratedCone& K, const Vector& x, const std::vector<Vector>& pts) {
  double worst = -kInfinity;
  for (const Vector& g : K.generators()) {
    const Vector u = g.normalized();
    for (const Vector& y : pts) worst = std::max(worst, u.dot(y - x));
  }
  return K.is_trivial() ? 0.0 : worst;
}

GeneratedCone polar_of_points(int n, const Vector& x, const std::vector<Vector>& pts, std::size_t cap,
                              double tol) {
  std::vector<Vector> dirs;
  for (const Vector& y : pts) {
    if ((y - x).norm() > tol) dirs.push_back(y - x);
    if (dirs.size() >= cap) break;
  }
  return polar_cone(n, dirs).pruned();
}

}  // namespace

GeneratedCone strict_normal_cone(const StepLevelFunction& f, const Vector& x, const NormalOpOptions& opt) {
  const double L = evaluate(f, x, opt.tol.feas);
  if (!std::isfinite(L)) throw InputError("strict_normal_cone: point outside the domain");
  if (in_argmin(f, x, opt.tol.feas)) {
    throw InputError("strict_normal_cone: x in argmin f, N^< is the whole space");
  }
  std::vector<int> idx = f.strict_indices(L);
  if (f.nested()) idx = {idx.back()};
  std::vector<Vector> dirs;
  for (int j : idx) {
    for (const Vector& v : f.pieces()[j].vertices()) dirs.push_back(v - x);
  }
  return polar_cone(f.dim(), dirs).pruned();
}

AdjustedCone adjusted_normal_cone_detail(const StepLevelFunction& f, const Vector& x,
                                         const NormalOpOptions& opt) {
  const int n = f.dim();
  const double feas = opt.tol.feas;
  const int j = f.level_index(x, feas);
  if (j < 0) throw InputError("adjusted_normal_cone: point outside the domain");
  std::vector<Vector> gens = active_normals(f.pieces()[j], x, feas);
  AdjustedCone out{GeneratedCone(n, {}), false, 0, 0.0};
  std::vector<Vector> pts;

  if (in_argmin(f, x, feas)) {
    pts = f.pieces().front().vertices();
  } else {
    const AdjustedSet S(f, x, feas);
    gens.push_back((x - S.anchor()) / S.radius());
    for (int k : S.sublevel_pieces()) {
      for (const Vector& v : f.pieces()[k].vertices()) {
        if (S.contains(v)) pts.push_back(v);
      }
    }
    auto rng = stream_rng(opt.seed, 0);
    const int want = opt.verify_samples;
    for (int a = 0, got = 0; a < 50 * want && got < want; ++a) {
      const auto y = sample_union(f, S.sublevel_pieces(), rng, 1);
      if (y && S.contains(*y)) {
        pts.push_back(*y);
        ++got;
      }
    }
  }
  out.cone = GeneratedCone(n, gens).pruned();
  out.verified_points = static_cast<int>(pts.size());
  out.worst_violation = worst_pairing(out.cone, x, pts);
  if (out.worst_violation > opt.tol.cone) {
    const std::size_t cap = n >= 3 ? static_cast<std::size_t>(opt.fallback_directions) : pts.size();
    out.cone = polar_of_points(n, x, pts, cap, feas);
    out.fallback = true;
    out.worst_violation = worst_pairing(out.cone, x, pts);
  }
  return out;
}

GeneratedCone adjusted_normal_cone(const StepLevelFunction& f, const Vector& x, const NormalOpOptions& opt) {
  return adjusted_normal_cone_detail(f, x, opt).cone;
}

Polytope normalized_base(const StepLevelFunction& f, const Vector& x, const NormalOpOptions& opt) {
  if (in_argmin(f, x, opt.tol.feas)) throw InputError("normalized_base: x in argmin f");
  const GeneratedCone K = adjusted_normal_cone(f, x, opt);
  if (K.is_trivial()) throw InputError("normalized_base: zero cone");
  std::vector<Vector> unit;
  for (const Vector& g : K.generators()) unit.push_back(g.normalized());
  return Polytope::from_points(unit);
}

LocalChart build_chart(const StepLevelFunction& f, const Vector& z, double tol) {
  if (!f.nested()) throw InputError("build_chart: requires a nested family");
  const double L = evaluate(f, z, tol);
  if (!std::isfinite(L)) throw InputError("build_chart: point outside the domain");
  if (in_argmin(f, z, tol)) throw InputError("build_chart: point in argmin f");
  const int prev = f.strict_indices(L).back();
  const Polytope& strict = f.pieces()[prev];
  LocalChart c;
  c.z = z;
  c.lambda = 0.5 * (f.levels()[prev] + L);
  c.r_c = strict.inradius();
  if (c.r_c <= tol) throw InputError("build_chart: strict sublevel set has empty interior");
  c.z0 = strict.center();
  c.eps = std::min(0.9 * project(strict, z, tol).distance, 0.5 * c.r_c);
  c.c = z - c.z0;
  return c;
}

Polytope chart_base(const LocalChart& chart, const GeneratedCone& cone, double tol) {
  const Polytope base = cone_section(cone, chart.c, chart.eps);
  for (const Vector& v : base.vertices()) {
    if (v.norm() > 1.0 + tol) throw NumericalError("chart_base: section leaves the dual unit ball");
  }
  return base;
}

Polytope chart_base(const LocalChart& chart, const StepLevelFunction& f, const Vector& x,
                    const NormalOpOptions& opt) {
  if ((x - chart.z).norm() > chart.eps + opt.tol.feas) throw InputError("chart_base: x outside the chart ball");
  if (in_argmin(f, x, opt.tol.feas)) throw InputError("chart_base: x in argmin f");
  return chart_base(chart, adjusted_normal_cone(f, x, opt), opt.tol.feas);
}

Atlas::Atlas(std::vector<LocalChart> charts, Polytope region, double cover_step)
    : charts_(std::move(charts)), region_(std::move(region)), cover_step_(cover_step) {
  for (const auto& c : charts_) {
    require_dim(c.z, region_.dim(), "Atlas chart");
    if (!(c.eps > 0)) throw InputError("Atlas: chart radius must be positive");
  }
}

double Atlas::bump(std::size_t i, const Vector& x) const {
  const LocalChart& c = charts_.at(i);
  return std::max(0.0, c.eps - (x - c.z).norm());
}

std::vector<std::pair<int, double>> Atlas::weights(const Vector& x) const {
  require_dim(x, region_.dim(), "Atlas::weights");
  std::vector<std::pair<int, double>> out;
  double total = 0.0;
  for (std::size_t i = 0; i < charts_.size(); ++i) {
    const double d = bump(i, x);
    if (d > 0) {
      out.emplace_back(static_cast<int>(i), d);
      total += d;
    }
  }
  for (auto& w : out) w.second /= total;
  return out;
}

std::vector<Vector> region_grid(const Polytope& region, double mesh) {
  if (!(mesh > 0)) throw InputError("region_grid: mesh must be positive");
  const int n = region.dim();
  const Vector lo = region.lower(), hi = region.upper();
  std::vector<std::vector<double>> axes(n);
  for (int k = 0; k < n; ++k) {
    const double span = hi[k] - lo[k];
    const long steps = static_cast<long>(std::floor(span / mesh + 1e-9));
    for (long s = 0; s <= steps; ++s) axes[k].push_back(lo[k] + s * mesh);
    if (axes[k].back() < hi[k] - 1e-12 * std::max(1.0, std::abs(hi[k]))) axes[k].push_back(hi[k]);
  }
  std::vector<Vector> out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Vector p(n);
    for (int k = 0; k < n; ++k) p[k] = axes[k][idx[k]];
    if (contains(region, p, 1e-9)) out.push_back(p);
    int k = 0;
    while (k < n && ++idx[k] >= axes[k].size()) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

Atlas build_atlas(const StepLevelFunction& f, const Polytope& region, double cover_step, const AtlasOptions& opt) {
  if (!f.nested()) throw InputError("build_atlas: requires a nested family");
  if (!(cover_step > 0)) throw InputError("build_atlas: cover_step must be positive");
  if (region.dim() != f.dim()) throw InputError("build_atlas: region dimension mismatch");
  const std::vector<Vector> centers = region_grid(region, cover_step);
  const std::vector<Vector> verify = region_grid(region, cover_step / 4);

  auto check_point = [&](const Vector& p) {
    if (!std::isfinite(evaluate(f, p, opt.tol))) throw InputError("build_atlas: region leaves the domain of f");
    if (project(f.pieces().front(), p).distance < cover_step - opt.tol) {
      throw InputError("build_atlas: region intersects the argmin margin");
    }
  };
  for (const Vector& p : region.vertices()) check_point(p);
  for (const Vector& p : verify) check_point(p);

  std::vector<LocalChart> charts;
  for (const Vector& z : centers) charts.push_back(build_chart(f, z, opt.tol));
  for (const Vector& p : verify) {
    bool covered = false;
    for (const auto& c : charts) {
      if ((p - c.z).norm() < c.eps) {
        covered = true;
        break;
      }
    }
    if (covered) continue;
    charts.push_back(build_chart(f, p, opt.tol));
    if (charts.size() > opt.max_charts) throw NumericalError("build_atlas: densification cap reached");
  }
  return Atlas(std::move(charts), region, cover_step);
}

GeneratedCone cone_from(const Polytope& base) {
  std::vector<Vector> gens;
  for (const Vector& v : base.vertices()) {
    if (v.norm() > 1e-12) gens.push_back(v);
  }
  return GeneratedCone(base.dim(), gens);
}

BaseResult global_base(const Atlas& atlas, const StepLevelFunction& f, const Vector& x, const NormalOpOptions& opt) {
  if (in_argmin(f, x, opt.tol.feas)) throw InputError("global_base: x in argmin f");
  auto active = atlas.weights(x);
  if (active.empty()) throw InputError("global_base: coverage hole (no active chart)");
  const GeneratedCone N = adjusted_normal_cone(f, x, opt);
  std::vector<WeightedTerm> terms;
  for (const auto& [i, w] : active) {
    terms.push_back({w, chart_base(atlas.charts()[i], N, opt.tol.feas)});
  }
  BaseResult r{weighted_minkowski(terms), std::move(active), N, 0.0, 0.0};
  for (const Vector& v : r.base.vertices()) r.max_norm = std::max(r.max_norm, v.norm());
  r.min_norm = project(r.base, Vector::Zero(f.dim()), opt.tol.feas).distance;
  if (r.max_norm > 1.0 + opt.tol.feas) throw NumericalError("global_base: base leaves the dual unit ball");
  if (r.min_norm < opt.tol.zero) throw NumericalError("global_base: base too close to the origin");
  if (!cones_equal(cone_from(r.base), N, opt.tol.cone)) {
    throw NumericalError("global_base: base does not generate N^a(x)");
  }
  return r;
}

}  // namespace adjcone

#include "adjcone/gqvi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "adjcone/lp.hpp"
#include "adjcone/normal_op.hpp"
#include "adjcone/parallel.hpp"

namespace adjcone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector uniform_in(const Polytope& P, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int a = 0; a < 10000; ++a) {
    Vector x(P.dim());
    for (int k = 0; k < P.dim(); ++k) x[k] = P.lower()[k] + u(rng) * (P.upper()[k] - P.lower()[k]);
    if (contains(P, x, 0.0)) return x;
  }
  return P.center();
}

struct Candidate {
  Vector x;
  MinimaxResult mm;
};

// Larger residual first; within tau, smaller norm, then lexicographic.
bool better(const Candidate& a, const Candidate& b, double tau) {
  if (a.mm.value > b.mm.value + tau) return true;
  if (b.mm.value > a.mm.value + tau) return false;
  const double na = a.x.norm(), nb = b.x.norm();
  if (na < nb - 1e-12) return true;
  if (nb < na - 1e-12) return false;
  for (int k = 0; k < a.x.size(); ++k) {
    if (a.x[k] != b.x[k]) return a.x[k] < b.x[k];
  }
  return false;
}

}  // namespace

MovingPolytope::MovingPolytope(Matrix A, Vector b, Matrix D, Polytope box)
    : A_(std::move(A)), b_(std::move(b)), D_(std::move(D)), box_(std::move(box)) {
  const int n = box_.dim();
  if (A_.cols() != n || D_.cols() != n) throw InputError("MovingPolytope: A and D need dim columns");
  if (A_.rows() != b_.size() || D_.rows() != b_.size()) {
    throw InputError("MovingPolytope: A, b and D row counts differ");
  }
}

MovingPolytope MovingPolytope::constant(const Polytope& box) {
  const int n = box.dim();
  return MovingPolytope(Matrix(0, n), Vector(0), Matrix(0, n), box);
}

void MovingPolytope::system(const Vector& x, Matrix& H, Vector& h) const {
  require_dim(x, dim(), "MovingPolytope");
  const int m = static_cast<int>(A_.rows()), r = box_.num_halfspaces();
  H.resize(m + r, dim());
  h.resize(m + r);
  if (m > 0) {
    H.topRows(m) = A_;
    h.head(m) = b_ + D_ * x;
  }
  H.bottomRows(r) = box_.normals();
  h.tail(r) = box_.offsets();
}

Polytope MovingPolytope::at(const Vector& x) const {
  Matrix H;
  Vector h;
  system(x, H, h);
  return Polytope::from_halfspaces(H, h);
}

bool MovingPolytope::is_fixed_point(const Vector& x, double tol) const {
  Matrix H;
  Vector h;
  system(x, H, h);
  return H.rows() == 0 || (H * x - h).maxCoeff() <= tol;
}

Polytope fixed_point_set(const MovingPolytope& K) {
  const int m = static_cast<int>(K.A().rows()), r = K.box().num_halfspaces();
  Matrix H(m + r, K.dim());
  Vector h(m + r);
  if (m > 0) {
    H.topRows(m) = K.A() - K.D();
    h.head(m) = K.b();
  }
  H.bottomRows(r) = K.box().normals();
  h.tail(r) = K.box().offsets();
  try {
    return Polytope::from_halfspaces(H, h);
  } catch (const InputError&) {
    throw InputError("fixed_point_set: fix K is empty");
  }
}

PolytopeOperator PolytopeOperator::constant(Polytope value) {
  return PolytopeOperator(Kind::constant, [v = std::move(value)](const Vector&) { return v; });
}

PolytopeOperator PolytopeOperator::tabulated(std::vector<Vector> sites, std::vector<Polytope> values) {
  if (sites.empty() || sites.size() != values.size()) {
    throw InputError("PolytopeOperator::tabulated: sites and values must be nonempty and equal in length");
  }
  return PolytopeOperator(Kind::tabulated, [s = std::move(sites), v = std::move(values)](const Vector& x) {
    std::size_t best = 0;
    double bd = kInf;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double d = (s[i] - x).squaredNorm();
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return v[best];
  });
}

PolytopeOperator PolytopeOperator::function(Fn fn, Kind kind) {
  if (!fn) throw InputError("PolytopeOperator: missing function");
  return PolytopeOperator(kind, std::move(fn));
}

PolytopeOperator PolytopeOperator::scaled(double s) const {
  return PolytopeOperator(kind_, [fn = fn_, s](const Vector& x) {
    const Polytope P = fn(x);
    std::vector<Vector> pts;
    for (const Vector& v : P.vertices()) pts.push_back(s * v);
    return Polytope::from_points(pts);
  });
}

std::string to_string(PolytopeOperator::Kind kind) {
  switch (kind) {
    case PolytopeOperator::Kind::constant: return "constant";
    case PolytopeOperator::Kind::tabulated: return "tabulated";
    case PolytopeOperator::Kind::normal_base: return "normal_base";
  }
  return "unknown";
}

MinimaxResult minimax_value(const Polytope& Tx, const MovingPolytope& K, const Vector& x) {
  const int n = K.dim();
  require_dim(x, n, "minimax_value");
  if (Tx.dim() != n) throw InputError("minimax_value: T(x) dimension mismatch");
  const auto& V = Tx.vertices();
  Matrix H;
  Vector h;
  K.system(x, H, h);

  // variables (y, t): minimize t s.t. <v_j, y> - t <= <v_j, x>, H y <= h
  LinearProgram lp(n + 1);
  lp.set_all_free();
  Vector c = Vector::Zero(n + 1);
  c[n] = 1.0;
  lp.set_objective(c);
  for (const Vector& v : V) {
    Vector row(n + 1);
    row.head(n) = v;
    row[n] = -1.0;
    lp.add_le(row, v.dot(x));
  }
  for (int i = 0; i < H.rows(); ++i) {
    Vector row = Vector::Zero(n + 1);
    row.head(n) = H.row(i).transpose();
    lp.add_le(row, h[i]);
  }
  const LpResult res = lp.minimize();
  if (res.status == LpStatus::infeasible) throw InputError("minimax_value: K(x) is empty");
  if (!res.ok()) throw NumericalError(std::string("minimax_value: LP ") + to_string(res.status));

  MinimaxResult out;
  out.y_star = res.x.head(n);
  double best = -kInf;
  for (const Vector& v : V) {
    const double s = v.dot(out.y_star - x);
    if (s > best) {
      best = s;
      out.xstar = v;
    }
  }
  out.value = best;
  return out;
}

MinimaxResult minimax_value(const PolytopeOperator& T, const MovingPolytope& K, const Vector& x) {
  return minimax_value(T(x), K, x);
}

SionResult sion_check(const Polytope& Tx, const MovingPolytope& K, const Vector& x) {
  const int n = K.dim();
  SionResult r;
  r.minmax = minimax_value(Tx, K, x).value;
  const auto& V = Tx.vertices();
  const int k = static_cast<int>(V.size());
  Matrix H;
  Vector h;
  K.system(x, H, h);
  const int m = static_cast<int>(H.rows());

  // max over x* = sum θ_j v_j of min_{Hy<=h} <x*, y - x>, with the inner LP
  // replaced by its dual: variables (θ, μ) >= 0, H^T μ + V θ = 0, sum θ = 1,
  // minimize h^T μ + sum θ_j <v_j, x>.
  LinearProgram lp(k + m);
  Vector c(k + m);
  for (int j = 0; j < k; ++j) c[j] = V[j].dot(x);
  c.tail(m) = h;
  lp.set_objective(c);
  for (int d = 0; d < n; ++d) {
    Vector row(k + m);
    for (int j = 0; j < k; ++j) row[j] = V[j][d];
    row.tail(m) = H.col(d);
    lp.add_eq(row, 0.0);
  }
  Vector ones = Vector::Zero(k + m);
  ones.head(k).setOnes();
  lp.add_eq(ones, 1.0);
  const LpResult res = lp.minimize();
  if (!res.ok()) throw NumericalError(std::string("sion_check: LP ") + to_string(res.status));
  r.maxmin = -res.objective;
  r.xstar = Vector::Zero(n);
  for (int j = 0; j < k; ++j) r.xstar += res.x[j] * V[j];

  r.vertex_maxmin = -kInf;
  for (const Vector& v : V) {
    LinearProgram inner(n);
    inner.set_all_free();
    inner.set_objective(v);
    for (int i = 0; i < m; ++i) inner.add_le(H.row(i).transpose(), h[i]);
    const LpResult ir = inner.minimize();
    if (!ir.ok()) throw NumericalError(std::string("sion_check: LP ") + to_string(ir.status));
    r.vertex_maxmin = std::max(r.vertex_maxmin, ir.objective - v.dot(x));
  }
  r.gap = std::abs(r.minmax - r.maxmin);
  return r;
}

SionResult sion_check(const PolytopeOperator& T, const MovingPolytope& K, const Vector& x) {
  return sion_check(T(x), K, x);
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved: return "solved";
    case SolveStatus::residual_floor: return "residual_floor";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

bool verify_solution(const GqviInstance& inst, const Vector& x, double tau, MinimaxResult* out) {
  if (!inst.K.is_fixed_point(x, inst.feas_tol)) return false;
  const MinimaxResult mm = minimax_value(inst.T, inst.K, x);
  if (out) *out = mm;
  return mm.value >= -tau;
}

SolveReport solve(const GqviInstance& inst) {
  const auto t0 = std::chrono::steady_clock::now();
  const SolverConfig& cfg = inst.solver;
  if (!(cfg.gamma > 0 && cfg.gamma <= 1)) throw InputError("solve: damping must lie in (0, 1]");
  SolveReport rep;
  std::optional<Polytope> F;
  try {
    F = fixed_point_set(inst.K);
  } catch (const InputError&) {
    rep.status = SolveStatus::infeasible;
    return rep;
  }
  const double diam = std::max(F->diameter_bound(), 1e-12);

  std::vector<Vector> starts;
  if (cfg.start_mesh > 0) starts = region_grid(*F, std::max(cfg.start_mesh * diam, 1e-9));
  starts.push_back(F->center());
  auto rng = stream_rng(cfg.seed, 0);
  for (int s = 0; s < cfg.starts; ++s) starts.push_back(uniform_in(*F, rng));

  struct StartResult {
    std::optional<Candidate> accepted;
    int iterations = 0;
    int failures = 0;
    std::vector<TraceRow> trace;
  };
  std::vector<StartResult> results(starts.size());
  parallel_for(starts.size(), [&](std::size_t s) {
    StartResult& out = results[s];
    Vector x = starts[s];
    for (int it = 0; it < cfg.max_iter; ++it) {
      MinimaxResult mm;
      try {
        mm = minimax_value(inst.T, inst.K, x);
      } catch (const std::exception&) {
        ++out.failures;
        return;
      }
      ++out.iterations;
      if (cfg.trace) out.trace.push_back({static_cast<int>(s), it, x, mm.value});
      if (inst.K.is_fixed_point(x, inst.feas_tol) && mm.value >= -cfg.tau_solve) {
        const Candidate cand{x, mm};
        if (!out.accepted || better(cand, *out.accepted, 0.0)) out.accepted = cand;
        if (mm.value >= 0.0) return;
      }
      const Vector next = project(*F, (1 - cfg.gamma) * x + cfg.gamma * mm.y_star).point;
      if ((next - x).norm() <= 1e-14 * std::max(1.0, x.norm())) return;
      x = next;
    }
  });

  std::optional<Candidate> best;
  for (auto& r : results) {
    ++rep.starts_run;
    rep.iterations += r.iterations;
    rep.evaluation_failures += r.failures;
    if (cfg.trace) rep.trace.insert(rep.trace.end(), r.trace.begin(), r.trace.end());
    if (r.accepted && (!best || better(*r.accepted, *best, cfg.tau_solve))) best = r.accepted;
  }

  if (!best) {
    rep.from_grid = true;
    const std::vector<Vector> grid = region_grid(*F, std::max(cfg.mesh * diam, 1e-9));
    std::vector<std::optional<Candidate>> vals(grid.size());
    std::vector<int> fails(grid.size(), 0);
    parallel_for(grid.size(), [&](std::size_t i) {
      try {
        vals[i] = Candidate{grid[i], minimax_value(inst.T, inst.K, grid[i])};
      } catch (const std::exception&) {
        fails[i] = 1;
      }
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rep.evaluation_failures += fails[i];
      if (vals[i] && (!best || better(*vals[i], *best, cfg.tau_solve))) best = vals[i];
    }
  }

  if (!best) {
    rep.status = SolveStatus::residual_floor;
  } else {
    // Re-verify from scratch before claiming a solution.
    MinimaxResult mm;
    const bool ok = verify_solution(inst, best->x, cfg.tau_solve, &mm);
    rep.x = best->x;
    rep.residual = mm.value;
    rep.xstar = mm.xstar;
    rep.status = ok ? SolveStatus::solved : SolveStatus::residual_floor;
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

bool HypothesisReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.pass; });
}

HypothesisReport hypothesis_report(const ConstraintMap& K, const Polytope& box, const HypothesisOptions& opt) {
  const int n = box.dim();
  std::vector<Vector> pts = region_grid(box, std::max(opt.mesh_fraction * box.diameter_bound(), 1e-9));
  auto rng = stream_rng(opt.seed, 0);
  for (int s = 0; s < opt.random_points; ++s) pts.push_back(uniform_in(box, rng));

  HypothesisCheck nonempty{"nonempty_values", true, "", Vector()};
  HypothesisCheck bounded{"values_in_box", true, "", Vector()};
  HypothesisCheck lsc{"lower_semicontinuity_probe", true, "", Vector()};
  std::vector<std::optional<Polytope>> values(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    try {
      values[i] = K(pts[i]);
    } catch (const InputError&) {
      if (nonempty.pass) {
        nonempty.pass = false;
        nonempty.witness = pts[i];
        nonempty.detail = "K(x) empty";
      }
      continue;
    }
    for (const Vector& v : values[i]->vertices()) {
      if (bounded.pass && !contains(box, v, 1e-9)) {
        bounded.pass = false;
        bounded.witness = pts[i];
        bounded.detail = "K(x) leaves the box";
      }
    }
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size() && lsc.pass; ++i) {
    if (!values[i]) continue;
    const Vector& x = pts[i];
    for (int k = 0; k < n && lsc.pass; ++k) {
      for (double sgn : {1.0, -1.0}) {
        const Vector xp = x + sgn * opt.radii.back() * Vector::Unit(n, k);
        if (!contains(box, xp, 0.0)) continue;
        std::optional<Polytope> Kp;
        try {
          Kp = K(xp);
        } catch (const InputError&) {
          continue;
        }
        double dev = 0.0;
        for (const Vector& y : values[i]->vertices()) dev = std::max(dev, project(*Kp, y).distance);
        worst = std::max(worst, dev);
        if (dev > opt.tau_lsc) {
          lsc.pass = false;
          lsc.witness = x;
          lsc.detail = "dist(y, K(x')) = " + std::to_string(dev) + " at |x - x'| = " +
                       std::to_string(opt.radii.back());
          break;
        }
      }
    }
  }
  if (lsc.pass) lsc.detail = "max dist(y, K(x')) = " + std::to_string(worst);

  HypothesisReport rep;
  rep.checks.push_back(nonempty);
  rep.checks.push_back(bounded);
  rep.checks.push_back({"closed_convex_values", true, "polytope values are closed and convex", Vector()});
  rep.checks.push_back({"values_in_class_D", true, "convex sets belong to D in finite dimension", Vector()});
  rep.checks.push_back(lsc);
  return rep;
}

HypothesisReport hypothesis_report(const MovingPolytope& K, const HypothesisOptions& opt) {
  HypothesisReport rep = hypothesis_report([&](const Vector& x) { return K.at(x); }, K.box(), opt);
  HypothesisCheck fix{"fix_K_closed", true, "fix K is polyhedral", Vector()};
  try {
    fixed_point_set(K);
  } catch (const InputError&) {
    fix.pass = false;
    fix.detail = "fix K is empty";
  }
  rep.checks.push_back(fix);
  return rep;
}

}  // namespace adjcone

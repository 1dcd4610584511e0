#include "adjcone/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "adjcone/io.hpp"
#include "adjcone/parallel.hpp"
#include "adjcone/probes.hpp"

namespace adjcone::cli {

namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  json result;
  std::map<std::string, std::string> files;  ///< file name → content
  std::string summary;
};

struct Context {
  const RunConfig& cfg;
  const Instance& inst;
  NormalOpOptions nopt;
};

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) {
    out_ << std::setprecision(17);
    row_strings(header);
  }
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }
  Csv& cell(double v) {
    sep();
    out_ << v;
    return *this;
  }
  Csv& cell(long v) {
    sep();
    out_ << v;
    return *this;
  }
  Csv& cell(const std::string& v) {
    sep();
    out_ << v;
    return *this;
  }
  Csv& cells(const Vector& v) {
    for (int i = 0; i < v.size(); ++i) cell(v[i]);
    return *this;
  }
  void end() {
    out_ << "\n";
    first_ = true;
  }
  std::string str() const { return out_.str(); }

 private:
  void sep() {
    if (!first_) out_ << ",";
    first_ = false;
  }
  std::ostringstream out_;
  bool first_ = true;
};

std::vector<std::string> coord_names(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

int function_dim(const Instance& inst) {
  if (inst.function) return std::visit([](const auto& f) { return f.dim(); }, *inst.function);
  if (inst.K) return inst.K->dim();
  throw InputError("instance field 'function': missing");
}

std::vector<Vector> probe_points(const Context& c) {
  if (!c.cfg.at.empty()) {
    Vector x(static_cast<int>(c.cfg.at.size()));
    for (std::size_t i = 0; i < c.cfg.at.size(); ++i) x[static_cast<int>(i)] = c.cfg.at[i];
    require_dim(x, function_dim(c.inst), "--at");
    return {x};
  }
  if (c.inst.points.empty()) throw InputError("no probe point: pass --at or list \"points\" in the instance");
  return c.inst.points;
}

Vector single_point(const Context& c) {
  const auto pts = probe_points(c);
  return pts.front();
}

json verdict_json(const Verdict& v) {
  json j{{"pass", v.pass}, {"checks", v.checks}};
  if (v.witness) {
    j["witness"] = {{"base", to_json(v.witness->base)},
                    {"a", to_json(v.witness->a)},
                    {"b", to_json(v.witness->b)},
                    {"t", v.witness->t},
                    {"excess", number(v.witness->excess)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Outcome check_quasiconvex(const Context& c) {
  SamplingPlan plan;
  plan.seed = c.cfg.seed;
  const double tol = c.cfg.tol.feas;
  const auto [q, a] = std::visit(
      [&](const auto& f) { return std::pair{quasiconvexity_check(f, plan, tol), adjusted_convexity_check(f, plan, tol)}; },
      *c.inst.function);
  Outcome o;
  o.pass = q.pass && a.pass;
  o.result = {{"quasiconvexity", verdict_json(q)}, {"adjusted_convexity", verdict_json(a)}, {"agree", q.pass == a.pass}};
  o.summary = std::string("quasiconvex: ") + (q.pass ? "yes" : "no") + ", S^a convex: " + (a.pass ? "yes" : "no");
  return o;
}

// Boundary of a star-shaped set along rays from `center`.
std::vector<Vector> ray_boundary(const std::function<bool(const Vector&)>& member, const Vector& center,
                                 double reach) {
  const int n = static_cast<int>(center.size());
  std::vector<Vector> dirs;
  if (n == 1) {
    dirs = {Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)};
  } else {
    for (int k = 0; k < 360; ++k) {
      Vector d(2);
      d << std::cos(k * M_PI / 180), std::sin(k * M_PI / 180);
      dirs.push_back(d);
    }
  }
  std::vector<Vector> out;
  for (const Vector& d : dirs) {
    double lo = 0, hi = reach;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (member(center + mid * d) ? lo : hi) = mid;
    }
    out.push_back(center + lo * d);
  }
  return out;
}

Outcome adjusted_set(const Context& c) {
  const StepLevelFunction& f = c.inst.step();
  const Vector x = single_point(c);
  const AdjustedSet S(f, x, c.cfg.tol.feas);
  Outcome o;
  o.result = {{"x", to_json(x)},
              {"level", S.level()},
              {"at_argmin", S.at_argmin()},
              {"rho", S.radius()},
              {"anchor", S.at_argmin() ? json(nullptr) : to_json(S.anchor())},
              {"sublevel_pieces", S.sublevel_pieces()},
              {"strict_pieces", S.strict_pieces()}};
  const int n = f.dim();
  if (n <= 2) {
    const Vector center = f.pieces().front().center();
    const double reach = (f.domain_upper() - f.domain_lower()).norm() + 1.0;
    const double tol = c.cfg.tol.feas;
    Csv csv(concat({"set"}, coord_names("x", n)));
    auto emit = [&](const std::string& name, const std::function<bool(const Vector&)>& m) {
      for (const Vector& p : ray_boundary(m, center, reach)) csv.cell(name).cells(p).end();
    };
    emit("S", [&](const Vector& y) { return evaluate(f, y, tol) <= S.level(); });
    if (!S.at_argmin()) emit("S_strict", [&](const Vector& y) { return evaluate(f, y, tol) < S.level(); });
    emit("S_adjusted", [&](const Vector& y) { return S.contains(y); });
    o.files["adjusted_set.csv"] = csv.str();
  }
  o.summary = "f(x) = " + std::to_string(S.level()) + ", rho = " + std::to_string(S.radius());
  return o;
}

Outcome normal_cone(const Context& c) {
  const StepLevelFunction& f = c.inst.step();
  const Vector x = single_point(c);
  Outcome o;
  const AdjustedCone a = adjusted_normal_cone_detail(f, x, c.nopt);
  o.result = {{"x", to_json(x)},
              {"adjusted", to_json(a.cone)},
              {"fallback", a.fallback},
              {"verified_points", a.verified_points},
              {"worst_violation", number(a.worst_violation)}};
  if (!a.cone.is_trivial()) o.result["normalized_base"] = to_json(normalized_base(f, x, c.nopt));
  if (in_argmin(f, x, c.cfg.tol.feas)) {
    o.result["strict"] = nullptr;
  } else {
    const GeneratedCone s = strict_normal_cone(f, x, c.nopt);
    o.result["strict"] = to_json(s);
    for (const Vector& g : a.cone.generators()) o.pass = o.pass && cone_contains(s, g, c.cfg.tol.cone);
  }
  o.result["adjusted_in_strict"] = o.pass;
  o.summary = std::to_string(a.cone.generators().size()) + " generators" + (a.fallback ? " (fallback)" : "");
  return o;
}

Atlas effective_atlas(const Context& c) {
  const Atlas& a = c.inst.require_atlas();
  if (c.cfg.mesh > 0) return build_atlas(c.inst.step(), a.region(), c.cfg.mesh);
  return a;
}

Outcome build_atlas_cmd(const Context& c) {
  const Atlas atlas = effective_atlas(c);
  double worst_sum = 0, min_weight = kInfinity;
  long holes = 0, support = 0, points = 0;
  for (const Vector& p : region_grid(atlas.region(), atlas.cover_step() / 4)) {
    ++points;
    const auto w = atlas.weights(p);
    if (w.empty()) {
      ++holes;
      continue;
    }
    double s = 0;
    for (const auto& [i, l] : w) {
      s += l;
      min_weight = std::min(min_weight, l);
      if ((p - atlas.charts()[i].z).norm() >= atlas.charts()[i].eps) ++support;
    }
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
  }
  Outcome o;
  o.pass = holes == 0 && support == 0 && worst_sum <= 1e-12 && min_weight >= 0;
  o.result = {{"charts", atlas.charts().size()},
              {"cover_step", atlas.cover_step()},
              {"verification_points", points},
              {"holes", holes},
              {"support_violations", support},
              {"max_sum_error", worst_sum},
              {"min_weight", number(min_weight)}};
  o.files["atlas.json"] = to_json(atlas).dump(2) + "\n";
  o.summary = std::to_string(atlas.charts().size()) + " charts";
  return o;
}

Outcome base_map(const Context& c) {
  const StepLevelFunction& f = c.inst.step();
  const Atlas atlas = effective_atlas(c);
  std::vector<Vector> pts;
  if (!c.cfg.at.empty()) {
    pts = probe_points(c);
  } else {
    pts = region_grid(atlas.region(), atlas.cover_step());
  }
  const int n = f.dim();
  Csv csv(concat(concat({"point"}, coord_names("x", n)), concat({"vertex"}, coord_names("xstar", n))));
  long failures = 0, bad = 0;
  double min_norm = kInfinity, max_norm = 0;
  json errors = json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    try {
      const BaseResult r = global_base(atlas, f, pts[i], c.nopt);
      const bool ok = cones_equal(cone_from(r.base), adjusted_normal_cone(f, pts[i], c.nopt), c.cfg.tol.cone) &&
                      r.min_norm >= c.cfg.tol.zero && r.max_norm <= 1 + c.cfg.tol.feas;
      bad += !ok;
      min_norm = std::min(min_norm, r.min_norm);
      max_norm = std::max(max_norm, r.max_norm);
      long k = 0;
      for (const Vector& v : r.base.vertices()) {
        csv.cell(static_cast<long>(i)).cells(pts[i]).cell(k++).cells(v).end();
      }
    } catch (const std::exception& e) {
      ++failures;
      if (errors.size() < 10) errors.push_back({{"x", to_json(pts[i])}, {"error", e.what()}});
    }
  }
  Outcome o;
  o.pass = failures == 0 && bad == 0;
  o.result = {{"points", pts.size()},    {"failures", failures},         {"invariant_violations", bad},
              {"min_norm", number(min_norm)}, {"max_norm", number(max_norm)}, {"errors", errors}};
  o.files["base_map.csv"] = csv.str();
  o.summary = std::to_string(pts.size()) + " points, " + std::to_string(bad + failures) + " bad";
  return o;
}

Outcome usc(const Context& c) {
  const StepLevelFunction& f = c.inst.step();
  const Atlas atlas = effective_atlas(c);
  UscOptions opt;
  opt.radii = c.cfg.radii;
  opt.seed = c.cfg.seed;
  const auto map = [&](const Vector& y) { return global_base(atlas, f, y, c.nopt).base; };
  Csv csv(concat(concat({"point"}, coord_names("x", f.dim())), {"radius", "deviation"}));
  json reports = json::array();
  Outcome o;
  const auto pts = probe_points(c);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const UscReport r = usc_probe(map, pts[i], opt);
    o.pass = o.pass && r.pass;
    json dev = json::array();
    for (std::size_t k = 0; k < r.radii.size(); ++k) {
      csv.cell(static_cast<long>(i)).cells(pts[i]).cell(r.radii[k]).cell(r.deviation[k]).end();
      dev.push_back(number(r.deviation[k]));
    }
    reports.push_back({{"x", to_json(pts[i])}, {"radii", r.radii}, {"deviation", dev},
                       {"holes", r.holes}, {"monotone", r.monotone}, {"pass", r.pass}});
  }
  o.result = {{"tau", opt.tau}, {"probes", reports}};
  o.files["usc.csv"] = csv.str();
  o.summary = std::to_string(pts.size()) + " probe point(s)";
  return o;
}

Outcome closedness(const Context& c) {
  const StepLevelFunction& f = c.inst.step();
  ClosednessOptions opt;
  opt.seed = c.cfg.seed;
  opt.tau_cone = c.cfg.tol.cone;
  json reports = json::array();
  Outcome o;
  for (const Vector& x : probe_points(c)) {
    const ClosednessReport r = closedness_probe(f, x, opt, c.nopt);
    o.pass = o.pass && r.pass;
    json v = json::array();
    for (std::size_t k = 0; k < r.violations.size() && k < 10; ++k) {
      v.push_back({{"direction", to_json(r.violations[k].direction)}, {"limit", to_json(r.violations[k].limit)}});
    }
    reports.push_back({{"x", to_json(x)}, {"sequences", r.sequences}, {"settled", r.settled}, {"holes", r.holes},
                       {"violations", r.violations.size()}, {"examples", v}, {"pass", r.pass}});
  }
  o.result = {{"probes", reports}};
  o.summary = o.pass ? "no violations" : "violations found";
  return o;
}

Outcome quasimono(const Context& c) {
  QuasimonotoneOptions opt;
  opt.seed = c.cfg.seed;
  opt.tau_cone = c.cfg.tol.cone;
  const QuasimonotoneReport r = quasimonotonicity_probe(c.inst.step(), opt, c.nopt);
  json v = json::array();
  for (std::size_t k = 0; k < r.violations.size() && k < 10; ++k) {
    const auto& w = r.violations[k];
    v.push_back({{"x", to_json(w.x)}, {"y", to_json(w.y)}, {"xstar", to_json(w.xstar)}, {"ystar", to_json(w.ystar)}});
  }
  Outcome o;
  o.pass = r.pass;
  o.result = {{"pairs", r.pairs}, {"violations", r.violations.size()}, {"examples", v}};
  o.summary = std::to_string(r.violations.size()) + " violation(s) over " + std::to_string(r.pairs) + " pairs";
  return o;
}

Outcome solve_gqvi(const Context& c, double& wall) {
  GqviInstance g = gqvi_instance(c.inst);
  g.solver.seed = c.cfg.seed;
  g.solver.trace = c.cfg.trace;
  g.feas_tol = c.cfg.tol.feas;
  if (c.cfg.mesh > 0) g.solver.mesh = c.cfg.mesh;
  const SolveReport r = solve(g);
  wall = r.wall_time;
  Outcome o;
  o.pass = r.status == SolveStatus::solved;
  o.result = to_json(r);
  o.result["solver"] = to_json(g.solver);
  if (c.cfg.trace) {
    Csv csv(concat({"start", "iter"}, concat(coord_names("x", g.K.dim()), {"value"})));
    for (const TraceRow& t : r.trace) csv.cell(static_cast<long>(t.start)).cell(static_cast<long>(t.iter)).cells(t.x).cell(t.value).end();
    o.files["trace.csv"] = csv.str();
  }
  std::ostringstream s;
  s << to_string(r.status);
  if (r.x.size() > 0) s << " at x = " << to_json(r.x).dump() << ", residual " << r.residual;
  o.summary = s.str();
  return o;
}

Outcome solve_qo(const Context& c, double& wall) {
  QuasioptInstance q = quasiopt_instance(c.inst);
  q.normal = c.nopt;
  q.solver.seed = c.cfg.seed;
  q.solver.trace = false;
  const QuasioptReport r = solve_quasiopt(q);
  wall = r.gqvi.wall_time;
  Outcome o;
  o.pass = r.status == QuasioptStatus::verified;
  o.result = {{"status", to_string(r.status)},
              {"x", to_json(r.x)},
              {"f_x", number(r.f_x)},
              {"gqvi", to_json(r.gqvi)},
              {"grid_min", number(r.grid_min)},
              {"grid_argmin", to_json(r.grid_argmin)},
              {"grid_points", r.grid_points},
              {"argmin_shortcut", r.argmin_shortcut},
              {"witness_in_cone", r.witness_in_cone},
              {"witness_norm", number(r.witness_norm)}};
  const double diam = fixed_point_set(q.K).diameter_bound();
  const double mesh = c.cfg.mesh > 0 ? c.cfg.mesh : diam / 40;
  const std::vector<Vector> oracle = brute_force_quasiopt(q, mesh);
  bool near = false;
  if (r.x.size() > 0) {
    for (const Vector& p : oracle) near = near || (p - r.x).lpNorm<Eigen::Infinity>() <= mesh + 1e-12;
  }
  o.result["brute_force"] = {{"mesh", mesh}, {"solutions", oracle.size()}, {"x_within_one_cell", near}};
  o.summary = to_string(r.status);
  if (r.x.size() > 0) o.summary += " at x = " + to_json(r.x).dump();
  return o;
}

Outcome verify(const Context& c) {
  if (c.cfg.at.empty()) throw InputError("verify needs --at");
  const Vector x = single_point(c);
  const MovingPolytope& K = c.inst.require_K();
  Outcome o;
  const bool fixed = K.is_fixed_point(x, c.cfg.tol.feas);
  o.result = {{"x", to_json(x)}, {"fixed_point", fixed}};
  o.pass = fixed;
  if (!c.inst.T.is_null()) {
    const GqviInstance g = gqvi_instance(c.inst);
    MinimaxResult m;
    const bool ok = fixed && verify_solution(g, x, g.solver.tau_solve, &m);
    o.result["gqvi"] = {{"value", number(m.value)}, {"xstar", to_json(m.xstar)}, {"solved", ok}};
    o.pass = o.pass && ok;
  }
  if (c.inst.function && std::holds_alternative<StepLevelFunction>(*c.inst.function)) {
    const StepLevelFunction& f = c.inst.step();
    double gmin = 0;
    Vector where;
    const double mesh = (c.cfg.mesh > 0 ? c.cfg.mesh : 1.0 / 200.0) * fixed_point_set(K).diameter_bound();
    const long pts = grid_min_f(f, K.at(x), std::max(mesh, 1e-9), gmin, where);
    const double fx = evaluate(f, x, c.cfg.tol.feas);
    const bool ok = fixed && fx <= gmin + 1e-6;
    o.result["quasiopt"] = {{"f_x", number(fx)}, {"grid_min", number(gmin)}, {"grid_points", pts}, {"optimal", ok}};
    o.pass = o.pass && ok;
  }
  o.summary = o.pass ? "verified" : "not a solution";
  return o;
}

json config_json(const RunConfig& cfg) {
  return {{"command", cfg.command},
          {"instance", cfg.instance_path},
          {"seed", cfg.seed},
          {"tol", {{"feas", cfg.tol.feas}, {"gen", cfg.tol.gen}, {"cone", cfg.tol.cone}, {"zero", cfg.tol.zero}}},
          {"mesh", cfg.mesh},
          {"radii", cfg.radii},
          {"at", cfg.at},
          {"trace", cfg.trace}};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void apply_tolerance(Tolerances& tol, const std::string& spec) {
  const auto eq = spec.find('=');
  const std::string key = eq == std::string::npos ? "feas" : spec.substr(0, eq);
  const std::string val = eq == std::string::npos ? spec : spec.substr(eq + 1);
  double v = 0;
  try {
    std::size_t used = 0;
    v = std::stod(val, &used);
    if (used != val.size()) throw std::invalid_argument(val);
  } catch (const std::exception&) {
    throw InputError("--tol: cannot parse '" + spec + "'");
  }
  if (key == "feas") tol.feas = v;
  else if (key == "gen") tol.gen = v;
  else if (key == "cone") tol.cone = v;
  else if (key == "zero") tol.zero = v;
  else throw InputError("--tol: unknown tolerance '" + key + "' (feas, gen, cone, zero)");
}

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"check-quasiconvex", "sampled quasiconvexity and S^a convexity checks"},
    {"adjusted-set", "adjusted sublevel set at --at, with boundary samples in 1D/2D"},
    {"normal-cone", "strict and adjusted normal cones at --at"},
    {"build-atlas", "build and verify the atlas of the instance"},
    {"base-map", "global base map over the atlas region or at --at"},
    {"usc-probe", "upper semicontinuity probe of the base map"},
    {"closedness-probe", "closedness probe of N^a"},
    {"quasimono-probe", "quasimonotonicity probe of N^a"},
    {"solve-gqvi", "solve the GQVI of the instance"},
    {"solve-quasiopt", "solve and verify the quasioptimization problem"},
    {"verify", "verify a candidate --at against K and T or f"}};

int execute(const RunConfig& cfg) {
  const Instance inst = load_instance(cfg.instance_path);
  cfg.tol.validate();
  Context c{cfg, inst, NormalOpOptions{}};
  c.nopt.tol = cfg.tol;
  c.nopt.seed = cfg.seed;
  const std::string started = utc_now();
  double wall = 0;
  Outcome o;
  const std::string& cmd = cfg.command;
  if (cmd == "check-quasiconvex") {
    if (!inst.function) throw InputError("instance field 'function': missing");
    o = check_quasiconvex(c);
  } else if (cmd == "adjusted-set") {
    o = adjusted_set(c);
  } else if (cmd == "normal-cone") {
    o = normal_cone(c);
  } else if (cmd == "build-atlas") {
    o = build_atlas_cmd(c);
  } else if (cmd == "base-map") {
    o = base_map(c);
  } else if (cmd == "usc-probe") {
    o = usc(c);
  } else if (cmd == "closedness-probe") {
    o = closedness(c);
  } else if (cmd == "quasimono-probe") {
    o = quasimono(c);
  } else if (cmd == "solve-gqvi") {
    o = solve_gqvi(c, wall);
  } else if (cmd == "solve-quasiopt") {
    o = solve_qo(c, wall);
  } else if (cmd == "verify") {
    o = verify(c);
  } else {
    throw InputError("unknown command " + cmd);
  }

  const fs::path out(cfg.out_dir);
  json report{{"schema_version", kSchemaVersion},
              {"command", cmd},
              {"instance", inst.name},
              {"instance_hash", inst.hash},
              {"config", config_json(cfg)},
              {"pass", o.pass},
              {"result", o.result}};
  write_atomic(out / "report.json", report.dump(2) + "\n");
  json files = json::array({"report.json"});
  for (const auto& [name, content] : o.files) {
    write_atomic(out / name, content);
    files.push_back(name);
  }
  json manifest{{"schema_version", kSchemaVersion},
                {"command", cmd},
                {"instance_hash", inst.hash},
                {"config", config_json(cfg)},
                {"out", cfg.out_dir},
                {"threads", thread_count()},
                {"started", started},
                {"finished", utc_now()},
                {"solver_wall_time", wall},
                {"files", files}};
  write_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  std::cout << cmd << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.summary << ")\n";
  return o.pass ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv) {
  RunConfig cfg;
  std::vector<std::string> tols;
  CLI::App app{"Adjusted normal cones, quasiconvex checks and GQVI solvers"};
  app.name("adjcone");
  app.require_subcommand(1, 1);
  app.add_option("--instance", cfg.instance_path, "instance JSON file")->required();
  app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--tol", tols, "tolerance override key=value (feas, gen, cone, zero)");
  app.add_option("--mesh", cfg.mesh, "grid mesh or atlas cover step");
  app.add_option("--radii", cfg.radii, "probe radii, comma separated")->delimiter(',');
  app.add_option("--at", cfg.at, "probe point, comma separated")->delimiter(',')->allow_extra_args(false);
  app.add_flag("--trace", cfg.trace, "write the solver trace as CSV");
  for (const auto& [name, help] : kCommands) app.add_subcommand(name, help)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    for (const std::string& t : tols) apply_tolerance(cfg.tol, t);
    return execute(cfg);
  } catch (const InputError& e) {
    std::cerr << "adjcone: input error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "adjcone: error: " << e.what() << "\n";
  }
  return 1;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"adjcone"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace adjcone::cli

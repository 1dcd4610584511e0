#include "adjcone/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace adjcone {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw InputError("instance field '" + path + "': " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double real(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<int>();
}

std::vector<Vector> vectors_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of vectors");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_from_json(j[i], idx(path, i)));
  return out;
}

}  // namespace

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

json to_json(const Polytope& P) {
  json A = json::array();
  for (int i = 0; i < P.num_halfspaces(); ++i) A.push_back(to_json(Vector(P.normals().row(i).transpose())));
  json V = json::array();
  for (const Vector& v : P.vertices()) V.push_back(to_json(v));
  return {{"A", A}, {"b", to_json(P.offsets())}, {"V", V}};
}

json to_json(const GeneratedCone& K) {
  json g = json::array();
  for (const Vector& v : K.generators()) g.push_back(to_json(v));
  return {{"dim", K.dim()}, {"generators", g}};
}

json to_json(const StepLevelFunction& f) {
  json pieces = json::array();
  for (const Polytope& P : f.pieces()) pieces.push_back(to_json(P));
  return {{"type", "step"}, {"levels", f.levels()}, {"polytopes", pieces}, {"allow_unnested", !f.nested()}};
}

json to_json(const LocalChart& c) {
  return {{"z", to_json(c.z)}, {"lambda", c.lambda}, {"z0", to_json(c.z0)}, {"r_c", c.r_c}, {"eps", c.eps}};
}

json to_json(const Atlas& atlas) {
  json charts = json::array();
  for (const LocalChart& c : atlas.charts()) charts.push_back(to_json(c));
  return {{"charts", charts}, {"region", to_json(atlas.region())}, {"cover_step", atlas.cover_step()}};
}

json to_json(const MovingPolytope& K) {
  json A = json::array(), D = json::array();
  for (int i = 0; i < K.A().rows(); ++i) {
    A.push_back(to_json(Vector(K.A().row(i).transpose())));
    D.push_back(to_json(Vector(K.D().row(i).transpose())));
  }
  return {{"A", A}, {"b", to_json(K.b())}, {"D", D}, {"box", to_json(K.box())}};
}

json to_json(const SolverConfig& s) {
  return {{"starts", s.starts}, {"start_mesh", s.start_mesh}, {"max_iter", s.max_iter}, {"gamma", s.gamma},
          {"mesh", s.mesh}, {"tau_solve", s.tau_solve}, {"seed", s.seed}};
}

json to_json(const SolveReport& r) {
  return {{"status", to_string(r.status)},
          {"x", to_json(r.x)},
          {"residual", number(r.residual)},
          {"xstar", to_json(r.xstar)},
          {"iterations", r.iterations},
          {"starts_run", r.starts_run},
          {"evaluation_failures", r.evaluation_failures},
          {"from_grid", r.from_grid}};
}

Vector vector_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  Vector v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = real(j[i], idx(path, i));
  return v;
}

Matrix matrix_from_json(const json& j, const std::string& path, int cols) {
  if (!j.is_array()) schema_error(path, "expected an array of rows");
  Matrix M(static_cast<int>(j.size()), std::max(cols, 0));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = vector_from_json(j[i], idx(path, i));
    if (cols < 0) {
      cols = static_cast<int>(row.size());
      M.resize(static_cast<int>(j.size()), cols);
    }
    if (row.size() != cols) schema_error(idx(path, i), "expected " + std::to_string(cols) + " entries");
    M.row(static_cast<int>(i)) = row.transpose();
  }
  return M;
}

Polytope polytope_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected a polytope object");
  try {
    if (j.contains("A")) {
      const Vector b = vector_from_json(field(j, "b", path), sub(path, "b"));
      const Matrix A = matrix_from_json(j["A"], sub(path, "A"));
      if (A.rows() != b.size()) schema_error(sub(path, "b"), "length differs from the row count of A");
      return Polytope::from_halfspaces(A, b);
    }
    if (j.contains("V")) {
      const std::vector<Vector> V = vectors_from_json(j["V"], sub(path, "V"));
      if (V.empty()) schema_error(sub(path, "V"), "empty vertex list");
      return Polytope::from_points(V);
    }
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind("instance field", 0) == 0) throw;
    schema_error(path, msg);
  }
  schema_error(path, "needs \"A\" and \"b\", or \"V\"");
}

FunctionSpec function_from_json(const json& j, const std::string& path) {
  const json& type = field(j, "type", path);
  if (type == "step") {
    const json& levels = field(j, "levels", path);
    const json& polys = field(j, "polytopes", path);
    if (!levels.is_array() || !polys.is_array()) schema_error(path, "levels and polytopes must be arrays");
    std::vector<double> lv;
    for (std::size_t i = 0; i < levels.size(); ++i) lv.push_back(real(levels[i], idx(sub(path, "levels"), i)));
    std::vector<Polytope> ps;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      ps.push_back(polytope_from_json(polys[i], idx(sub(path, "polytopes"), i)));
    }
    const bool unnested = j.value("allow_unnested", false);
    try {
      return StepLevelFunction(std::move(lv), std::move(ps), unnested);
    } catch (const InputError& e) {
      schema_error(path, e.what());
    }
  }
  if (type == "analytic") {
    const json& name = field(j, "name", path);
    if (!name.is_string()) schema_error(sub(path, "name"), "expected a string");
    try {
      return AnalyticFunction::registered(name.get<std::string>(),
                                          polytope_from_json(field(j, "box", path), sub(path, "box")));
    } catch (const InputError& e) {
      const std::string msg = e.what();
      if (msg.rfind("instance field", 0) == 0) throw;
      schema_error(sub(path, "name"), msg);
    }
  }
  schema_error(sub(path, "type"), "expected \"step\" or \"analytic\"");
}

Atlas atlas_from_json(const json& j, const StepLevelFunction& f, const std::string& path) {
  const Polytope region = polytope_from_json(field(j, "region", path), sub(path, "region"));
  const double step = real(field(j, "cover_step", path), sub(path, "cover_step"));
  if (!(step > 0)) schema_error(sub(path, "cover_step"), "must be positive");
  if (!j.contains("charts")) {
    try {
      return build_atlas(f, region, step);
    } catch (const InputError& e) {
      schema_error(path, e.what());
    }
  }
  const json& charts = j["charts"];
  if (!charts.is_array()) schema_error(sub(path, "charts"), "expected an array");
  std::vector<LocalChart> out;
  for (std::size_t i = 0; i < charts.size(); ++i) {
    const std::string p = idx(sub(path, "charts"), i);
    LocalChart c;
    c.z = vector_from_json(field(charts[i], "z", p), sub(p, "z"));
    c.lambda = real(field(charts[i], "lambda", p), sub(p, "lambda"));
    c.z0 = vector_from_json(field(charts[i], "z0", p), sub(p, "z0"));
    c.eps = real(field(charts[i], "eps", p), sub(p, "eps"));
    c.r_c = charts[i].contains("r_c") ? real(charts[i]["r_c"], sub(p, "r_c")) : 0.0;
    if (c.z.size() != f.dim() || c.z0.size() != f.dim()) schema_error(p, "dimension mismatch");
    if (!(c.eps > 0)) schema_error(sub(p, "eps"), "must be positive");
    c.c = c.z - c.z0;
    out.push_back(std::move(c));
  }
  return Atlas(std::move(out), region, step);
}

MovingPolytope moving_polytope_from_json(const json& j, const std::string& path) {
  const Polytope box = polytope_from_json(field(j, "box", path), sub(path, "box"));
  const int n = box.dim();
  if (!j.contains("A")) return MovingPolytope::constant(box);
  const Matrix A = matrix_from_json(j["A"], sub(path, "A"), n);
  const Vector b = vector_from_json(field(j, "b", path), sub(path, "b"));
  const Matrix D =
      j.contains("D") ? matrix_from_json(j["D"], sub(path, "D"), n) : Matrix(Matrix::Zero(A.rows(), n));
  if (b.size() != A.rows()) schema_error(sub(path, "b"), "length differs from the row count of A");
  if (D.rows() != A.rows()) schema_error(sub(path, "D"), "row count differs from A");
  return MovingPolytope(A, b, D, box);
}

SolverConfig solver_from_json(const json& j, const std::string& path) {
  SolverConfig s;
  if (j.is_null()) return s;
  if (!j.is_object()) schema_error(path, "expected an object");
  if (j.contains("starts")) s.starts = integer(j["starts"], sub(path, "starts"));
  if (j.contains("start_mesh")) s.start_mesh = real(j["start_mesh"], sub(path, "start_mesh"));
  if (j.contains("max_iter")) s.max_iter = integer(j["max_iter"], sub(path, "max_iter"));
  if (j.contains("gamma")) s.gamma = real(j["gamma"], sub(path, "gamma"));
  if (j.contains("mesh")) s.mesh = real(j["mesh"], sub(path, "mesh"));
  if (j.contains("tau_solve")) s.tau_solve = real(j["tau_solve"], sub(path, "tau_solve"));
  if (s.starts < 0 || s.max_iter < 1) schema_error(path, "starts must be ≥ 0 and max_iter ≥ 1");
  if (!(s.gamma > 0 && s.gamma <= 1)) schema_error(sub(path, "gamma"), "must lie in (0, 1]");
  if (!(s.mesh > 0 && s.mesh <= 1)) schema_error(sub(path, "mesh"), "must lie in (0, 1]");
  if (!(s.start_mesh >= 0)) schema_error(sub(path, "start_mesh"), "must be ≥ 0");
  return s;
}

const StepLevelFunction& Instance::step() const {
  if (!function || !std::holds_alternative<StepLevelFunction>(*function)) {
    throw InputError("instance field 'function': this command needs a step function");
  }
  return std::get<StepLevelFunction>(*function);
}

const Atlas& Instance::require_atlas() const {
  if (!atlas) throw InputError("instance field 'atlas': missing");
  return *atlas;
}

const MovingPolytope& Instance::require_K() const {
  if (!K) throw InputError("instance field 'K': missing");
  return *K;
}

Instance parse_instance(const json& j) {
  if (!j.is_object()) schema_error("", "instance must be a JSON object");
  Instance inst;
  inst.raw = j;
  inst.hash = instance_hash(j);
  if (j.contains("schema_version") && j["schema_version"] != kSchemaVersion) {
    schema_error("schema_version", "unsupported (expected 1)");
  }
  inst.name = j.value("name", std::string("unnamed"));
  if (j.contains("function")) inst.function = function_from_json(j["function"], "function");
  if (j.contains("atlas")) inst.atlas = atlas_from_json(j["atlas"], inst.step(), "atlas");
  if (j.contains("K")) inst.K = moving_polytope_from_json(j["K"], "K");
  inst.T = j.value("T", json());
  if (j.contains("solver")) inst.solver = solver_from_json(j["solver"], "solver");
  if (j.contains("points")) inst.points = vectors_from_json(j["points"], "points");
  const int n = inst.function ? std::visit([](const auto& f) { return f.dim(); }, *inst.function)
                              : (inst.K ? inst.K->dim() : -1);
  if (inst.K && inst.K->dim() != n) schema_error("K", "dimension differs from the function");
  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    if (inst.points[i].size() != n) schema_error(idx("points", i), "dimension mismatch");
  }
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("instance file " + path.string() + " is not valid JSON: " + e.what());
  }
  Instance inst = parse_instance(j);
  if (inst.name == "unnamed") inst.name = path.stem().string();
  return inst;
}

PolytopeOperator operator_from_json(const json& T, const Instance& inst, const std::string& path) {
  const json& kind = field(T, "kind", path);
  if (kind == "constant") return PolytopeOperator::constant(polytope_from_json(field(T, "value", path), sub(path, "value")));
  if (kind == "tabulated") {
    const std::vector<Vector> sites = vectors_from_json(field(T, "sites", path), sub(path, "sites"));
    const json& values = field(T, "values", path);
    if (!values.is_array() || values.size() != sites.size()) {
      schema_error(sub(path, "values"), "must be an array as long as sites");
    }
    std::vector<Polytope> ps;
    for (std::size_t i = 0; i < values.size(); ++i) ps.push_back(polytope_from_json(values[i], idx(sub(path, "values"), i)));
    return PolytopeOperator::tabulated(sites, ps);
  }
  if (kind == "normal_base") return build_T(inst.step(), inst.require_atlas());
  schema_error(sub(path, "kind"), "expected \"constant\", \"tabulated\" or \"normal_base\"");
}

GqviInstance gqvi_instance(const Instance& inst) {
  if (inst.T.is_null()) throw InputError("instance field 'T': missing");
  return GqviInstance{inst.require_K(), operator_from_json(inst.T, inst, "T"), inst.solver, 1e-9};
}

QuasioptInstance quasiopt_instance(const Instance& inst) {
  QuasioptInstance q{inst.step(), inst.require_K(), inst.require_atlas(), {}, inst.solver};
  validate(q);
  return q;
}

std::string instance_hash(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace adjcone

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "adjcone/gqvi.hpp"
#include "adjcone/normal_op.hpp"
#include "adjcone/quasiconvex.hpp"
#include "adjcone/quasiopt.hpp"

namespace adjcone {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Finite doubles as numbers, ±∞ and NaN as null.
json number(double v);
json to_json(const Vector& v);
json to_json(const Polytope& P);
json to_json(const GeneratedCone& K);
json to_json(const StepLevelFunction& f);
json to_json(const LocalChart& c);
json to_json(const Atlas& atlas);
json to_json(const MovingPolytope& K);
json to_json(const SolverConfig& s);
json to_json(const SolveReport& r);

/// Parsers throw InputError naming the offending field path, e.g. "function.polytopes[1].A".
Vector vector_from_json(const json& j, const std::string& path);
Matrix matrix_from_json(const json& j, const std::string& path, int cols = -1);
/// {"A": [[...]], "b": [...]} or {"V": [[...]]}.
Polytope polytope_from_json(const json& j, const std::string& path);

using FunctionSpec = std::variant<StepLevelFunction, AnalyticFunction>;
/// {"type":"step","levels":[...],"polytopes":[...]} or {"type":"analytic","name":...,"box":{...}}.
FunctionSpec function_from_json(const json& j, const std::string& path);
/// {"charts":[...],"region":{...},"cover_step":...} or, without charts, build parameters for build_atlas.
Atlas atlas_from_json(const json& j, const StepLevelFunction& f, const std::string& path);
MovingPolytope moving_polytope_from_json(const json& j, const std::string& path);
SolverConfig solver_from_json(const json& j, const std::string& path);

struct Instance {
  std::string name;
  json raw;
  std::string hash;
  std::optional<FunctionSpec> function;
  std::optional<Atlas> atlas;
  std::optional<MovingPolytope> K;
  json T;  ///< operator description, null when absent
  SolverConfig solver;
  std::vector<Vector> points;  ///< default probe points

  const StepLevelFunction& step() const;
  const Atlas& require_atlas() const;
  const MovingPolytope& require_K() const;
};

Instance parse_instance(const json& j);
Instance load_instance(const std::filesystem::path& path);

/// {"kind":"constant","value":P}, {"kind":"tabulated","sites":[...],"values":[...]}
/// or {"kind":"normal_base"} (built from the instance function and atlas).
/// The normal_base operator keeps references into `inst`.
PolytopeOperator operator_from_json(const json& T, const Instance& inst, const std::string& path);
GqviInstance gqvi_instance(const Instance& inst);
QuasioptInstance quasiopt_instance(const Instance& inst);

/// 64-bit FNV-1a of the canonical (sorted-key, compact) serialization, as 16 hex digits.
std::string instance_hash(const json& j);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace adjcone

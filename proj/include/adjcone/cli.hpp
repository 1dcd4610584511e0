#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adjcone/types.hpp"

namespace adjcone::cli {

struct RunConfig {
  std::string command;
  std::string instance_path;
  std::string out_dir = "adjcone-out";
  std::uint64_t seed = 42;
  Tolerances tol;
  double mesh = 0.0;            ///< 0 keeps the command default
  std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> at;       ///< probe point, empty for the instance points
  bool trace = false;
};

/// Exit codes: 0 pass or solved, 2 fail or residual floor (reports still
/// written), 1 input error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace adjcone::cli

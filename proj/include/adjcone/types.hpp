#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace adjcone {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised for malformed inputs: dimension mismatches, violated preconditions,
/// invalid instance data.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical kernel cannot produce a certified answer
/// (LP failure, QP non-convergence, post-verification failure).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Slack parameters shared by every module.
struct Tolerances {
  double feas = 1e-9;   ///< membership slack
  double gen = 1e-12;   ///< minimum generator norm
  double cone = 1e-6;   ///< cone-equality slack
  double zero = 1e-3;   ///< nonzero-base margin

  void validate() const {
    if (!(feas > 0 && gen > 0 && cone > 0 && zero > 0)) {
      throw InputError("tolerances must be strictly positive");
    }
    if (!(zero > cone)) {
      throw InputError("tolerance 'zero' must exceed tolerance 'cone'");
    }
  }
};

inline void require_dim(const Vector& x, int dim, const char* what) {
  if (x.size() != dim) {
    throw InputError(std::string(what) + ": dimension mismatch (expected " +
                     std::to_string(dim) + ", got " +
                     std::to_string(x.size()) + ")");
  }
}

}  // namespace adjcone

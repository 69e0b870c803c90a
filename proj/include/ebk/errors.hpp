#pragma once

#include <stdexcept>
#include <string>

namespace ebk {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Result magnitude cannot be represented (e.g. expm of a matrix whose norm
/// exceeds the scaling budget).
struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative kernel (SVD sweep, power iteration, EBK cycle loop,
/// reference halving) hit its cap without meeting its tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A bound formula was queried outside its region of validity.
struct UndefinedBoundError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ebk

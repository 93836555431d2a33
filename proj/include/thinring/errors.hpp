#pragma once

#include <stdexcept>
#include <string>

namespace thinring {

/// Boundary or interior map is invalid (1 + eps*x1 <= 0, non-invertible map, |theta| too large).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear or nonlinear solve failed (singular system, Newton non-convergence).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The constraint projection (area / first moment) did not converge.
class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A NaN or Inf appeared while evaluating a diagnostic quantity.
class DiagnosticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical inputs that cannot be nondimensionalized or a surface-tension law that is invalid.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace thinring

#pragma once

#include <stdexcept>
#include <string>

namespace shtc {

/// Placement of a discrete unknown on the staggered mesh.
enum class Location { Cell, Vertex };

inline const char* to_string(Location loc) {
  return loc == Location::Cell ? "cell" : "vertex";
}

/// Base class for numerical failures raised while advancing a solution.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state left the admissible set (e.g. non-positive density, indefinite Hessian).
class AdmissibilityError : public SolverError {
 public:
  using SolverError::SolverError;
};

class ConvergenceError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Malformed run configuration or command line input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace shtc

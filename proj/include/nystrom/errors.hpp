#pragma once

#include <stdexcept>
#include <string>

namespace nystrom {

/// Invalid argument or configuration (rule order out of range, bad phi, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Boundary cannot be built or decomposed as requested.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Something went wrong numerically: singular matrix, non-finite entry,
/// coincident nodes, evaluation point on the boundary.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nystrom

#pragma once

#include <stdexcept>
#include <string>

namespace strayfem {

/// A parameter or combination of parameters outside the supported range
/// (bad refinement level, grading exponent, domain not contained in the
/// bounded zone, unknown case name, ...).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A requested operation would exceed a configured budget (vertex count,
/// subdivision depth, quadrature cell count).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// A mesh operation produced or detected a broken mesh (inverted element,
/// face shared by more than two elements).
class MeshError : public std::runtime_error {
 public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver stopped without reaching its tolerance.  Carries the
/// state reached so callers can report or retry.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

/// An adaptive quadrature exhausted its refinement budget before meeting the
/// requested tolerance.  The best available estimate is preserved.
class ToleranceNotMet : public std::runtime_error {
 public:
  ToleranceNotMet(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what), estimate(estimate), error_estimate(error_estimate) {}
  double estimate;
  double error_estimate;
};

/// File could not be opened or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace strayfem

#pragma once

// The benchmark magnetization configurations, their closed-form stray-field
// potentials and energies where known, and a slow direct-integration oracle
// that computes the potential from the Green kernel without any mesh.

#include <string>
#include <vector>

#include "strayfem/domain.hpp"
#include "strayfem/geom3.hpp"

namespace strayfem {

enum class CaseKind { UniformBall, VortexBall, UniformCube };

struct BenchmarkCase {
  CaseKind kind = CaseKind::UniformBall;
  /// Name used on the command line and in CSV output.
  std::string name;
  DomainShape domain;
  /// Recommended circumradius of the core tetrahedron.
  double default_R0 = 4.0;
  /// Constant magnetization shortcut (exact loads on uncut elements).
  bool uniform_m = false;
  Vec3 m_uniform{};
  bool has_exact_potential = false;
  /// Total magnetostatic energy (1/2) int |grad u|^2, NaN when unknown.
  double exact_energy = 0.0;

  /// M(x); zero outside the domain.  Bounded everywhere (the vortex field
  /// is set to zero on its polar axis, a measure-zero set).
  Vec3 magnetization(const Vec3& x) const;

  /// Closed-form potential.  Throws ConfigError when has_exact_potential
  /// is false.
  double exact_potential(const Vec3& x) const;
};

/// Case registry: "sphere-uniform", "sphere-vortex", "cube-uniform".
BenchmarkCase make_case(const std::string& name);
std::vector<std::string> case_names();

/// Potential at x by adaptive integration of the dipole kernel,
///
///     u(x) = 1/(4 pi) int_Omega M(y) . (x - y)/|x - y|^3 dy,
///
/// independent of any mesh or basis.  Interior points exclude a small ball
/// around x (the kernel integrates to zero over symmetric neighborhoods, so
/// the bias is O(eps^2)).  Throws ToleranceNotMet when the cell budget runs
/// out first.
double green_potential(const BenchmarkCase& c, const Vec3& x, double rel_tol = 1e-4);

/// The weighted L2 norm of the exact potential over all of space,
/// || u ||^2 = int u(x)^2 / (1 + |x|^2) dx, computed by nested adaptive
/// quadrature in spherical coordinates (the closed-form cases are
/// axisymmetric).  Used as the denominator of relative potential errors.
double exact_weighted_norm(const BenchmarkCase& c);

}  // namespace strayfem

#pragma once

// Error measures, convergence rates and result records for the benchmark
// harness.
//
// The potential error is measured in the weighted norm
//
//     ||e||^2 = int_{R^3} e(x)^2 / (1 + |x|^2) dx,
//
// which is finite for functions decaying like 1/|x| and puts the near and
// far fields on a common footing.  The far-field part is evaluated on the
// star elements through the inversion, with weight r^-6 and the discrete
// potential reconstructed as rho^gamma uhat.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "strayfem/cases.hpp"
#include "strayfem/femspace.hpp"

namespace strayfem {

/// One benchmark run, as written to CSV.
struct RunRecord {
  std::string case_name;
  int level = 0;
  double mu = 0.0;
  double gamma = 0.0;
  double R0 = 0.0;
  std::int64_t dof = 0;
  double h = 0.0;
  /// Relative weighted potential error; NaN when no closed form exists.
  double e0 = 0.0;
  /// Discrete energy (1/2) b . x.
  double energy = 0.0;
  /// Relative energy error; NaN when the exact energy is unknown.
  double e_energy = 0.0;
  int cg_iters = 0;
  double seconds = 0.0;
};

/// Relative weighted error of the discrete potential against the case's
/// closed form.  quad_degree controls the element rule on both meshes.
double weighted_error(const DofSpace& space, const FieldPair& u, const BenchmarkCase& c,
                      int quad_degree = 5);

/// Weighted norm of the discrete potential itself (same quadrature path).
double weighted_norm(const DofSpace& space, const FieldPair& u, int quad_degree = 5);

/// Discrete magnetostatic energy (1/2) b . x.
double discrete_energy(const std::vector<double>& b, const std::vector<double>& x);

/// Relative energy error |E_h - E| / E.  The discrete energy approaches the
/// exact one from below; exceeding it beyond `slack` indicates a broken
/// assembly and throws MeshError.
double energy_error(double discrete, double exact, double slack = 1e-3);

/// Least-squares slope of log(err) against log(h) over the `use_levels`
/// smallest mesh sizes (entries with non-finite err are ignored).
double convergence_slope(const std::vector<double>& h, const std::vector<double>& err,
                         int use_levels = 4);

struct ProfileSample {
  double radius = 0.0;
  double value = 0.0;
  double exact = 0.0;  // NaN when unknown
};

/// Samples the potential along the ray t * direction, t in [t0, t1],
/// geometrically spaced when log_spacing is set.
std::vector<ProfileSample> radial_profile(const DofSpace& space, const FieldPair& u,
                                          const BenchmarkCase& c, const Vec3& direction,
                                          double t0, double t1, int samples,
                                          bool log_spacing = true);

/// CSV with the fixed header
/// case,L,mu,gamma,R0,dof,h,e0,energy,e_energy,cg_iters,seconds.
void write_csv(std::ostream& os, const std::vector<RunRecord>& records);
std::string csv_header();
std::string csv_row(const RunRecord& r);

}  // namespace strayfem

#pragma once

// Quadrature on reference tetrahedra plus the small set of adaptive
// integrators used by the benchmark oracles.
//
// Tetrahedron rules are stored in barycentric coordinates with weights that
// sum to one, so an integral over a physical element K is
//
//     int_K f = |K| * sum_q w_q f(x_q),   x_q = sum_a lambda_qa v_a.
//
// Degrees 1, 2 and 5 are tabulated symmetric rules with positive weights.
// Higher degrees fall back to a tensor Gauss-Legendre rule on the collapsed
// (Duffy) cube, which also has strictly positive weights.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "strayfem/geom3.hpp"

namespace strayfem {

struct QuadratureRule {
  int degree = 0;
  /// Barycentric coordinates of each node.
  std::vector<std::array<double, 4>> point;
  /// Volume-fraction weights; sum to 1.
  std::vector<double> weight;

  std::size_t size() const { return point.size(); }
};

/// Rule exact on polynomials of total degree <= degree.  Cached; the
/// returned reference stays valid for the lifetime of the program.
const QuadratureRule& tet_rule(int degree);

/// Gauss-Legendre nodes/weights on [0,1]; weights sum to 1.
std::vector<std::pair<double, double>> gauss_legendre_01(int n);

/// Physical node for barycentric coordinates lambda on element (v0..v3).
inline Vec3 bary_point(const std::array<double, 4>& lambda, const Vec3& v0, const Vec3& v1,
                       const Vec3& v2, const Vec3& v3) {
  return lambda[0] * v0 + lambda[1] * v1 + lambda[2] * v2 + lambda[3] * v3;
}

/// int_K f with the given rule on the tetrahedron (v0..v3).
template <class F>
double integrate_tet(const QuadratureRule& rule, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                     const Vec3& v3, F&& f) {
  const double vol = std::abs(signed_volume(v0, v1, v2, v3));
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    acc += rule.weight[q] * f(bary_point(rule.point[q], v0, v1, v2, v3));
  return vol * acc;
}

/// Adaptive 1d integration by interval bisection with an embedded
/// Gauss-Legendre pair.  Throws ToleranceNotMet when max_depth is exhausted
/// on some subinterval before the local tolerance is met.
double integrate_adaptive_1d(const std::function<double(double)>& f, double a, double b,
                             double abs_tol, int max_depth = 40);

struct Box3 {
  Vec3 lo, hi;
};

/// Adaptive integration over an axis-aligned box, refining the cells with
/// the largest one-level Richardson error estimate first.  Throws
/// ToleranceNotMet (carrying the best estimate) once max_cells cells have
/// been spent without reaching abs_tol.
double integrate_adaptive_box(const std::function<double(const Vec3&)>& f, const Box3& box,
                              double abs_tol, std::size_t max_cells = 400000);

}  // namespace strayfem

#pragma once

// Assembly of the coupled stiffness system.
//
// The bilinear form is int_{R^3} grad v . grad w, split into the central
// mesh (plain P1 stiffness, computed exactly) and the infinite sectors.
// On a sector the substitution x -> phi(x) turns the integral over the
// infinite piece into one over the star elements:
//
//     int_T grad v_a . grad v_b dx
//       = int_{K*} G_a(x) . G_b(x) r(x)^-6 dx,
//
// where for a P1 star basis function lambda_a and rho = r(x),
//
//     G_a = -gamma rho^(gamma+1) lambda_a g
//           + rho^(gamma+2) (grad lambda_a - 2 (x . grad lambda_a)/rho g).
//
// The weight rho^-6 is |det D phi|.  Quadrature rules with strictly
// interior nodes keep rho > 0 even on elements touching the origin.
//
// The load is l(w) = int_Omega M . grad w over the magnetized domain only:
// exact on uncut elements when M is constant, quadrature otherwise, and on
// cut elements quadrature of the indicator-masked integrand over one level
// of local subdivision.
//
// Everything runs serially in element order, so assemblies are bitwise
// reproducible.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "strayfem/cases.hpp"
#include "strayfem/femspace.hpp"

namespace strayfem {

/// Compressed sparse rows, full symmetric storage, columns sorted per row.
struct CsrMatrix {
  std::int64_t n = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int32_t> col;
  std::vector<double> val;

  std::int64_t nnz() const { return std::int64_t(col.size()); }

  /// Adds v at (i, j); the entry must exist in the pattern.
  void add(std::int32_t i, std::int32_t j, double v);
  double get(std::int32_t i, std::int32_t j) const;

  /// y = A x.
  void matvec(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> diagonal() const;
};

/// Sparsity pattern covering every element dof pair of both meshes.
CsrMatrix build_pattern(const DofSpace& space);

struct AssemblyOptions {
  /// Rule for the pulled-back far-field integrals.
  int infinite_degree = 5;
  /// Rule for uncut elements with non-constant magnetization.
  int inside_degree = 2;
  /// Rule for (sub-)elements cut by the domain boundary.
  int cut_degree = 5;
  /// Subdivide cut elements once before sampling the indicator.
  bool subdivide_cut = true;
};

/// Exact P1 stiffness of the central mesh, accumulated into A.
void assemble_central_stiffness(const DofSpace& space, CsrMatrix& A);

/// Mapped stiffness of the four infinite sectors, accumulated into A.
void assemble_infinite_stiffness(const DofSpace& space, int quad_degree, CsrMatrix& A);

/// Load vector l(w) = int_Omega M . grad w on the central mesh.
std::vector<double> assemble_load(const DofSpace& space, const BenchmarkCase& c,
                                  const AssemblyOptions& opts = {});

struct SparseSystem {
  CsrMatrix A;
  std::vector<double> b;
};

/// Pattern + both stiffness parts + load.
SparseSystem assemble_system(const DofSpace& space, const BenchmarkCase& c,
                             const AssemblyOptions& opts = {});

/// MatrixMarket coordinate output (symmetric, lower triangle, 1-based).
void write_matrix_market(const CsrMatrix& A, std::ostream& os);

}  // namespace strayfem

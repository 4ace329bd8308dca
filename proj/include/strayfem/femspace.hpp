#pragma once

// Continuous piecewise linear functions on the whole space, represented by
// a pair of meshes: plain P1 on the central mesh, and on each infinite
// sector the mapped functions
//
//     v(x) = r(x)^-gamma uhat(phi(x)),
//
// where uhat is P1 on the star mesh with uhat(0) = 0.  Global continuity
// across the interface r = 1 couples the two parts: an interface vertex
// carries a single unknown shared by its central and star incarnations
// (r^-gamma = 1 there), and the origin value of uhat is constrained to
// zero, which makes v decay like r^-gamma at infinity.
//
// Degrees of freedom are numbered deterministically: all central vertices
// first, in vertex order (interface vertices included), then the
// non-interface, non-origin star vertices in vertex order.

#include <cstdint>
#include <vector>

#include "strayfem/geometry.hpp"
#include "strayfem/mesh.hpp"

namespace strayfem {

struct DofSpace {
  const SpaceDecomposition* decomp = nullptr;
  const MeshPair* pair = nullptr;
  double gamma = 1.0;
  int degree = 1;

  /// Dof of each central vertex (identity numbering).
  std::vector<std::int32_t> central_dof;
  /// Dof of each star vertex; -1 for the origin (constrained to zero).
  std::vector<std::int32_t> star_dof;
  std::int64_t n_dofs = 0;
  std::int64_t n_interface = 0;
};

/// The ansatz space on a mesh pair.  gamma must exceed -1/2 for the far
/// field to have finite energy; only degree 1 is implemented.  The
/// decomposition and mesh pair must outlive the returned space.
DofSpace build_dof_space(const SpaceDecomposition& d, const MeshPair& pair, double gamma = 1.0,
                         int degree = 1);

/// A function of the space, as its coefficient vector.
struct FieldPair {
  std::vector<double> coeff;
};

struct EvalResult {
  double value = 0.0;
  Vec3 gradient{};
};

/// P1 value/gradient on the central mesh.  Requires r(x) <= 1 up to
/// location tolerance; throws ConfigError when x lies outside.
EvalResult eval_central(const DofSpace& space, const FieldPair& u, const Vec3& x);

/// uhat and its gradient at a star-mesh point (pulled-back coordinates).
EvalResult eval_uhat(const DofSpace& space, const FieldPair& u, const Vec3& xstar);

/// The mapped far-field function at a physical point with r(x) >= 1:
///     v(x)  = r^-gamma uhat(phi(x)),
///     grad v = -gamma r^(-gamma-1) uhat g + r^(-gamma-2) (grad uhat
///              - 2 (x . grad uhat) / r g).
EvalResult eval_far(const DofSpace& space, const FieldPair& u, const Vec3& x);

/// Dispatches on the zone of x.
EvalResult eval_potential(const DofSpace& space, const FieldPair& u, const Vec3& x);

/// Gradients of the four barycentric coordinates of element t (constant).
std::array<Vec3, 4> p1_gradients(const TetMesh& mesh, std::int32_t t);

}  // namespace strayfem

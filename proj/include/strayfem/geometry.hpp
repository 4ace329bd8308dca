#pragma once

// Decomposition of R^3 into a bounded polyhedral core and finitely many
// infinite sectors, together with the inversion map used to pull the
// unbounded sectors back onto their bounded mirror images.
//
// The core Omega_0 is a regular tetrahedron with vertices a_1..a_4 and the
// origin at its centroid.  Each face of Omega_0 spans an infinite sector
//
//     T_i = { sum_k c_k a_k : c_k >= 0 for k != i, sum_k c_k >= 1 },
//
// the cone over face i truncated at the face plane, and R^3 is the union of
// Omega_0 and the four T_i with disjoint interiors.  Inside sector i the
// polygonal radius is the linear function
//
//     r_i(x) = g_i . x,   g_i = h_i / |h_i|^2,
//
// where h_i is the foot of the perpendicular dropped from the origin onto
// the plane of face i.  r is continuous across sector boundaries, equals 1
// exactly on the boundary of Omega_0, and grows linearly along each ray.
// The inversion
//
//     phi(x) = x / r(x)^2
//
// is an involution of each sector that exchanges the infinite part T_i with
// the bounded pyramid S_i = conv(0, face i) and fixes the interface r = 1.
// Its Jacobian is
//
//     Dphi(x) = r^-2 (I - 2 x g^T / r),    |det Dphi| = r^-6,
//
// which is what the far-field assembly and evaluation routines rely on.

#include <array>
#include <vector>

#include "strayfem/geom3.hpp"

namespace strayfem {

/// One sector of the decomposition: the infinite cone piece T_i behind face
/// i of the core tetrahedron, plus the data needed to evaluate r and phi on
/// it.
struct Sector {
  int index = -1;
  /// The three vertices of the spanning face, in a fixed order.
  std::array<Vec3, 3> face;
  /// Foot of the perpendicular from the origin onto the face plane.
  Vec3 altitude;
  /// g = altitude/|altitude|^2, the (constant) gradient of r on this sector.
  Vec3 gradient;
  /// Inverse of the matrix [f0 f1 f2]; yields cone coordinates of a point.
  Mat3 face_coords;

  /// Polygonal radius restricted to this sector, r_i(x) = g_i . x.
  double radius(const Vec3& x) const { return dot(gradient, x); }

  /// Coordinates c with x = c0 f0 + c1 f1 + c2 f2.  x lies in the closed
  /// cone over the face iff all components are >= 0.
  Vec3 cone_coords(const Vec3& x) const { return face_coords.apply(x); }

  /// Builds a sector from its spanning face (vertices must not be
  /// collinear and the face plane must not contain the origin).
  static Sector from_face(int index, const Vec3& f0, const Vec3& f1, const Vec3& f2);
};

/// Which zone a point belongs to.
enum class Zone { Central, Infinite };

struct Location {
  Zone zone = Zone::Central;
  /// Owning sector for both zones: the bounded pyramid S_i or the infinite
  /// piece T_i.  Points on shared faces get the lowest admissible index.
  int sector = -1;
};

/// The full decomposition.  Built once per run and treated as immutable.
struct SpaceDecomposition {
  double R0 = 0.0;
  /// Vertices a_1..a_4 of the core tetrahedron (circumradius R0).
  std::array<Vec3, 4> outer_vertex;
  std::vector<Sector> sectors;
  /// Equivalence constants c1 |x| <= r(x) <= c2 |x|, computed numerically
  /// over a fine direction grid at construction.
  double c1 = 0.0;
  double c2 = 0.0;

  /// Index of the sector whose closed cone contains x; ties on shared faces
  /// resolve to the lowest index.  Any x != 0 belongs to at least one cone.
  int sector_lookup(const Vec3& x) const;
};

/// Builds the decomposition whose core is the regular tetrahedron with
/// circumradius R0 > 0, one vertex on the positive z axis and centroid at
/// the origin.  Throws ConfigError for R0 <= 0.
SpaceDecomposition build_big_tetra_decomposition(double R0);

/// Polygonal radius r(x) (continuous, piecewise linear, 1 on the interface).
/// Throws ConfigError for x = 0, where r vanishes and no sector owns x.
double polygonal_radius(const SpaceDecomposition& d, const Vec3& x);

/// The inversion phi(x) = x / r(x)^2.  Involution: phi(phi(x)) = x.
Vec3 inversion(const SpaceDecomposition& d, const Vec3& x);

/// Jacobian of phi at x (away from sector boundaries, where r is smooth).
Mat3 inversion_jacobian(const SpaceDecomposition& d, const Vec3& x);

/// Zone and owning sector of x.  Points with r(x) <= 1 are Central.
Location locate(const SpaceDecomposition& d, const Vec3& x);

}  // namespace strayfem

#include "strayfem/geometry.hpp"

#include <cmath>
#include <limits>

#include "strayfem/errors.hpp"

namespace strayfem {

Sector Sector::from_face(int index, const Vec3& f0, const Vec3& f1, const Vec3& f2) {
  Sector s;
  s.index = index;
  s.face = {f0, f1, f2};

  // Unit normal of the face plane; the altitude foot is the origin projected
  // onto that plane, h = (n . f0) n.
  Vec3 n = cross(f1 - f0, f2 - f0);
  const double nl = norm(n);
  if (!(nl > 0.0)) throw ConfigError("sector face is degenerate");
  n = n / nl;
  const double dist = dot(n, f0);
  if (dist == 0.0) throw ConfigError("sector face plane passes through the origin");
  s.altitude = dist * n;
  s.gradient = s.altitude / norm2(s.altitude);
  s.face_coords = Mat3::from_columns(f0, f1, f2).inverse();
  return s;
}

int SpaceDecomposition::sector_lookup(const Vec3& x) const {
  // Pick the sector whose cone contains x most comfortably: maximize the
  // smallest cone coordinate.  On shared faces several sectors tie at ~0;
  // the scan order makes the lowest index win.
  int best = 0;
  double best_min = -std::numeric_limits<double>::infinity();
  for (const Sector& s : sectors) {
    const Vec3 c = s.cone_coords(x);
    const double m = std::min(c.x, std::min(c.y, c.z));
    if (m > best_min * (1.0 + 1e-14) + 1e-300) {
      // Strictly better beyond rounding noise.
      best = s.index;
      best_min = m;
    }
  }
  return best;
}

SpaceDecomposition build_big_tetra_decomposition(double R0) {
  if (!(R0 > 0.0)) throw ConfigError("decomposition radius must be positive");

  SpaceDecomposition d;
  d.R0 = R0;

  const double s2 = std::sqrt(2.0);
  const double s23 = std::sqrt(2.0 / 3.0);
  d.outer_vertex = {Vec3{2.0 * s2 / 3.0, 0.0, -1.0 / 3.0} * R0,
                    Vec3{-s2 / 3.0, s23, -1.0 / 3.0} * R0,
                    Vec3{-s2 / 3.0, -s23, -1.0 / 3.0} * R0,
                    Vec3{0.0, 0.0, 1.0} * R0};

  // Sector i sits behind the face opposite vertex a_i.
  d.sectors.reserve(4);
  for (int i = 0; i < 4; ++i) {
    std::array<Vec3, 3> f;
    int k = 0;
    for (int j = 0; j < 4; ++j)
      if (j != i) f[k++] = d.outer_vertex[j];
    d.sectors.push_back(Sector::from_face(i, f[0], f[1], f[2]));
  }

  // Norm equivalence constants.  r/|x| is constant along rays and attains
  // its extremes over directions, so scanning a barycentric grid of the
  // interface faces suffices.  The grid size is divisible by 3 so the face
  // centers (where the maximum sits) are sampled exactly; the minimum sits
  // at the corners.  For the regular tetrahedron the values are 1/R0
  // (circumradius direction) and 3/R0 (inradius direction).
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  const int n = 66;
  for (const Sector& s : d.sectors) {
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; a + b <= n; ++b) {
        const double u = double(a) / n;
        const double v = double(b) / n;
        const double w = 1.0 - u - v;
        const Vec3 x = u * s.face[0] + v * s.face[1] + w * s.face[2];
        const double q = s.radius(x) / norm(x);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
      }
    }
  }
  d.c1 = lo;
  d.c2 = hi;
  return d;
}

double polygonal_radius(const SpaceDecomposition& d, const Vec3& x) {
  if (x.x == 0.0 && x.y == 0.0 && x.z == 0.0)
    throw ConfigError("polygonal radius is undefined at the origin");
  return d.sectors[d.sector_lookup(x)].radius(x);
}

Vec3 inversion(const SpaceDecomposition& d, const Vec3& x) {
  const double r = polygonal_radius(d, x);
  return x / (r * r);
}

Mat3 inversion_jacobian(const SpaceDecomposition& d, const Vec3& x) {
  const Sector& s = d.sectors[d.sector_lookup(x)];
  const double r = s.radius(x);
  // Dphi = r^-2 (I - 2 x g^T / r).
  return (1.0 / (r * r)) * (Mat3::identity() - (2.0 / r) * Mat3::outer(x, s.gradient));
}

Location locate(const SpaceDecomposition& d, const Vec3& x) {
  Location loc;
  loc.sector = d.sector_lookup(x);
  const double r = d.sectors[loc.sector].radius(x);
  loc.zone = (r <= 1.0) ? Zone::Central : Zone::Infinite;
  return loc;
}

}  // namespace strayfem

#include <cmath>
#include <random>

#include <doctest.h>

#include "strayfem/errors.hpp"
#include "strayfem/geometry.hpp"

using namespace strayfem;

namespace {

std::mt19937_64 rng(20240811);

Vec3 random_direction() {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{n(rng), n(rng), n(rng)};
  while (norm(v) < 1e-3) v = {n(rng), n(rng), n(rng)};
  return v / norm(v);
}

/// Random point with |x| log-uniform in [1e-6, 1e6].
Vec3 random_point() {
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  return std::pow(10.0, u(rng)) * random_direction();
}

double rel_diff(const Vec3& a, const Vec3& b) {
  return norm(a - b) / std::max(norm(b), 1e-300);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("core tetrahedron vertices and derived data") {
  const auto d = build_big_tetra_decomposition(4.0);
  REQUIRE(d.sectors.size() == 4);

  // Apex on the z axis, all vertices at circumradius, centroid at 0.
  CHECK(norm(d.outer_vertex[3] - Vec3{0, 0, 4}) < 1e-14);
  Vec3 centroid{};
  for (const Vec3& a : d.outer_vertex) {
    CHECK(norm(a) == doctest::Approx(4.0).epsilon(1e-14));
    centroid += 0.25 * a;
  }
  CHECK(norm(centroid) < 1e-14);

  const auto d1 = build_big_tetra_decomposition(1.0);
  CHECK(norm(d1.outer_vertex[0] - Vec3{2.0 * std::sqrt(2.0) / 3.0, 0.0, -1.0 / 3.0}) < 1e-15);

  // The altitude of the face opposite a_i is -a_i/3, so g_i = -3 a_i/R0^2.
  for (int i = 0; i < 4; ++i) {
    CHECK(norm(d.sectors[i].altitude + d.outer_vertex[i] / 3.0) < 1e-12);
    CHECK(norm(d.sectors[i].gradient + (3.0 / 16.0) * d.outer_vertex[i]) < 1e-13);
  }

  // Norm equivalence constants of the regular tetrahedron.
  CHECK(d.c1 == doctest::Approx(1.0 / 4.0).epsilon(1e-12));
  CHECK(d.c2 == doctest::Approx(3.0 / 4.0).epsilon(1e-12));

  CHECK_THROWS_AS(build_big_tetra_decomposition(0.0), ConfigError);
  CHECK_THROWS_AS(build_big_tetra_decomposition(-1.0), ConfigError);
}

TEST_CASE("radius of a hand-built sector") {
  // Face through the unit points: r(x) = x + y + z on its cone.
  const auto s = Sector::from_face(0, {1, 0, 0}, {0, 1, 0}, {0, 0, 1});
  CHECK(norm(s.gradient - Vec3{1, 1, 1}) < 1e-14);
  CHECK(s.radius({0.2, 0.3, 0.1}) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(Sector::from_face(0, {1, 0, 0}, {0, 1, 0}, {-1, 1, 0}), ConfigError);
}

TEST_CASE("inversion is an involution with reciprocal radius") {
  const auto d = build_big_tetra_decomposition(4.0);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 x = random_point();
    const double r = polygonal_radius(d, x);
    const Vec3 y = inversion(d, x);
    CHECK(polygonal_radius(d, y) == doctest::Approx(1.0 / r).epsilon(1e-12));
    CHECK(rel_diff(inversion(d, y), x) < 1e-12);
  }
  CHECK_THROWS_AS(polygonal_radius(d, Vec3{}), ConfigError);
  CHECK_THROWS_AS(inversion(d, Vec3{}), ConfigError);
}

TEST_CASE("interface points are fixed and satisfy the altitude identity") {
  const auto d = build_big_tetra_decomposition(4.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Sector& s : d.sectors) {
    for (int k = 0; k < 50; ++k) {
      double b0 = u(rng), b1 = u(rng), b2 = u(rng);
      const double sum = b0 + b1 + b2;
      b0 /= sum;
      b1 /= sum;
      b2 /= sum;
      const Vec3 x = b0 * s.face[0] + b1 * s.face[1] + b2 * s.face[2];
      CHECK(polygonal_radius(d, x) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(rel_diff(inversion(d, x), x) < 1e-12);
      // h . (x - 0) = |h|^2 on the face plane.
      CHECK(dot(s.altitude, x) == doctest::Approx(norm2(s.altitude)).epsilon(1e-12));
    }
  }
}

TEST_CASE("radius is continuous across sector boundaries") {
  const auto d = build_big_tetra_decomposition(4.0);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      // The cone over edge (a_i, a_j) is shared by the two sectors whose
      // faces contain both vertices, i.e. all sectors except i and j.
      for (int k = 0; k < 20; ++k) {
        const Vec3 x = u(rng) * d.outer_vertex[i] + u(rng) * d.outer_vertex[j];
        double r_owner[2];
        int found = 0;
        for (int sct = 0; sct < 4 && found < 2; ++sct)
          if (sct != i && sct != j) r_owner[found++] = d.sectors[sct].radius(x);
        CHECK(r_owner[0] == doctest::Approx(r_owner[1]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("jacobian matches finite differences and has determinant r^-6") {
  const auto d = build_big_tetra_decomposition(4.0);
  int tested = 0;
  while (tested < 100) {
    const Vec3 x = random_point();
    // Keep a safe distance from sector boundaries so the finite difference
    // stencil stays inside one sector.
    const Sector& s = d.sectors[d.sector_lookup(x)];
    const Vec3 c = s.cone_coords(x);
    if (std::min({c.x, c.y, c.z}) * d.R0 / norm(x) < 1e-2) continue;
    ++tested;

    const double r = polygonal_radius(d, x);
    const Mat3 J = inversion_jacobian(d, x);
    CHECK(std::abs(J.det()) == doctest::Approx(std::pow(r, -6.0)).epsilon(1e-10));

    const double step = 1e-6 * norm(x);
    for (int c3 = 0; c3 < 3; ++c3) {
      Vec3 dx{};
      dx[c3] = step;
      const Vec3 fd = (inversion(d, x + dx) - inversion(d, x - dx)) / (2.0 * step);
      const Vec3 column{J.m[0][c3], J.m[1][c3], J.m[2][c3]};
      CHECK(norm(fd - column) <= 1e-6 * std::max(norm(column), norm(J.apply({1, 1, 1}))));
    }
  }
}

TEST_CASE("zone classification and tie-breaking") {
  const auto d = build_big_tetra_decomposition(4.0);
  for (int k = 0; k < 200; ++k) {
    const Vec3 dir = random_direction();
    const double r_unit = polygonal_radius(d, dir);  // radius scales linearly on rays
    CHECK(locate(d, (0.5 / r_unit) * dir).zone == Zone::Central);
    CHECK(locate(d, (2.0 / r_unit) * dir).zone == Zone::Infinite);
  }
  // Points on a shared sector face resolve to the lowest admissible index:
  // the cone over edge (a_2, a_3) belongs to sectors 0 and 1.
  const Vec3 shared = d.outer_vertex[2] + d.outer_vertex[3];
  CHECK(d.sector_lookup(shared) == 0);
  // The origin itself is central.
  CHECK(locate(d, Vec3{}).zone == Zone::Central);
}

}  // TEST_SUITE

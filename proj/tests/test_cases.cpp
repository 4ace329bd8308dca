#include <doctest.h>

#include <strayfem/cases.hpp>
#include <strayfem/errors.hpp>
#include <strayfem/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace strayfem;

namespace {

Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{n(rng), n(rng), n(rng)};
  while (norm(v) < 1e-6) v = {n(rng), n(rng), n(rng)};
  return v / norm(v);
}

// Six-point finite-difference Laplacian.
double fd_laplacian(const BenchmarkCase& c, const Vec3& x, double h) {
  double acc = -6.0 * c.exact_potential(x);
  for (int i = 0; i < 3; ++i) {
    Vec3 e{0, 0, 0};
    (i == 0 ? e.x : i == 1 ? e.y : e.z) = h;
    acc += c.exact_potential(x + e) + c.exact_potential(x - e);
  }
  return acc / (h * h);
}

// Central-difference divergence of the magnetization.
double fd_divergence(const BenchmarkCase& c, const Vec3& x, double h) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    Vec3 e{0, 0, 0};
    (i == 0 ? e.x : i == 1 ? e.y : e.z) = h;
    const Vec3 p = c.magnetization(x + e), m = c.magnetization(x - e);
    acc += ((i == 0 ? p.x - m.x : i == 1 ? p.y - m.y : p.z - m.z)) / (2.0 * h);
  }
  return acc;
}

// int_{r0}^inf of the squared dipole gradient |grad(z/r^3)|^2 over shells:
// the shell average is 8 pi / r^4, so the tail integral is 8 pi / (3 r0^3).
double dipole_tail(double coeff, double r0) {
  return coeff * coeff * 8.0 * M_PI / (3.0 * r0 * r0 * r0);
}

}  // namespace

TEST_SUITE("cases") {

TEST_CASE("the registry exposes the three benchmark configurations") {
  const auto names = case_names();
  REQUIRE(names.size() == 3);
  CHECK(names[0] == "sphere-uniform");
  CHECK(names[1] == "sphere-vortex");
  CHECK(names[2] == "cube-uniform");
  for (const auto& n : names) CHECK(make_case(n).name == n);
  CHECK_THROWS_AS(make_case("doughnut"), ConfigError);

  BenchmarkCase b = make_case("sphere-uniform");
  CHECK(b.uniform_m);
  CHECK(b.m_uniform.x == 0.0);
  CHECK(b.m_uniform.y == 0.0);
  CHECK(b.m_uniform.z == 1.0);
  CHECK(b.domain.kind == DomainKind::Ball);
  CHECK(b.domain.size == 0.5);
  CHECK(b.has_exact_potential);

  BenchmarkCase v = make_case("sphere-vortex");
  CHECK(!v.uniform_m);
  CHECK(v.domain.size == 0.5);
  CHECK(v.has_exact_potential);

  BenchmarkCase q = make_case("cube-uniform");
  CHECK(q.domain.kind == DomainKind::Cube);
  CHECK(q.domain.volume() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(!q.has_exact_potential);
  CHECK_THROWS_AS(q.exact_potential({2, 0, 0}), ConfigError);
  // uniformly magnetized cube: averaged axis demagnetizing factor is exactly
  // 1/3, so the energy is volume / 6
  CHECK(q.exact_energy == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("closed-form energies match first-principles radial integrals") {
  // uniform ball: grad u is constant 1/3 e_z inside and a dipole outside
  {
    BenchmarkCase c = make_case("sphere-uniform");
    const double r0 = c.domain.size;
    const double inside = (4.0 / 3.0) * M_PI * r0 * r0 * r0 / 9.0;
    const double outside = dipole_tail(r0 * r0 * r0 / 3.0, r0);
    const double energy = 0.5 * (inside + outside);
    CHECK(c.exact_energy == doctest::Approx(energy).epsilon(1e-14));
    CHECK(c.exact_energy == doctest::Approx(0.087266462599716479).epsilon(1e-14));
  }

  // vortex ball: u = z f(r) inside with f = -2/9 + (2/3) log(r/r0); shell
  // averaging in the polar angle reduces the interior Dirichlet integral to
  // one radial quadrature
  {
    BenchmarkCase c = make_case("sphere-vortex");
    const double r0 = c.domain.size;
    const double a = -2.0 / 9.0, b = 2.0 / 3.0;
    const auto radial = [&](double r) {
      const double f = a + b * std::log(r / r0);
      return 4.0 * M_PI * r * r * (f * f + (2.0 / 3.0) * b * f + b * b / 3.0);
    };
    const double inside = integrate_adaptive_1d(radial, 0.0, r0, 1e-13);
    const double outside = dipole_tail(-2.0 * r0 * r0 * r0 / 9.0, r0);
    const double energy = 0.5 * (inside + outside);
    CHECK(c.exact_energy == doctest::Approx(energy).epsilon(1e-11));
    CHECK(c.exact_energy == doctest::Approx(16.0 * M_PI * 0.125 / 81.0).epsilon(1e-15));
    CHECK(c.exact_energy == doctest::Approx(0.077570188977525759).epsilon(1e-14));
  }
}

TEST_CASE("the vortex field is a unit field tangential to every sphere") {
  BenchmarkCase c = make_case("sphere-vortex");
  const double r0 = c.domain.size;
  std::mt19937 rng(515);
  std::uniform_real_distribution<double> rad(0.05, r0 * 0.999);

  int checked = 0;
  while (checked < 200) {
    Vec3 x = rad(rng) * random_unit(rng);
    if (std::hypot(x.x, x.y) < 1e-3) continue;  // the axis carries no field
    Vec3 m = c.magnetization(x);
    CHECK(norm(m) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(dot(m, x)) <= 1e-13);
    ++checked;
  }

  CHECK(norm(c.magnetization({0.0, 0.0, 0.3})) == 0.0);   // polar axis
  CHECK(norm(c.magnetization({0.6, 0.0, 0.0})) == 0.0);   // outside the ball
  CHECK(norm(c.magnetization({0.3, 0.1, -0.2})) == doctest::Approx(1.0).epsilon(1e-12));

  // interior sources: div M = 2 z / r^2, which must also be the Laplacian
  // of the interior potential; the boundary is charge free (tangential M)
  for (const Vec3& x : {Vec3{0.15, 0.1, 0.2}, Vec3{-0.2, 0.05, -0.1}, Vec3{0.1, -0.25, 0.15}}) {
    const double want = 2.0 * x.z / norm2(x);
    CHECK(fd_divergence(c, x, 1e-5) == doctest::Approx(want).epsilon(1e-4));
    CHECK(fd_laplacian(c, x, 1e-4) == doctest::Approx(want).epsilon(1e-4));
  }
}

TEST_CASE("closed-form potentials are continuous and harmonic off the sources") {
  std::mt19937 rng(808);
  for (const char* name : {"sphere-uniform", "sphere-vortex"}) {
    BenchmarkCase c = make_case(name);
    const double r0 = c.domain.size;
    CAPTURE(name);
    for (int k = 0; k < 200; ++k) {
      Vec3 d = random_unit(rng);
      const double ui = c.exact_potential((r0 * (1.0 - 1e-9)) * d);
      const double uo = c.exact_potential((r0 * (1.0 + 1e-9)) * d);
      CHECK(std::abs(ui - uo) <= 1e-8 * std::max(1.0, std::abs(ui)));
    }
    // harmonic outside the magnet
    for (const Vec3& x : {Vec3{1.2, -0.3, 0.8}, Vec3{-0.7, 0.9, 1.1}})
      CHECK(std::abs(fd_laplacian(c, x, 1e-3)) <= 1e-6);
  }

  BenchmarkCase u1 = make_case("sphere-uniform");
  // linear inside, so the discrete Laplacian vanishes to rounding
  CHECK(std::abs(fd_laplacian(u1, {0.1, 0.05, -0.12}, 1e-3)) <= 1e-9);
  CHECK(u1.exact_potential({0, 0, 1}) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  CHECK(u1.exact_potential({0, 0, 0.1}) == doctest::Approx(0.1 / 3.0).epsilon(1e-15));

  BenchmarkCase u2 = make_case("sphere-vortex");
  CHECK(u2.exact_potential({0, 0, 0.25}) ==
        doctest::Approx(-0.17108008564887977).epsilon(1e-14));
  CHECK(u2.exact_potential({0, 0, 0}) == 0.0);
  // reflection antisymmetry in z
  CHECK(u2.exact_potential({0.2, 0.1, 0.15}) ==
        doctest::Approx(-u2.exact_potential({0.2, 0.1, -0.15})).epsilon(1e-13));
}

TEST_CASE("weighted norms of the closed forms match separable integrals") {
  // both potentials are z f(r), and int z^2 dS over a shell is 4 pi r^4 / 3,
  // so the weighted norm splits into radial integrals with closed-form or
  // one-dimensional adaptive pieces
  const double r0 = 0.5;
  const double tail = 1.0 / r0 + std::atan(r0) - M_PI / 2.0;  // int_{r0}^inf dr / (r^2 (1+r^2))

  {
    BenchmarkCase c = make_case("sphere-uniform");
    const double inner =
        (std::pow(r0, 3) / 3.0 - r0 + std::atan(r0));  // int_0^{r0} r^4/(1+r^2)
    const double norm2_exact =
        (4.0 * M_PI / 3.0) * (inner / 9.0 + std::pow(r0, 6) / 9.0 * tail);
    const double closed = std::sqrt(norm2_exact);
    CHECK(closed == doctest::Approx(0.094690939159834219).epsilon(1e-10));
    CHECK(exact_weighted_norm(c) == doctest::Approx(closed).epsilon(1e-9));
  }

  {
    BenchmarkCase c = make_case("sphere-vortex");
    const double a = -2.0 / 9.0, b = 2.0 / 3.0;
    const auto radial = [&](double r) {
      const double f = a + b * std::log(r / r0);
      return r * r * r * r * f * f / (1.0 + r * r);
    };
    const double inner = integrate_adaptive_1d(radial, 0.0, r0, 1e-14);
    const double c2 = -2.0 * std::pow(r0, 3) / 9.0;
    const double norm2_exact = (4.0 * M_PI / 3.0) * (inner + c2 * c2 * tail);
    const double closed = std::sqrt(norm2_exact);
    CHECK(closed == doctest::Approx(0.078861096538659431).epsilon(1e-9));
    CHECK(exact_weighted_norm(c) == doctest::Approx(closed).epsilon(1e-9));
  }

  CHECK_THROWS_AS(exact_weighted_norm(make_case("cube-uniform")), ConfigError);
}

TEST_CASE("the dipole-kernel integration reproduces the closed forms") {
  BenchmarkCase u1 = make_case("sphere-uniform");
  BenchmarkCase u2 = make_case("sphere-vortex");

  for (const Vec3& x : {Vec3{1.2, -0.3, 0.8}, Vec3{0.0, 0.0, -0.9}}) {
    const double want = u1.exact_potential(x);
    CHECK(green_potential(u1, x) == doctest::Approx(want).epsilon(3e-3));
  }
  for (const Vec3& x : {Vec3{0.9, 0.4, -1.1}, Vec3{0.0, 0.4, 0.45}}) {
    const double want = u2.exact_potential(x);
    CHECK(green_potential(u2, x) == doctest::Approx(want).epsilon(3e-3));
  }
  // interior point: the excluded kernel ball biases at O(eps^2)
  {
    const Vec3 x{0.1, 0.05, 0.2};
    const double want = u2.exact_potential(x);
    CHECK(std::abs(green_potential(u2, x) - want) <= 1e-3);
  }

  CHECK_THROWS_AS(green_potential(u1, {2, 0, 0}, -1.0), ConfigError);
}

}  // TEST_SUITE

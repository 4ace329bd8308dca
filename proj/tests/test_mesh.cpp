#include <doctest.h>

#include <strayfem/domain.hpp>
#include <strayfem/errors.hpp>
#include <strayfem/geometry.hpp>
#include <strayfem/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace strayfem;

namespace {

double max_edge(const TetMesh& m) {
  double best = 0;
  for (const auto& t : m.tet)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        best = std::max(best, norm(m.vertex[t[a]] - m.vertex[t[b]]));
  return best;
}

std::size_t count_boundary_faces(const TetMesh& m) {
  std::multiset<std::array<std::int32_t, 3>> faces;
  for (const auto& t : m.tet)
    for (int f = 0; f < 4; ++f) {
      std::array<std::int32_t, 3> key{};
      int k = 0;
      for (int v = 0; v < 4; ++v)
        if (v != f) key[k++] = t[v];
      std::sort(key.begin(), key.end());
      faces.insert(key);
    }
  std::size_t n = 0;
  for (auto it = faces.begin(); it != faces.end();) {
    auto cnt = faces.count(*it);
    if (cnt == 1) ++n;
    std::advance(it, (long)cnt);
  }
  return n;
}

}  // namespace

TEST_SUITE("meshing") {

TEST_CASE("base mesh is the four sector elements") {
  auto d = build_big_tetra_decomposition(4.0);
  TetMesh base = build_base_mesh(d);
  CHECK(base.n_tets() == 4);
  CHECK(base.n_vertices() == 5);
  CHECK(base.origin_vertex == 0);
  for (int t = 0; t < 4; ++t) {
    CHECK(base.tet_sector[t] == t);
    CHECK(base.tet_volume(t) > 0.0);
  }
  int n_iface = 0;
  for (std::size_t v = 0; v < base.n_vertices(); ++v)
    if (base.on_interface[v]) ++n_iface;
  CHECK(n_iface == 4);
  CHECK_FALSE(base.on_interface[base.origin_vertex]);
  // the four sector elements tile the core exactly
  double vol = 0;
  for (int t = 0; t < 4; ++t) vol += base.tet_volume(t);
  double vol_core = std::abs(signed_volume(d.outer_vertex[0], d.outer_vertex[1],
                                           d.outer_vertex[2], d.outer_vertex[3]));
  CHECK(vol == doctest::Approx(vol_core).epsilon(1e-13));
}

TEST_CASE("refinement produces 4*8^L positive elements and conforms") {
  auto d = build_big_tetra_decomposition(4.0);
  std::size_t expect = 4;
  for (int L = 0; L <= 3; ++L) {
    TetMesh m = refine_uniform(d, L);
    CHECK(m.n_tets() == expect);
    expect *= 8;
    for (std::size_t t = 0; t < m.n_tets(); ++t) CHECK(m.tet_volume((std::int32_t)t) > 0.0);
    auto rep = check_conformity(m, d);
    CHECK(rep.conforming);
    // the core boundary splits into 4 * 4^L triangles
    std::size_t nb = count_boundary_faces(m);
    CHECK(nb == rep.n_boundary_faces);
    std::size_t expect_b = 4;
    for (int k = 0; k < L; ++k) expect_b *= 4;
    CHECK(nb == expect_b);
    // volume is conserved under refinement
    double vol = 0;
    for (std::size_t t = 0; t < m.n_tets(); ++t) vol += m.tet_volume((std::int32_t)t);
    double vol_core = std::abs(signed_volume(d.outer_vertex[0], d.outer_vertex[1],
                                             d.outer_vertex[2], d.outer_vertex[3]));
    CHECK(vol == doctest::Approx(vol_core).epsilon(1e-12));
  }
}

TEST_CASE("mesh size follows the split-diagonal law") {
  // Level 0 has edges |a_i - a_j| = R0 sqrt(8/3).  The first refinement
  // introduces octahedron diagonals |a_i + 2 a_j|/2 = R0 sqrt(11/3)/2 which
  // dominate every later level, so h(L) = R0 sqrt(11/3) / 2^L for L >= 1.
  const double R0 = 4.0;
  auto d = build_big_tetra_decomposition(R0);
  CHECK(max_edge(refine_uniform(d, 0)) == doctest::Approx(R0 * std::sqrt(8.0 / 3.0)).epsilon(1e-13));
  for (int L = 1; L <= 3; ++L) {
    double expect = R0 * std::sqrt(11.0 / 3.0) / std::pow(2.0, L);
    CHECK(max_edge(refine_uniform(d, L)) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("grading moves star vertices radially and pins the interface") {
  auto d = build_big_tetra_decomposition(4.0);
  const int L = 3;
  const double mu = 0.5;
  TetMesh central = refine_uniform(d, L);
  TetMesh star = grade_vertices(central, d, mu);
  REQUIRE(star.n_vertices() == central.n_vertices());
  for (std::size_t v = 0; v < central.n_vertices(); ++v) {
    if ((std::int32_t)v == central.origin_vertex) {
      CHECK(norm(star.vertex[v]) == 0.0);
      continue;
    }
    double r = polygonal_radius(d, central.vertex[v]);
    if (central.on_interface[v]) {
      // pinned exactly, bit for bit
      CHECK(star.vertex[v].x == central.vertex[v].x);
      CHECK(star.vertex[v].y == central.vertex[v].y);
      CHECK(star.vertex[v].z == central.vertex[v].z);
    } else {
      // radial map r -> r^(1/mu); with mu = 1/2 the polygonal radius squares
      double rs = polygonal_radius(d, star.vertex[v]);
      CHECK(rs == doctest::Approx(r * r).epsilon(1e-12));
      // direction preserved
      Vec3 dir_c = central.vertex[v] / norm(central.vertex[v]);
      Vec3 dir_s = star.vertex[v] / norm(star.vertex[v]);
      CHECK(norm(dir_c - dir_s) < 1e-12);
    }
  }
  // mu = 1 is the identity
  TetMesh same = grade_vertices(central, d, 1.0);
  for (std::size_t v = 0; v < central.n_vertices(); ++v)
    CHECK(norm(same.vertex[v] - central.vertex[v]) == 0.0);
}

TEST_CASE("grading audit constants are stable across levels") {
  auto d = build_big_tetra_decomposition(4.0);
  for (double mu : {1.0, 0.7, 0.5}) {
    double c1_min = 1e300, c1_max = 0, c2_min = 1e300, c2_max = 0, c3_min = 1e300, c3_max = 0;
    for (int L = 2; L <= 4; ++L) {
      MeshPair pair = build_mesh_pair(d, L, mu);
      GradingAudit a = audit_grading(pair, d);
      CHECK(a.all_positive);
      CHECK(a.conforming);
      CHECK(a.n_origin_elements == 4);
      CHECK(a.c0 < 12.0);
      c1_min = std::min(c1_min, a.c1_star); c1_max = std::max(c1_max, a.c1_star);
      c2_min = std::min(c2_min, a.c2_star); c2_max = std::max(c2_max, a.c2_star);
      c3_min = std::min(c3_min, a.c3_star); c3_max = std::max(c3_max, a.c3_star);
      // the deepest non-origin star vertex sits at radius 2^(-L/mu)
      double expect_min_r = std::pow(std::pow(0.5, L), 1.0 / mu);
      CHECK(a.min_vertex_radius == doctest::Approx(expect_min_r).epsilon(1e-10));
    }
    CHECK(c1_max / c1_min < 3.0);
    CHECK(c2_max / c2_min < 3.0);
    CHECK(c3_min / c3_max > 1.0 / 3.0);
  }
}

TEST_CASE("refinement and grading guard rails") {
  auto d = build_big_tetra_decomposition(4.0);
  CHECK_THROWS_AS(refine_uniform(d, -1), ConfigError);
  CHECK_THROWS_AS(refine_uniform(d, 8), ConfigError);
  RefineOptions tiny;
  tiny.vertex_budget = 10;
  CHECK_THROWS_AS(refine_uniform(d, 3, tiny), ResourceError);
  TetMesh central = refine_uniform(d, 1);
  CHECK_THROWS_AS(grade_vertices(central, d, 0.0), ConfigError);
  CHECK_THROWS_AS(grade_vertices(central, d, 1.5), ConfigError);
}

TEST_CASE("conformity check flags a hanging vertex") {
  auto d = build_big_tetra_decomposition(4.0);
  // two elements that meet along a face with mismatched subdivision
  TetMesh bad;
  const Vec3 off{0.5, 0.3, 0.2};  // keep the polygonal radius defined everywhere
  bad.vertex = {off + Vec3{0, 0, 0}, off + Vec3{1, 0, 0}, off + Vec3{0, 1, 0},
                off + Vec3{0, 0, 1}, off + Vec3{0.5, 0.5, -0.2}, off + Vec3{0.5, 0, 0}};
  // face {0,1,2} of the first element is split in the second pair
  bad.tet = {{0, 1, 2, 3}, {0, 5, 2, 4}, {5, 1, 2, 4}};
  bad.tet_sector = {0, 0, 0};
  bad.on_interface.assign(6, 0);
  bad.origin_vertex = -1;
  auto rep = check_conformity(bad, d);
  CHECK_FALSE(rep.conforming);
}

TEST_CASE("point location walks to the containing element") {
  auto d = build_big_tetra_decomposition(4.0);
  TetMesh m = refine_uniform(d, 3);
  std::mt19937_64 rng(20240812);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  int found = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Vec3 x{uni(rng), uni(rng), uni(rng)};
    if (polygonal_radius(d, x) > 0.95) continue;  // stay safely inside the core
    auto loc = locate_point(m, x);
    REQUIRE(loc.has_value());
    ++found;
    const auto& t = m.tet[loc->tet];
    // barycentric coords are admissible and reproduce the query point
    Vec3 rec{0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      CHECK(loc->bary[i] >= -1e-9);
      rec += loc->bary[i] * m.vertex[t[i]];
    }
    CHECK(norm(rec - x) < 1e-10);
  }
  CHECK(found > 100);
  // points beyond the interface are rejected
  CHECK_FALSE(locate_point(m, Vec3{4.1, 0, 0}).has_value());
  CHECK_FALSE(locate_point(m, Vec3{0, 0, 4.05}).has_value());
}

TEST_CASE("element classification against an embedded ball") {
  auto d = build_big_tetra_decomposition(4.0);
  TetMesh m = refine_uniform(d, 3);
  DomainShape ball = DomainShape::ball(0.5);
  auto cls = restrict_to_domain(m, ball, d);
  REQUIRE(cls.size() == m.n_tets());
  double vol_in = 0, vol_cut = 0;
  for (std::size_t t = 0; t < m.n_tets(); ++t) {
    double v = m.tet_volume((std::int32_t)t);
    if (cls[t] == ElementClass::Inside) {
      vol_in += v;
      const auto& k = m.tet[t];
      for (int i = 0; i < 4; ++i) CHECK(ball.contains(m.vertex[k[i]]));
    } else if (cls[t] == ElementClass::Cut) {
      vol_cut += v;
    }
  }
  // the inside elements underestimate the ball, inside+cut overestimate it
  double vol_ball = ball.volume();
  CHECK(vol_in < vol_ball);
  CHECK(vol_in + vol_cut > vol_ball);
  CHECK(vol_in + vol_cut < 3.0 * vol_ball);  // the cut layer is thin at L=3

  // a domain whose bounding sphere pokes out of the core is rejected
  DomainShape big = DomainShape::ball(1.5);
  CHECK_THROWS_AS(restrict_to_domain(m, big, d), ConfigError);
}

}  // TEST_SUITE

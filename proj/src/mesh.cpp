#include "strayfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "strayfem/errors.hpp"

namespace strayfem {

namespace {

// Face opposite local vertex f.
constexpr int kFaceVerts[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};

struct FaceRec {
  std::array<std::int32_t, 3> key;  // sorted vertex ids
  std::int32_t tet;
  std::int8_t face;
};

std::vector<FaceRec> collect_faces(const TetMesh& mesh) {
  std::vector<FaceRec> faces;
  faces.reserve(mesh.n_tets() * 4);
  for (std::int32_t t = 0; t < std::int32_t(mesh.n_tets()); ++t) {
    for (int f = 0; f < 4; ++f) {
      FaceRec rec;
      rec.key = {mesh.tet[t][kFaceVerts[f][0]], mesh.tet[t][kFaceVerts[f][1]],
                 mesh.tet[t][kFaceVerts[f][2]]};
      std::sort(rec.key.begin(), rec.key.end());
      rec.tet = t;
      rec.face = std::int8_t(f);
      faces.push_back(rec);
    }
  }
  std::sort(faces.begin(), faces.end(),
            [](const FaceRec& a, const FaceRec& b) { return a.key < b.key; });
  return faces;
}

/// Fills neighbor links and interface flags from the sorted face list.
void build_adjacency(TetMesh& mesh) {
  mesh.neighbor.assign(mesh.n_tets(), {-1, -1, -1, -1});
  mesh.on_interface.assign(mesh.n_vertices(), 0);

  const auto faces = collect_faces(mesh);
  std::size_t i = 0;
  while (i < faces.size()) {
    std::size_t j = i + 1;
    while (j < faces.size() && faces[j].key == faces[i].key) ++j;
    const std::size_t count = j - i;
    if (count == 2) {
      mesh.neighbor[faces[i].tet][faces[i].face] = faces[i + 1].tet;
      mesh.neighbor[faces[i + 1].tet][faces[i + 1].face] = faces[i].tet;
    } else if (count == 1) {
      for (std::int32_t v : faces[i].key) mesh.on_interface[v] = 1;
    } else {
      throw MeshError("face shared by " + std::to_string(count) + " elements");
    }
    i = j;
  }
}

void orient_positively(TetMesh& mesh, std::int32_t t) {
  if (mesh.tet_volume(t) < 0.0) std::swap(mesh.tet[t][2], mesh.tet[t][3]);
}

/// One global red refinement sweep.
void refine_once(TetMesh& mesh, const RefineOptions& opts) {
  std::unordered_map<std::uint64_t, std::int32_t> midpoint;
  midpoint.reserve(mesh.n_vertices() * 7);

  auto edge_midpoint = [&](std::int32_t a, std::int32_t b) -> std::int32_t {
    const std::uint64_t key =
        (std::uint64_t(std::min(a, b)) << 32) | std::uint64_t(std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    if (mesh.vertex.size() >= opts.vertex_budget)
      throw ResourceError("refinement exceeds the vertex budget of " +
                          std::to_string(opts.vertex_budget));
    const std::int32_t id = std::int32_t(mesh.vertex.size());
    mesh.vertex.push_back(0.5 * (mesh.vertex[a] + mesh.vertex[b]));
    midpoint.emplace(key, id);
    return id;
  };

  std::vector<std::array<std::int32_t, 4>> old_tets;
  std::vector<std::int32_t> old_sector;
  old_tets.swap(mesh.tet);
  old_sector.swap(mesh.tet_sector);
  mesh.tet.reserve(old_tets.size() * 8);
  mesh.tet_sector.reserve(old_tets.size() * 8);

  for (std::size_t t = 0; t < old_tets.size(); ++t) {
    const auto& v = old_tets[t];
    const std::int32_t sec = old_sector[t];
    // Midpoints m[a][b] of the six edges.
    std::int32_t m[4][4];
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) m[a][b] = m[b][a] = edge_midpoint(v[a], v[b]);

    auto emit = [&](std::int32_t p, std::int32_t q, std::int32_t r, std::int32_t s) {
      mesh.tet.push_back({p, q, r, s});
      mesh.tet_sector.push_back(sec);
      orient_positively(mesh, std::int32_t(mesh.tet.size()) - 1);
    };

    // Four corner children.
    emit(v[0], m[0][1], m[0][2], m[0][3]);
    emit(m[0][1], v[1], m[1][2], m[1][3]);
    emit(m[0][2], m[1][2], v[2], m[2][3]);
    emit(m[0][3], m[1][3], m[2][3], v[3]);

    // Interior octahedron: cut along the shortest of the three diagonals,
    // ties broken by the lexicographically smallest sorted global index
    // pair so the choice never depends on traversal order.
    struct Diag {
      double len2;
      std::int32_t lo, hi;
      int a, b, c, d;  // diagonal m[a][b] -- m[c][d]
    };
    Diag cand[3] = {{0, 0, 0, 0, 1, 2, 3}, {0, 0, 0, 0, 2, 1, 3}, {0, 0, 0, 0, 3, 1, 2}};
    for (Diag& dg : cand) {
      const std::int32_t p = m[dg.a][dg.b];
      const std::int32_t q = m[dg.c][dg.d];
      dg.len2 = norm2(mesh.vertex[p] - mesh.vertex[q]);
      dg.lo = std::min(p, q);
      dg.hi = std::max(p, q);
    }
    const Diag* best = &cand[0];
    for (int i = 1; i < 3; ++i) {
      const Diag& dg = cand[i];
      if (dg.len2 < best->len2 ||
          (dg.len2 == best->len2 &&
           (dg.lo < best->lo || (dg.lo == best->lo && dg.hi < best->hi))))
        best = &dg;
    }
    // With diagonal m[A][B]--m[C][D], the equator cycle is
    // m[A][C], m[A][D], m[B][D], m[B][C] (consecutive midpoints share a
    // parent vertex), giving four tetrahedra around the diagonal.
    const int A = best->a, B = best->b, C = best->c, D = best->d;
    const std::int32_t p = m[A][B], q = m[C][D];
    const std::int32_t e0 = m[A][C], e1 = m[A][D], e2 = m[B][D], e3 = m[B][C];
    emit(p, q, e0, e1);
    emit(p, q, e1, e2);
    emit(p, q, e2, e3);
    emit(p, q, e3, e0);
  }
}

double point_segment_dist2(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double t = std::clamp(dot(p - a, ab) / norm2(ab), 0.0, 1.0);
  return norm2(p - (a + t * ab));
}

double point_triangle_dist2(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Project p onto the triangle plane; if the projection lands inside, the
  // plane distance is the answer, otherwise it is attained on an edge.
  const Vec3 n = cross(b - a, c - a);
  const double nn = norm2(n);
  const double dist_plane = dot(p - a, n);
  const Vec3 proj = p - (dist_plane / nn) * n;
  // Barycentric test via signed sub-areas against the face normal.
  const double w0 = dot(cross(b - proj, c - proj), n);
  const double w1 = dot(cross(c - proj, a - proj), n);
  const double w2 = dot(cross(a - proj, b - proj), n);
  if (w0 >= 0.0 && w1 >= 0.0 && w2 >= 0.0) return dist_plane * dist_plane / nn;
  return std::min({point_segment_dist2(p, a, b), point_segment_dist2(p, b, c),
                   point_segment_dist2(p, c, a)});
}

double point_tet_distance(const Vec3& p, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                          const Vec3& v3) {
  // Inside test via signed volumes (positively oriented element).
  const bool inside = signed_volume(p, v1, v2, v3) >= 0.0 && signed_volume(v0, p, v2, v3) >= 0.0 &&
                      signed_volume(v0, v1, p, v3) >= 0.0 && signed_volume(v0, v1, v2, p) >= 0.0;
  if (inside) return 0.0;
  const double d2 = std::min({point_triangle_dist2(p, v1, v2, v3), point_triangle_dist2(p, v0, v2, v3),
                              point_triangle_dist2(p, v0, v1, v3), point_triangle_dist2(p, v0, v1, v2)});
  return std::sqrt(d2);
}

double max_edge_length(const TetMesh& mesh, std::int32_t t) {
  const auto& k = mesh.tet[t];
  double m2 = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      m2 = std::max(m2, norm2(mesh.vertex[k[a]] - mesh.vertex[k[b]]));
  return std::sqrt(m2);
}

double inradius(const TetMesh& mesh, std::int32_t t) {
  const auto& k = mesh.tet[t];
  const Vec3& a = mesh.vertex[k[0]];
  const Vec3& b = mesh.vertex[k[1]];
  const Vec3& c = mesh.vertex[k[2]];
  const Vec3& d = mesh.vertex[k[3]];
  const double v = std::abs(signed_volume(a, b, c, d));
  const double area = 0.5 * (norm(cross(c - b, d - b)) + norm(cross(c - a, d - a)) +
                             norm(cross(b - a, d - a)) + norm(cross(b - a, c - a)));
  return 3.0 * v / area;
}

}  // namespace

TetMesh build_base_mesh(const SpaceDecomposition& d) {
  TetMesh mesh;
  mesh.vertex.reserve(5);
  mesh.vertex.push_back({0.0, 0.0, 0.0});
  for (const Vec3& a : d.outer_vertex) mesh.vertex.push_back(a);
  mesh.origin_vertex = 0;

  for (const Sector& s : d.sectors) {
    // conv(0, face of sector s); vertex ids follow outer_vertex order.
    std::array<std::int32_t, 4> t = {0, 0, 0, 0};
    int k = 1;
    for (std::int32_t j = 0; j < 4; ++j)
      if (j != s.index) t[k++] = j + 1;
    mesh.tet.push_back(t);
    mesh.tet_sector.push_back(s.index);
    orient_positively(mesh, std::int32_t(mesh.tet.size()) - 1);
  }
  build_adjacency(mesh);
  return mesh;
}

TetMesh refine_uniform(const SpaceDecomposition& d, int level, const RefineOptions& opts) {
  if (level < 0 || level > opts.max_level)
    throw ConfigError("refinement level " + std::to_string(level) + " outside [0, " +
                      std::to_string(opts.max_level) + "]");
  TetMesh mesh = build_base_mesh(d);
  for (int l = 0; l < level; ++l) refine_once(mesh, opts);
  build_adjacency(mesh);
  return mesh;
}

TetMesh grade_vertices(const TetMesh& central, const SpaceDecomposition& d, double mu) {
  if (!(mu > 0.0) || mu > 1.0) throw ConfigError("grading exponent must lie in (0, 1]");
  TetMesh star = central;
  const double expo = 1.0 / mu - 1.0;
  for (std::size_t v = 0; v < star.n_vertices(); ++v) {
    if (std::int32_t(v) == star.origin_vertex || star.on_interface[v]) continue;
    const double r = polygonal_radius(d, star.vertex[v]);
    star.vertex[v] = std::pow(r, expo) * star.vertex[v];
  }
  for (std::int32_t t = 0; t < std::int32_t(star.n_tets()); ++t) {
    if (!(star.tet_volume(t) > 0.0))
      throw MeshError("grading inverted element " + std::to_string(t));
  }
  return star;
}

MeshPair build_mesh_pair(const SpaceDecomposition& d, int level, double mu,
                         const RefineOptions& opts) {
  MeshPair pair;
  pair.level = level;
  pair.mu = mu;
  pair.central = refine_uniform(d, level, opts);
  pair.star = grade_vertices(pair.central, d, mu);
  for (std::int32_t t = 0; t < std::int32_t(pair.central.n_tets()); ++t)
    pair.h = std::max(pair.h, max_edge_length(pair.central, t));
  return pair;
}

ConformityReport check_conformity(const TetMesh& mesh, const SpaceDecomposition& d) {
  ConformityReport report;
  report.conforming = true;
  const auto faces = collect_faces(mesh);
  std::size_t i = 0;
  while (i < faces.size()) {
    std::size_t j = i + 1;
    while (j < faces.size() && faces[j].key == faces[i].key) ++j;
    const std::size_t count = j - i;
    ++report.n_faces;
    if (count == 1) {
      ++report.n_boundary_faces;
      // A single-sided face must be an interface face, otherwise a hanging
      // node or a hole snuck in.
      for (std::int32_t v : faces[i].key) {
        const double r = polygonal_radius(d, mesh.vertex[v]);
        if (std::abs(r - 1.0) > 1e-9) report.conforming = false;
      }
    } else if (count != 2) {
      report.conforming = false;
    }
    i = j;
  }
  return report;
}

GradingAudit audit_grading(const MeshPair& pair, const SpaceDecomposition& d) {
  GradingAudit audit;
  audit.h = pair.h;
  audit.all_positive = true;
  audit.h_min_star = std::numeric_limits<double>::infinity();
  audit.c3_star = std::numeric_limits<double>::infinity();
  audit.min_vertex_radius = std::numeric_limits<double>::infinity();

  for (const TetMesh* mesh : {&pair.central, &pair.star}) {
    for (std::int32_t t = 0; t < std::int32_t(mesh->n_tets()); ++t) {
      if (!(mesh->tet_volume(t) > 0.0)) audit.all_positive = false;
      audit.c0 = std::max(audit.c0, max_edge_length(*mesh, t) / (2.0 * inradius(*mesh, t)));
    }
  }

  const double h = pair.h;
  const double h_pow = std::pow(h, 1.0 / pair.mu);
  const TetMesh& star = pair.star;
  for (std::int32_t t = 0; t < std::int32_t(star.n_tets()); ++t) {
    const auto& k = star.tet[t];
    const double hk = max_edge_length(star, t);
    audit.h_min_star = std::min(audit.h_min_star, hk);
    const bool touches_origin = k[0] == star.origin_vertex || k[1] == star.origin_vertex ||
                                k[2] == star.origin_vertex || k[3] == star.origin_vertex;
    if (touches_origin) {
      ++audit.n_origin_elements;
      audit.c2_star = std::max(audit.c2_star, hk / h_pow);
    } else {
      const double dk = point_tet_distance({0, 0, 0}, star.vertex[k[0]], star.vertex[k[1]],
                                           star.vertex[k[2]], star.vertex[k[3]]);
      audit.c1_star = std::max(audit.c1_star, hk / (std::pow(dk, 1.0 - pair.mu) * h));
      audit.c3_star = std::min(audit.c3_star, dk / h_pow);
    }
  }

  for (std::size_t v = 0; v < star.n_vertices(); ++v) {
    if (std::int32_t(v) == star.origin_vertex) continue;
    audit.min_vertex_radius =
        std::min(audit.min_vertex_radius, polygonal_radius(d, star.vertex[v]));
  }

  audit.conforming =
      check_conformity(pair.central, d).conforming && check_conformity(pair.star, d).conforming;
  return audit;
}

std::vector<ElementClass> restrict_to_domain(const TetMesh& mesh, const DomainShape& domain,
                                             const SpaceDecomposition& d) {
  if (domain.bounding_radius() > d.R0 / 3.0 + 1e-12)
    throw ConfigError("magnetized domain does not fit inside the core tetrahedron");

  std::vector<ElementClass> cls(mesh.n_tets());
  for (std::int32_t t = 0; t < std::int32_t(mesh.n_tets()); ++t) {
    const auto& k = mesh.tet[t];
    int inside = domain.contains(mesh.tet_centroid(t)) ? 1 : 0;
    for (int a = 0; a < 4; ++a) inside += domain.contains(mesh.vertex[k[a]]) ? 1 : 0;
    cls[t] = inside == 0 ? ElementClass::Outside
                         : (inside == 5 ? ElementClass::Inside : ElementClass::Cut);
  }
  return cls;
}

std::optional<PointLocation> locate_point(const TetMesh& mesh, const Vec3& x, std::int32_t seed) {
  auto barycentric = [&](std::int32_t t, std::array<double, 4>& bary) {
    const auto& k = mesh.tet[t];
    const Vec3& v0 = mesh.vertex[k[0]];
    const Mat3 e = Mat3::from_columns(mesh.vertex[k[1]] - v0, mesh.vertex[k[2]] - v0,
                                      mesh.vertex[k[3]] - v0);
    const Vec3 c = e.inverse().apply(x - v0);
    bary = {1.0 - c.x - c.y - c.z, c.x, c.y, c.z};
  };

  constexpr double kTol = 1e-11;
  std::array<double, 4> bary;
  std::int32_t t = std::clamp(seed, 0, std::int32_t(mesh.n_tets()) - 1);
  for (std::size_t step = 0; step < mesh.n_tets(); ++step) {
    barycentric(t, bary);
    int worst = 0;
    for (int a = 1; a < 4; ++a)
      if (bary[a] < bary[worst]) worst = a;
    if (bary[worst] >= -kTol) return PointLocation{t, bary};
    const std::int32_t next = mesh.neighbor[t][worst];
    if (next < 0) break;  // walked off the mesh; fall back to a full sweep
    t = next;
  }

  // Brute force: keep the element where x is least outside.
  double best = -std::numeric_limits<double>::infinity();
  PointLocation loc;
  for (std::int32_t s = 0; s < std::int32_t(mesh.n_tets()); ++s) {
    barycentric(s, bary);
    const double m = std::min(std::min(bary[0], bary[1]), std::min(bary[2], bary[3]));
    if (m > best) {
      best = m;
      loc = PointLocation{s, bary};
    }
  }
  if (best >= -1e-9) return loc;
  return std::nullopt;
}

}  // namespace strayfem

#pragma once

// Tetrahedral meshes of the bounded core Omega_0 and of its star-shaped
// mirror image used by the far-field expansion.
//
// The central mesh is produced by uniform red refinement of the four
// pyramids conv(0, face_i) of the core tetrahedron; refining each level
// splits every tetrahedron into eight children through its edge midpoints,
// with the interior octahedron cut along its shortest diagonal.  Midpoints
// are shared globally, so the result is conforming across sector boundaries
// by construction.
//
// The star mesh reuses the central connectivity and moves every vertex
// radially: a vertex at polygonal radius r goes to r^(1/mu - 1) x, which for
// mu < 1 concentrates vertices toward the origin.  Interface vertices
// (r = 1) and the origin stay fixed, so the two meshes share the interface
// triangulation vertex for vertex.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "strayfem/domain.hpp"
#include "strayfem/geometry.hpp"

namespace strayfem {

struct TetMesh {
  std::vector<Vec3> vertex;
  std::vector<std::array<std::int32_t, 4>> tet;
  /// Owning sector of each element (inherited through refinement).
  std::vector<std::int32_t> tet_sector;
  /// Neighbor across the face opposite local vertex f, or -1 on the
  /// boundary.  Filled by build_adjacency.
  std::vector<std::array<std::int32_t, 4>> neighbor;
  /// Per-vertex flag: lies on the interface r = 1.
  std::vector<char> on_interface;
  std::int32_t origin_vertex = -1;

  std::size_t n_vertices() const { return vertex.size(); }
  std::size_t n_tets() const { return tet.size(); }

  double tet_volume(std::int32_t t) const {
    const auto& k = tet[t];
    return signed_volume(vertex[k[0]], vertex[k[1]], vertex[k[2]], vertex[k[3]]);
  }
  Vec3 tet_centroid(std::int32_t t) const {
    const auto& k = tet[t];
    return 0.25 * (vertex[k[0]] + vertex[k[1]] + vertex[k[2]] + vertex[k[3]]);
  }
};

struct RefineOptions {
  int max_level = 7;
  std::size_t vertex_budget = 8'000'000;
};

/// The level-0 mesh: one tetrahedron conv(0, face_i) per sector.
TetMesh build_base_mesh(const SpaceDecomposition& d);

/// Central mesh at refinement level L (4 * 8^L elements).  Throws
/// ConfigError for L < 0 or L > max_level, ResourceError past the vertex
/// budget.
TetMesh refine_uniform(const SpaceDecomposition& d, int level, const RefineOptions& opts = {});

/// Star mesh: same connectivity, vertices moved by the radial grading map.
/// mu must lie in (0, 1].  Throws on a non-positively-oriented result.
TetMesh grade_vertices(const TetMesh& central, const SpaceDecomposition& d, double mu);

struct MeshPair {
  TetMesh central;
  TetMesh star;
  int level = 0;
  double mu = 1.0;
  /// Mesh size parameter: max element diameter of the central mesh.
  double h = 0.0;

  // The star mesh is a vertex-moved copy of the central mesh, so matching
  // interface vertices carry the same index in both meshes.
};

MeshPair build_mesh_pair(const SpaceDecomposition& d, int level, double mu,
                         const RefineOptions& opts = {});

struct ConformityReport {
  bool conforming = false;
  std::size_t n_faces = 0;
  std::size_t n_boundary_faces = 0;
};

/// Checks that every face is shared by at most two elements and that every
/// single-sided face lies on the interface r = 1.
ConformityReport check_conformity(const TetMesh& mesh, const SpaceDecomposition& d);

struct GradingAudit {
  double h = 0.0;        // max central element diameter
  double h_min_star = 0.0;
  double c0 = 0.0;       // max diameter/(2 inradius) over both meshes
  double c1_star = 0.0;  // max h_K / (d_K^(1-mu) h), star elements away from 0
  double c2_star = 0.0;  // max h_K / h^(1/mu), star elements touching 0
  double c3_star = 0.0;  // min d_K / h^(1/mu), star elements away from 0
  double min_vertex_radius = 0.0;  // min polygonal radius of non-origin star vertices
  std::size_t n_origin_elements = 0;
  bool all_positive = false;
  bool conforming = false;
};

GradingAudit audit_grading(const MeshPair& pair, const SpaceDecomposition& d);

enum class ElementClass : std::uint8_t { Outside = 0, Inside = 1, Cut = 2 };

/// Classifies each element against the magnetized domain by testing its four
/// vertices and centroid.  Requires the domain's bounding sphere to fit
/// inside the core (inradius R0/3); throws ConfigError otherwise.
std::vector<ElementClass> restrict_to_domain(const TetMesh& mesh, const DomainShape& domain,
                                             const SpaceDecomposition& d);

struct PointLocation {
  std::int32_t tet = -1;
  std::array<double, 4> bary{};
};

/// Finds the element containing x by walking across faces from a seed
/// element, with a brute-force sweep as fallback.  Returns nullopt for
/// points outside the mesh (beyond a small tolerance).
std::optional<PointLocation> locate_point(const TetMesh& mesh, const Vec3& x,
                                          std::int32_t seed = 0);

}  // namespace strayfem

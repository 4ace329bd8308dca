#include "strayfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "strayfem/errors.hpp"
#include "strayfem/quadrature.hpp"

namespace strayfem {

void CsrMatrix::add(std::int32_t i, std::int32_t j, double v) {
  const auto begin = col.begin() + row_ptr[i];
  const auto end = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) throw MeshError("matrix entry outside the assembled pattern");
  val[it - col.begin()] += v;
}

double CsrMatrix::get(std::int32_t i, std::int32_t j) const {
  const auto begin = col.begin() + row_ptr[i];
  const auto end = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  return (it == end || *it != j) ? 0.0 : val[it - col.begin()];
}

void CsrMatrix::matvec(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(n, 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
    y[i] = acc;
  }
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(n, 0.0);
  for (std::int32_t i = 0; i < n; ++i) d[i] = get(i, i);
  return d;
}

namespace {

/// Appends the canonical (lo, hi) dof pairs of one element.
void push_element_pairs(std::vector<std::uint64_t>& pairs, const std::int32_t dof[4]) {
  for (int a = 0; a < 4; ++a) {
    if (dof[a] < 0) continue;
    for (int b = a; b < 4; ++b) {
      if (dof[b] < 0) continue;
      const std::uint32_t lo = std::uint32_t(std::min(dof[a], dof[b]));
      const std::uint32_t hi = std::uint32_t(std::max(dof[a], dof[b]));
      pairs.push_back((std::uint64_t(lo) << 32) | hi);
    }
  }
}

}  // namespace

CsrMatrix build_pattern(const DofSpace& space) {
  const TetMesh& central = space.pair->central;
  const TetMesh& star = space.pair->star;

  std::vector<std::uint64_t> pairs;
  pairs.reserve((central.n_tets() + star.n_tets()) * 10);
  std::int32_t dof[4];
  for (std::size_t t = 0; t < central.n_tets(); ++t) {
    for (int a = 0; a < 4; ++a) dof[a] = space.central_dof[central.tet[t][a]];
    push_element_pairs(pairs, dof);
  }
  for (std::size_t t = 0; t < star.n_tets(); ++t) {
    for (int a = 0; a < 4; ++a) dof[a] = space.star_dof[star.tet[t][a]];
    push_element_pairs(pairs, dof);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  CsrMatrix A;
  A.n = space.n_dofs;
  A.row_ptr.assign(A.n + 1, 0);
  for (const std::uint64_t p : pairs) {
    const auto lo = std::int32_t(p >> 32);
    const auto hi = std::int32_t(p & 0xffffffffu);
    ++A.row_ptr[lo + 1];
    if (lo != hi) ++A.row_ptr[hi + 1];
  }
  for (std::int64_t i = 0; i < A.n; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
  A.col.resize(A.row_ptr[A.n]);
  A.val.assign(A.row_ptr[A.n], 0.0);

  // Scanning canonical pairs in sorted order fills every row with sorted
  // columns: a row first receives its sub-diagonal partners (while they are
  // the smaller index), then the diagonal, then the rest.
  std::vector<std::int64_t> cursor(A.row_ptr.begin(), A.row_ptr.end() - 1);
  for (const std::uint64_t p : pairs) {
    const auto lo = std::int32_t(p >> 32);
    const auto hi = std::int32_t(p & 0xffffffffu);
    A.col[cursor[lo]++] = hi;
    if (lo != hi) A.col[cursor[hi]++] = lo;
  }
  return A;
}

void assemble_central_stiffness(const DofSpace& space, CsrMatrix& A) {
  const TetMesh& mesh = space.pair->central;
  for (std::int32_t t = 0; t < std::int32_t(mesh.n_tets()); ++t) {
    const auto grad = p1_gradients(mesh, t);
    const double vol = mesh.tet_volume(t);
    const auto& k = mesh.tet[t];
    for (int a = 0; a < 4; ++a) {
      const std::int32_t i = space.central_dof[k[a]];
      for (int b = 0; b < 4; ++b) {
        const std::int32_t j = space.central_dof[k[b]];
        A.add(i, j, vol * dot(grad[a], grad[b]));
      }
    }
  }
}

void assemble_infinite_stiffness(const DofSpace& space, int quad_degree, CsrMatrix& A) {
  const TetMesh& star = space.pair->star;
  const SpaceDecomposition& d = *space.decomp;
  const QuadratureRule& rule = tet_rule(quad_degree);
  const double gamma = space.gamma;

  for (std::int32_t t = 0; t < std::int32_t(star.n_tets()); ++t) {
    const auto& k = star.tet[t];
    const Vec3& v0 = star.vertex[k[0]];
    const Vec3& v1 = star.vertex[k[1]];
    const Vec3& v2 = star.vertex[k[2]];
    const Vec3& v3 = star.vertex[k[3]];
    const double vol = star.tet_volume(t);
    const auto grad = p1_gradients(star, t);
    // Every quadrature point of the element lies in the element's sector,
    // so rho is a plain dot product against the sector gradient.
    const Vec3 g = d.sectors[star.tet_sector[t]].gradient;

    double ke[4][4] = {};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 x = bary_point(rule.point[q], v0, v1, v2, v3);
      const double rho = dot(g, x);
      const double p1 = std::pow(rho, gamma + 1.0);
      const double p2 = p1 * rho;
      const double rho3 = rho * rho * rho;
      const double w = rule.weight[q] / (rho3 * rho3);

      Vec3 G[4];
      for (int a = 0; a < 4; ++a) {
        const double lam = rule.point[q][a];
        G[a] = (-gamma * p1 * lam) * g +
               p2 * (grad[a] - (2.0 * dot(x, grad[a]) / rho) * g);
      }
      for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) ke[a][b] += w * dot(G[a], G[b]);
    }

    for (int a = 0; a < 4; ++a) {
      const std::int32_t i = space.star_dof[k[a]];
      if (i < 0) continue;
      for (int b = a; b < 4; ++b) {
        const std::int32_t j = space.star_dof[k[b]];
        if (j < 0) continue;
        A.add(i, j, vol * ke[a][b]);
        if (i != j) A.add(j, i, vol * ke[a][b]);
      }
    }
  }
}

std::vector<double> assemble_load(const DofSpace& space, const BenchmarkCase& c,
                                  const AssemblyOptions& opts) {
  const TetMesh& mesh = space.pair->central;
  const auto cls = restrict_to_domain(mesh, c.domain, *space.decomp);
  const QuadratureRule& inside_rule = tet_rule(opts.inside_degree);
  const QuadratureRule& cut_rule = tet_rule(opts.cut_degree);

  std::vector<double> b(space.n_dofs, 0.0);
  for (std::int32_t t = 0; t < std::int32_t(mesh.n_tets()); ++t) {
    if (cls[t] == ElementClass::Outside) continue;
    const auto& k = mesh.tet[t];
    const auto grad = p1_gradients(mesh, t);
    const double vol = mesh.tet_volume(t);

    Vec3 moment{};  // int over the element of M, masked by the domain
    if (cls[t] == ElementClass::Inside) {
      if (c.uniform_m) {
        moment = vol * c.m_uniform;
      } else {
        for (std::size_t q = 0; q < inside_rule.size(); ++q) {
          const Vec3 x = bary_point(inside_rule.point[q], mesh.vertex[k[0]], mesh.vertex[k[1]],
                                    mesh.vertex[k[2]], mesh.vertex[k[3]]);
          moment += (vol * inside_rule.weight[q]) * c.magnetization(x);
        }
      }
    } else {
      // Cut element: integrate chi_Omega M over child tetrahedra.  M is
      // constant per gradient dof, so only the masked moment is needed.
      Vec3 corners[4] = {mesh.vertex[k[0]], mesh.vertex[k[1]], mesh.vertex[k[2]],
                         mesh.vertex[k[3]]};
      std::vector<std::array<Vec3, 4>> parts;
      if (opts.subdivide_cut) {
        Vec3 m01 = 0.5 * (corners[0] + corners[1]), m02 = 0.5 * (corners[0] + corners[2]),
             m03 = 0.5 * (corners[0] + corners[3]), m12 = 0.5 * (corners[1] + corners[2]),
             m13 = 0.5 * (corners[1] + corners[3]), m23 = 0.5 * (corners[2] + corners[3]);
        parts = {{corners[0], m01, m02, m03}, {m01, corners[1], m12, m13},
                 {m02, m12, corners[2], m23}, {m03, m13, m23, corners[3]},
                 {m01, m02, m03, m13},        {m01, m02, m12, m13},
                 {m02, m03, m13, m23},        {m02, m12, m13, m23}};
      } else {
        parts = {{corners[0], corners[1], corners[2], corners[3]}};
      }
      for (const auto& p : parts) {
        const double pv = std::abs(signed_volume(p[0], p[1], p[2], p[3]));
        for (std::size_t q = 0; q < cut_rule.size(); ++q) {
          const Vec3 x = bary_point(cut_rule.point[q], p[0], p[1], p[2], p[3]);
          if (!c.domain.contains(x)) continue;
          moment += (pv * cut_rule.weight[q]) * c.magnetization(x);
        }
      }
    }

    for (int a = 0; a < 4; ++a) b[space.central_dof[k[a]]] += dot(moment, grad[a]);
  }
  return b;
}

SparseSystem assemble_system(const DofSpace& space, const BenchmarkCase& c,
                             const AssemblyOptions& opts) {
  SparseSystem sys;
  sys.A = build_pattern(space);
  assemble_central_stiffness(space, sys.A);
  assemble_infinite_stiffness(space, opts.infinite_degree, sys.A);
  sys.b = assemble_load(space, c, opts);
  return sys;
}

void write_matrix_market(const CsrMatrix& A, std::ostream& os) {
  std::int64_t lower = 0;
  for (std::int32_t i = 0; i < A.n; ++i)
    for (std::int64_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      if (A.col[k] <= i) ++lower;

  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << A.n << " " << A.n << " " << lower << "\n";
  os.precision(17);
  for (std::int32_t i = 0; i < A.n; ++i)
    for (std::int64_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      if (A.col[k] <= i) os << (i + 1) << " " << (A.col[k] + 1) << " " << A.val[k] << "\n";
}

}  // namespace strayfem

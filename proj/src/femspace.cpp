#include "strayfem/femspace.hpp"

#include <cmath>
#include <string>

#include "strayfem/errors.hpp"

namespace strayfem {

DofSpace build_dof_space(const SpaceDecomposition& d, const MeshPair& pair, double gamma,
                         int degree) {
  if (!(gamma > -0.5)) throw ConfigError("decay exponent gamma must exceed -1/2");
  if (degree != 1) throw ConfigError("only piecewise linear elements are implemented");

  DofSpace space;
  space.decomp = &d;
  space.pair = &pair;
  space.gamma = gamma;
  space.degree = degree;

  const TetMesh& central = pair.central;
  const TetMesh& star = pair.star;

  space.central_dof.resize(central.n_vertices());
  for (std::size_t v = 0; v < central.n_vertices(); ++v)
    space.central_dof[v] = std::int32_t(v);

  // Star vertices: interface vertices share the central dof of the same
  // index (the star mesh is a vertex-moved copy), the origin is pinned.
  space.star_dof.assign(star.n_vertices(), -1);
  std::int32_t next = std::int32_t(central.n_vertices());
  for (std::size_t v = 0; v < star.n_vertices(); ++v) {
    if (std::int32_t(v) == star.origin_vertex) continue;
    if (star.on_interface[v]) {
      space.star_dof[v] = space.central_dof[v];
      ++space.n_interface;
    } else {
      space.star_dof[v] = next++;
    }
  }
  space.n_dofs = next;
  return space;
}

std::array<Vec3, 4> p1_gradients(const TetMesh& mesh, std::int32_t t) {
  const auto& k = mesh.tet[t];
  const Vec3& v0 = mesh.vertex[k[0]];
  const Mat3 e = Mat3::from_columns(mesh.vertex[k[1]] - v0, mesh.vertex[k[2]] - v0,
                                    mesh.vertex[k[3]] - v0);
  const Mat3 inv = e.inverse();
  // Rows of E^-1 are the gradients of lambda_1..3; lambda_0 completes to 0.
  std::array<Vec3, 4> g;
  for (int a = 0; a < 3; ++a)
    g[a + 1] = {inv.m[a][0], inv.m[a][1], inv.m[a][2]};
  g[0] = -(g[1] + g[2] + g[3]);
  return g;
}

namespace {

EvalResult eval_p1(const TetMesh& mesh, const std::vector<std::int32_t>& dof_of_vertex,
                   const FieldPair& u, const Vec3& x, const char* where) {
  const auto loc = locate_point(mesh, x);
  if (!loc)
    throw ConfigError(std::string("evaluation point outside the ") + where + " mesh");
  const auto& k = mesh.tet[loc->tet];
  const auto grad = p1_gradients(mesh, loc->tet);
  EvalResult r;
  for (int a = 0; a < 4; ++a) {
    const std::int32_t dof = dof_of_vertex[k[a]];
    const double c = dof >= 0 ? u.coeff[dof] : 0.0;
    r.value += c * loc->bary[a];
    r.gradient += c * grad[a];
  }
  return r;
}

}  // namespace

EvalResult eval_central(const DofSpace& space, const FieldPair& u, const Vec3& x) {
  return eval_p1(space.pair->central, space.central_dof, u, x, "central");
}

EvalResult eval_uhat(const DofSpace& space, const FieldPair& u, const Vec3& xstar) {
  return eval_p1(space.pair->star, space.star_dof, u, xstar, "star");
}

EvalResult eval_far(const DofSpace& space, const FieldPair& u, const Vec3& x) {
  const SpaceDecomposition& d = *space.decomp;
  const Sector& s = d.sectors[d.sector_lookup(x)];
  const double r = s.radius(x);
  if (r < 1.0 - 1e-9)
    throw ConfigError("far-field evaluation point lies inside the core");

  const EvalResult hat = eval_uhat(space, u, x / (r * r));
  const double gamma = space.gamma;
  const double rg = std::pow(r, -gamma);

  EvalResult out;
  out.value = rg * hat.value;
  out.gradient = (-gamma * rg / r * hat.value) * s.gradient +
                 (rg / (r * r)) * (hat.gradient - (2.0 * dot(x, hat.gradient) / r) * s.gradient);
  return out;
}

EvalResult eval_potential(const DofSpace& space, const FieldPair& u, const Vec3& x) {
  const Location loc = locate(*space.decomp, x);
  return loc.zone == Zone::Central ? eval_central(space, u, x) : eval_far(space, u, x);
}

}  // namespace strayfem

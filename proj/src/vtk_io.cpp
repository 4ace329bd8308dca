#include "strayfem/vtk_io.hpp"

#include <fstream>
#include <vector>

#include "strayfem/errors.hpp"

namespace strayfem {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os.precision(12);
  return os;
}

void write_grid(std::ofstream& os, const TetMesh& mesh, const char* title) {
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.n_vertices() << " double\n";
  for (const Vec3& v : mesh.vertex) os << v.x << " " << v.y << " " << v.z << "\n";
  os << "CELLS " << mesh.n_tets() << " " << mesh.n_tets() * 5 << "\n";
  for (const auto& t : mesh.tet)
    os << "4 " << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
  os << "CELL_TYPES " << mesh.n_tets() << "\n";
  for (std::size_t t = 0; t < mesh.n_tets(); ++t) os << "10\n";
}

void write_point_scalars(std::ofstream& os, const char* name, const std::vector<double>& v) {
  os << "POINT_DATA " << v.size() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double x : v) os << x << "\n";
}

}  // namespace

void write_vtk_central(const std::string& path, const DofSpace& space, const FieldPair& u) {
  const TetMesh& mesh = space.pair->central;
  auto os = open_out(path);
  write_grid(os, mesh, "stray-field potential, central mesh");

  std::vector<double> pot(mesh.n_vertices());
  for (std::size_t v = 0; v < mesh.n_vertices(); ++v) pot[v] = u.coeff[space.central_dof[v]];
  write_point_scalars(os, "potential", pot);

  os << "CELL_DATA " << mesh.n_tets() << "\nSCALARS grad_magnitude double 1\nLOOKUP_TABLE default\n";
  for (std::int32_t t = 0; t < std::int32_t(mesh.n_tets()); ++t) {
    const auto grad = p1_gradients(mesh, t);
    Vec3 gsum{};
    for (int a = 0; a < 4; ++a) gsum += pot[mesh.tet[t][a]] * grad[a];
    os << norm(gsum) << "\n";
  }
  if (!os) throw IoError("write to '" + path + "' failed");
}

void write_vtk_star(const std::string& path, const DofSpace& space, const FieldPair& u) {
  const TetMesh& mesh = space.pair->star;
  auto os = open_out(path);
  write_grid(os, mesh, "stray-field far factor, star mesh");

  std::vector<double> uhat(mesh.n_vertices(), 0.0);
  for (std::size_t v = 0; v < mesh.n_vertices(); ++v) {
    const std::int32_t dof = space.star_dof[v];
    uhat[v] = dof >= 0 ? u.coeff[dof] : 0.0;
  }
  write_point_scalars(os, "uhat", uhat);
  if (!os) throw IoError("write to '" + path + "' failed");
}

}  // namespace strayfem

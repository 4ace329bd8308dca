#pragma once

// Legacy ASCII VTK output of the two meshes for inspection in ParaView.

#include <string>

#include "strayfem/femspace.hpp"

namespace strayfem {

/// Central mesh with the potential as point data and the gradient magnitude
/// of the P1 interpolant as cell data.
void write_vtk_central(const std::string& path, const DofSpace& space, const FieldPair& u);

/// Star mesh with the pulled-back far field uhat as point data (zero at the
/// origin vertex).
void write_vtk_star(const std::string& path, const DofSpace& space, const FieldPair& u);

}  // namespace strayfem

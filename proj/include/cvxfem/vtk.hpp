#pragma once

#include <map>
#include <string>
#include <vector>

#include "cvxfem/flux_models.hpp"
#include "cvxfem/mesh.hpp"

namespace cvxfem {

/// Legacy ASCII unstructured grid with one point per mesh node. Scalar
/// models write the field `u`; Euler writes rho, mom_x, mom_y, E, pressure,
/// vel_x, vel_y. The simulation time is stored as field data TIME.
std::string vtk_string(const MeshData& mesh, const FluxModel& model, const Field& u, double t);
void write_vtk(const MeshData& mesh, const FluxModel& model, const Field& u, double t,
               const std::string& path);

struct VtkSnapshot {
  Mesh mesh;  // nodes and triangles only
  double time = 0.0;
  std::map<std::string, std::vector<double>> fields;
};

VtkSnapshot read_vtk(const std::string& text);
VtkSnapshot read_vtk_file(const std::string& path);

}  // namespace cvxfem

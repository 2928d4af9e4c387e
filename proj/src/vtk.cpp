#include "cvxfem/vtk.hpp"

#include <fstream>
#include <sstream>

#include "cvxfem/diagnostics.hpp"

namespace cvxfem {
namespace {

void scalars(std::string& out, const std::string& name, const std::vector<double>& values) {
  out += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) out += format_double(v) + "\n";
}

}  // namespace

std::string vtk_string(const MeshData& mesh, const FluxModel& model, const Field& u, double t) {
  const Mesh& m = mesh.mesh;
  const int np = m.num_nodes(), ne = m.num_elements();
  std::string out = "# vtk DataFile Version 3.0\ncvxfem " + model.name() +
                    "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out += "FIELD FieldData 1\nTIME 1 1 double\n" + format_double(t) + "\n";
  out += "POINTS " + std::to_string(np) + " double\n";
  for (const auto& p : m.nodes) out += format_double(p[0]) + " " + format_double(p[1]) + " 0\n";
  out += "CELLS " + std::to_string(ne) + " " + std::to_string(4 * ne) + "\n";
  for (const auto& tri : m.triangles) {
    out += "3 " + std::to_string(tri[0]) + " " + std::to_string(tri[1]) + " " +
           std::to_string(tri[2]) + "\n";
  }
  out += "CELL_TYPES " + std::to_string(ne) + "\n";
  for (int e = 0; e < ne; ++e) out += "5\n";
  out += "POINT_DATA " + std::to_string(np) + "\n";

  const auto node_state = [&](int node) -> const State& { return u[mesh.conn.dof_of_node[node]]; };
  const auto names = component_names(model);
  std::vector<double> values(np);
  for (std::size_t k = 0; k < names.size(); ++k) {
    for (int i = 0; i < np; ++i) values[i] = node_state(i)[k];
    scalars(out, names[k], values);
  }
  if (model.is_system()) {
    for (int i = 0; i < np; ++i) values[i] = model.pressure(node_state(i));
    scalars(out, "pressure", values);
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < np; ++i) values[i] = node_state(i)[k + 1] / node_state(i)[0];
      scalars(out, k == 0 ? "vel_x" : "vel_y", values);
    }
  }
  return out;
}

void write_vtk(const MeshData& mesh, const FluxModel& model, const Field& u, double t,
               const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << vtk_string(mesh, model, u, t);
  if (!f) throw Error("failed writing '" + path + "'");
}

VtkSnapshot read_vtk(const std::string& text) {
  std::istringstream in(text);
  VtkSnapshot s;
  std::string word;
  const auto fail = [](const std::string& what) -> void { throw Error("VTK reader: " + what); };
  int np = -1;
  while (in >> word) {
    if (word == "TIME") {
      int a = 0, b = 0;
      in >> a >> b >> word >> s.time;
    } else if (word == "POINTS") {
      in >> np >> word;
      s.mesh.nodes.resize(np);
      for (auto& p : s.mesh.nodes) {
        double z = 0.0;
        in >> p[0] >> p[1] >> z;
      }
    } else if (word == "CELLS") {
      int ne = 0, size = 0;
      in >> ne >> size;
      s.mesh.triangles.resize(ne);
      for (auto& tri : s.mesh.triangles) {
        int k = 0;
        in >> k >> tri[0] >> tri[1] >> tri[2];
        if (k != 3) fail("only triangles are supported");
      }
    } else if (word == "SCALARS") {
      std::string name, type;
      in >> name >> type;
      std::string line;
      std::getline(in, line);
      in >> word >> word;  // LOOKUP_TABLE default
      std::vector<double> v(np);
      for (double& x : v) in >> x;
      s.fields[name] = std::move(v);
    }
    if (!in && !in.eof()) fail("malformed input near '" + word + "'");
  }
  if (np < 0) fail("no POINTS section");
  return s;
}

VtkSnapshot read_vtk_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return read_vtk(ss.str());
}

}  // namespace cvxfem

#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvxfem/types.hpp"

namespace cvxfem {

using Triangle = std::array<int, 3>;
using Edge = std::pair<int, int>;  // always stored with first < second

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Conforming triangular mesh as read from file or generated.
struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<Triangle> triangles;  // counterclockwise after validation
  std::map<Edge, std::string> boundary_tags;
  std::vector<std::pair<int, int>> periodic_pairs;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(triangles.size()); }
};

/// Element/degree-of-freedom adjacency. With periodic identification a degree
/// of freedom may stand for several mesh nodes.
struct Connectivity {
  std::vector<int> dof_of_node;               // mesh node -> dof
  std::vector<int> node_of_dof;               // representative mesh node of each dof
  std::vector<std::vector<int>> node_elements;  // E_i, sorted, per dof
  std::vector<Triangle> element_nodes;        // N^e as dof triples

  int num_dofs() const { return static_cast<int>(node_of_dof.size()); }
};

/// Exact P1 geometric and mass data of one triangle.
struct ElementGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad{};  // constant basis gradients
  std::array<Vec2, 3> c{};     // c_i = -|K| grad(phi_i)
  double m_elem = 0.0;         // |K|/3
  std::array<std::array<double, 3>, 3> m_pair{};
};

/// Node-side piece of an open boundary edge: the integral of phi_i * n over
/// the edge, which equals (L/2) n for linear elements.
struct BoundaryFace {
  int dof = 0;
  int node = 0;
  Vec2 position{};
  Vec2 normal_weight{};  // (L/2) * outward unit normal
  Vec2 unit_normal{};
  std::string tag;
};

/// Everything the schemes need from the mesh, computed once.
struct MeshData {
  Mesh mesh;
  Connectivity conn;
  std::vector<ElementGeometry> geometry;
  std::vector<double> lumped_mass;             // m_i per dof
  std::vector<std::vector<int>> stencil;       // dofs sharing an element with i (incl. i), sorted
  std::vector<BoundaryFace> boundary_faces;    // open (non-periodic) boundary only
  double total_area = 0.0;

  int num_dofs() const { return conn.num_dofs(); }
  int num_elements() const { return mesh.num_elements(); }
  bool periodic_closed() const { return boundary_faces.empty(); }
  const Vec2& dof_position(int dof) const { return mesh.nodes[conn.node_of_dof[dof]]; }
};

/// Parse and validate the ASCII mesh format.
Mesh read_mesh(std::string_view text);
Mesh read_mesh_file(const std::string& path);
std::string write_mesh(const Mesh& mesh);

/// Checks every Mesh invariant and reorients triangles counterclockwise.
void validate_mesh(Mesh& mesh);

Connectivity build_connectivity(const Mesh& mesh);

ElementGeometry element_geometry(const Mesh& mesh, int e);
ElementGeometry triangle_geometry(const Vec2& a, const Vec2& b, const Vec2& c);

std::vector<double> lumped_mass(const Connectivity& conn, const std::vector<ElementGeometry>& geom);

/// Boundary edges that are not closed by periodic identification.
std::vector<Edge> open_boundary_edges(const Mesh& mesh, const Connectivity& conn);

MeshData build_mesh_data(Mesh mesh);

struct RectangleSpec {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  int nx = 8, ny = 8;
  bool periodic_x = false;
  bool periodic_y = false;
};

/// Uniform triangulation of a rectangle: every cell is cut along its
/// lower-left to upper-right diagonal, so interior nodes touch six triangles.
/// Boundary edges are tagged left/right/bottom/top.
Mesh structured_rectangle(const RectangleSpec& spec);

}  // namespace cvxfem

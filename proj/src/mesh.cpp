#include "cvxfem/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace cvxfem {
namespace {

constexpr double kDegenerateTolerance = 1e-14;

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

struct LineReader {
  std::istringstream in;
  int line_no = 0;

  explicit LineReader(std::string_view text) : in(std::string(text)) {}

  // Next non-blank, comment-stripped line; false at end of input.
  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      out = strip_comment(raw);
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }
};

int parse_count(const std::string& line, const std::string& keyword, int line_no) {
  std::istringstream ls(line);
  std::string word;
  long long n = -1;
  std::string extra;
  if (!(ls >> word >> n) || word != keyword || n < 0 || (ls >> extra)) {
    throw ParseError(line_no, "expected '" + keyword + " <count>'");
  }
  return static_cast<int>(n);
}

int parse_index(std::istringstream& ls, int n_nodes, int line_no) {
  long long i = 0;
  if (!(ls >> i)) throw ParseError(line_no, "expected node index");
  if (i < 0 || i >= n_nodes) {
    throw ParseError(line_no, "node index " + std::to_string(i) + " out of range [0, " +
                                  std::to_string(n_nodes) + ")");
  }
  return static_cast<int>(i);
}

void expect_end(std::istringstream& ls, int line_no) {
  std::string extra;
  if (ls >> extra) throw ParseError(line_no, "unexpected token '" + extra + "'");
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double bbox_scale(const std::vector<Vec2>& pts) {
  if (pts.empty()) return 0.0;
  Vec2 lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = {std::min(lo[0], p[0]), std::min(lo[1], p[1])};
    hi = {std::max(hi[0], p[0]), std::max(hi[1], p[1])};
  }
  return std::hypot(hi[0] - lo[0], hi[1] - lo[1]);
}

std::map<Edge, int> edge_counts(const std::vector<Triangle>& tris) {
  std::map<Edge, int> counts;
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) ++counts[make_edge(t[k], t[(k + 1) % 3])];
  }
  return counts;
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

Mesh read_mesh(std::string_view text) {
  LineReader reader(text);
  Mesh mesh;
  std::string line;

  if (!reader.next(line)) throw ParseError(reader.line_no, "empty mesh file");
  const int n_nodes = parse_count(line, "nodes", reader.line_no);
  mesh.nodes.reserve(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    if (!reader.next(line)) throw ParseError(reader.line_no, "unexpected end of node list");
    std::istringstream ls(line);
    double x = 0.0, y = 0.0;
    if (!(ls >> x >> y)) throw ParseError(reader.line_no, "expected 'x y'");
    expect_end(ls, reader.line_no);
    mesh.nodes.push_back({x, y});
  }

  if (!reader.next(line)) throw ParseError(reader.line_no, "missing 'triangles' section");
  const int n_tris = parse_count(line, "triangles", reader.line_no);
  mesh.triangles.reserve(n_tris);
  for (int e = 0; e < n_tris; ++e) {
    if (!reader.next(line)) throw ParseError(reader.line_no, "unexpected end of triangle list");
    std::istringstream ls(line);
    Triangle t{};
    for (int k = 0; k < 3; ++k) t[k] = parse_index(ls, n_nodes, reader.line_no);
    expect_end(ls, reader.line_no);
    mesh.triangles.push_back(t);
  }

  bool seen_boundary = false, seen_periodic = false;
  while (reader.next(line)) {
    std::istringstream head(line);
    std::string word;
    head >> word;
    if (word == "boundary" && !seen_boundary) {
      seen_boundary = true;
      const int n = parse_count(line, "boundary", reader.line_no);
      for (int b = 0; b < n; ++b) {
        if (!reader.next(line)) throw ParseError(reader.line_no, "unexpected end of boundary list");
        std::istringstream ls(line);
        const int i = parse_index(ls, n_nodes, reader.line_no);
        const int j = parse_index(ls, n_nodes, reader.line_no);
        std::string tag;
        if (!(ls >> tag)) throw ParseError(reader.line_no, "expected boundary tag");
        expect_end(ls, reader.line_no);
        mesh.boundary_tags[make_edge(i, j)] = tag;
      }
    } else if (word == "periodic" && !seen_periodic) {
      seen_periodic = true;
      const int n = parse_count(line, "periodic", reader.line_no);
      for (int p = 0; p < n; ++p) {
        if (!reader.next(line)) throw ParseError(reader.line_no, "unexpected end of periodic list");
        std::istringstream ls(line);
        const int i = parse_index(ls, n_nodes, reader.line_no);
        const int j = parse_index(ls, n_nodes, reader.line_no);
        expect_end(ls, reader.line_no);
        mesh.periodic_pairs.emplace_back(i, j);
      }
    } else {
      throw ParseError(reader.line_no, "unexpected section '" + word + "'");
    }
  }

  validate_mesh(mesh);
  return mesh;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_mesh(ss.str());
}

std::string write_mesh(const Mesh& mesh) {
  std::string out;
  char buf[128];
  out += "nodes " + std::to_string(mesh.nodes.size()) + "\n";
  for (const auto& p : mesh.nodes) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p[0], p[1]);
    out += buf;
  }
  out += "triangles " + std::to_string(mesh.triangles.size()) + "\n";
  for (const auto& t : mesh.triangles) {
    std::snprintf(buf, sizeof buf, "%d %d %d\n", t[0], t[1], t[2]);
    out += buf;
  }
  if (!mesh.boundary_tags.empty()) {
    out += "boundary " + std::to_string(mesh.boundary_tags.size()) + "\n";
    for (const auto& [edge, tag] : mesh.boundary_tags) {
      out += std::to_string(edge.first) + " " + std::to_string(edge.second) + " " + tag + "\n";
    }
  }
  if (!mesh.periodic_pairs.empty()) {
    out += "periodic " + std::to_string(mesh.periodic_pairs.size()) + "\n";
    for (const auto& [i, j] : mesh.periodic_pairs) {
      out += std::to_string(i) + " " + std::to_string(j) + "\n";
    }
  }
  return out;
}

void validate_mesh(Mesh& mesh) {
  const int n = mesh.num_nodes();
  if (n < 3 || mesh.triangles.empty()) throw MeshError("mesh needs at least one triangle");
  const double scale = bbox_scale(mesh.nodes);
  const double min_area = kDegenerateTolerance * scale * scale;

  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto& t = mesh.triangles[e];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= n) {
        throw MeshError("triangle " + std::to_string(e) + ": node index " + std::to_string(t[k]) +
                        " out of range");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw MeshError("triangle " + std::to_string(e) + " repeats a node");
    }
    const double a = signed_area(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]);
    if (std::abs(a) <= min_area) {
      throw MeshError("triangle " + std::to_string(e) + " is degenerate (area " + std::to_string(a) +
                      ")");
    }
    if (a < 0.0) std::swap(t[1], t[2]);
  }

  const auto counts = edge_counts(mesh.triangles);
  std::vector<char> on_boundary(n, 0);
  for (const auto& [edge, count] : counts) {
    if (count > 2) {
      throw MeshError("non-conforming mesh: edge (" + std::to_string(edge.first) + "," +
                      std::to_string(edge.second) + ") shared by " + std::to_string(count) +
                      " triangles");
    }
    if (count == 1) on_boundary[edge.first] = on_boundary[edge.second] = 1;
  }
  for (const auto& [edge, tag] : mesh.boundary_tags) {
    const auto it = counts.find(edge);
    if (it == counts.end() || it->second != 1) {
      throw MeshError("tagged edge (" + std::to_string(edge.first) + "," +
                      std::to_string(edge.second) + ") is not a boundary edge");
    }
  }
  for (const auto& [i, j] : mesh.periodic_pairs) {
    if (i == j) throw MeshError("periodic pair pairs node " + std::to_string(i) + " with itself");
    if (i < 0 || i >= n || j < 0 || j >= n) throw MeshError("periodic pair index out of range");
    if (!on_boundary[i] || !on_boundary[j]) {
      throw MeshError("periodic pair (" + std::to_string(i) + "," + std::to_string(j) +
                      ") contains an interior node");
    }
  }
}

Connectivity build_connectivity(const Mesh& mesh) {
  const int n = mesh.num_nodes();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& [i, j] : mesh.periodic_pairs) {
    const int ri = find_root(parent, i), rj = find_root(parent, j);
    if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
  }

  Connectivity conn;
  conn.dof_of_node.assign(n, -1);
  std::vector<int> dof_of_root(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find_root(parent, i);
    if (dof_of_root[r] < 0) {
      dof_of_root[r] = conn.num_dofs();
      conn.node_of_dof.push_back(i);
    }
    conn.dof_of_node[i] = dof_of_root[r];
  }

  conn.node_elements.assign(conn.num_dofs(), {});
  conn.element_nodes.reserve(mesh.triangles.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.triangles[e];
    Triangle d{conn.dof_of_node[t[0]], conn.dof_of_node[t[1]], conn.dof_of_node[t[2]]};
    if (d[0] == d[1] || d[1] == d[2] || d[0] == d[2]) {
      throw MeshError("periodic identification collapses triangle " + std::to_string(e));
    }
    conn.element_nodes.push_back(d);
    for (int k = 0; k < 3; ++k) conn.node_elements[d[k]].push_back(e);
  }

  const auto counts = edge_counts(conn.element_nodes);
  for (const auto& [edge, count] : counts) {
    if (count > 2) throw MeshError("periodic identification makes the mesh non-conforming");
  }
  return conn;
}

ElementGeometry triangle_geometry(const Vec2& a, const Vec2& b, const Vec2& c) {
  ElementGeometry g;
  const double area = signed_area(a, b, c);
  const double scale = bbox_scale({a, b, c});
  if (area <= kDegenerateTolerance * scale * scale) {
    throw MeshError("degenerate or clockwise triangle (signed area " + std::to_string(area) + ")");
  }
  g.area = area;
  const double inv = 1.0 / (2.0 * area);
  g.grad[0] = {(b[1] - c[1]) * inv, (c[0] - b[0]) * inv};
  g.grad[1] = {(c[1] - a[1]) * inv, (a[0] - c[0]) * inv};
  g.grad[2] = {(a[1] - b[1]) * inv, (b[0] - a[0]) * inv};
  // c_i = -|K| grad(phi_i) is half the inward-rotated opposite edge; computing
  // it from coordinate differences keeps the zero sum exact up to one rounding.
  g.c[0] = {0.5 * (c[1] - b[1]), 0.5 * (b[0] - c[0])};
  g.c[1] = {0.5 * (a[1] - c[1]), 0.5 * (c[0] - a[0])};
  g.c[2] = {0.5 * (b[1] - a[1]), 0.5 * (a[0] - b[0])};
  g.m_elem = area / 3.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g.m_pair[i][j] = i == j ? area / 6.0 : area / 12.0;
  }
  return g;
}

ElementGeometry element_geometry(const Mesh& mesh, int e) {
  if (e < 0 || e >= mesh.num_elements()) {
    throw MeshError("element index " + std::to_string(e) + " out of range");
  }
  const auto& t = mesh.triangles[e];
  return triangle_geometry(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]);
}

std::vector<double> lumped_mass(const Connectivity& conn, const std::vector<ElementGeometry>& geom) {
  std::vector<double> m(conn.num_dofs(), 0.0);
  for (std::size_t e = 0; e < conn.element_nodes.size(); ++e) {
    for (int k = 0; k < 3; ++k) m[conn.element_nodes[e][k]] += geom[e].m_elem;
  }
  return m;
}

std::vector<Edge> open_boundary_edges(const Mesh& mesh, const Connectivity& conn) {
  const auto node_counts = edge_counts(mesh.triangles);
  const auto dof_counts = edge_counts(conn.element_nodes);
  std::vector<Edge> open;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      if (node_counts.at(make_edge(a, b)) != 1) continue;
      const Edge d = make_edge(conn.dof_of_node[a], conn.dof_of_node[b]);
      if (dof_counts.at(d) == 1) open.emplace_back(a, b);  // counterclockwise order
    }
  }
  return open;
}

MeshData build_mesh_data(Mesh mesh) {
  MeshData data;
  data.mesh = std::move(mesh);
  data.conn = build_connectivity(data.mesh);

  data.geometry.reserve(data.mesh.triangles.size());
  for (int e = 0; e < data.mesh.num_elements(); ++e) {
    data.geometry.push_back(element_geometry(data.mesh, e));
    data.total_area += data.geometry.back().area;
  }
  data.lumped_mass = lumped_mass(data.conn, data.geometry);

  data.stencil.assign(data.num_dofs(), {});
  for (int i = 0; i < data.num_dofs(); ++i) {
    auto& s = data.stencil[i];
    s.push_back(i);
    for (int e : data.conn.node_elements[i]) {
      for (int j : data.conn.element_nodes[e]) s.push_back(j);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  for (const auto& [a, b] : open_boundary_edges(data.mesh, data.conn)) {
    const Vec2& pa = data.mesh.nodes[a];
    const Vec2& pb = data.mesh.nodes[b];
    const double len = std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
    const Vec2 unit{(pb[1] - pa[1]) / len, -(pb[0] - pa[0]) / len};
    const auto it = data.mesh.boundary_tags.find(make_edge(a, b));
    const std::string tag = it == data.mesh.boundary_tags.end() ? "default" : it->second;
    for (int node : {a, b}) {
      BoundaryFace face;
      face.node = node;
      face.dof = data.conn.dof_of_node[node];
      face.position = data.mesh.nodes[node];
      face.unit_normal = unit;
      face.normal_weight = {0.5 * len * unit[0], 0.5 * len * unit[1]};
      face.tag = tag;
      data.boundary_faces.push_back(face);
    }
  }
  return data;
}

Mesh structured_rectangle(const RectangleSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1) throw MeshError("structured mesh needs nx, ny >= 1");
  if (!(spec.x1 > spec.x0) || !(spec.y1 > spec.y0)) throw MeshError("empty rectangle");
  Mesh mesh;
  const int nx = spec.nx, ny = spec.ny;
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.nodes.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    // Endpoints are set exactly so periodic partners share coordinates.
    const double y = j == ny ? spec.y1 : spec.y0 + (spec.y1 - spec.y0) * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? spec.x1 : spec.x0 + (spec.x1 - spec.x0) * i / nx;
      mesh.nodes.push_back({x, y});
    }
  }
  mesh.triangles.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  for (int i = 0; i < nx; ++i) {
    mesh.boundary_tags[make_edge(id(i, 0), id(i + 1, 0))] = "bottom";
    mesh.boundary_tags[make_edge(id(i, ny), id(i + 1, ny))] = "top";
  }
  for (int j = 0; j < ny; ++j) {
    mesh.boundary_tags[make_edge(id(0, j), id(0, j + 1))] = "left";
    mesh.boundary_tags[make_edge(id(nx, j), id(nx, j + 1))] = "right";
  }
  if (spec.periodic_x) {
    for (int j = 0; j <= ny; ++j) mesh.periodic_pairs.emplace_back(id(0, j), id(nx, j));
  }
  if (spec.periodic_y) {
    for (int i = 0; i <= nx; ++i) mesh.periodic_pairs.emplace_back(id(i, 0), id(i, ny));
  }
  validate_mesh(mesh);
  return mesh;
}

}  // namespace cvxfem

#include "pnsfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pnsfem {

namespace {

double signed_area2(const Mesh& m, int c) {
  const Point2 a = m.vertices[m.cells[c][0]];
  const Point2 b = m.vertices[m.cells[c][1]];
  const Point2 d = m.vertices[m.cells[c][2]];
  return (b.x - a.x) * (d.y - a.y) - (b.y - a.y) * (d.x - a.x);
}

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Every edge with the cells (and local edge slots) that carry it.
std::map<EdgeKey, std::vector<std::pair<int, int>>> collect_edges(const Mesh& m) {
  std::map<EdgeKey, std::vector<std::pair<int, int>>> edges;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    for (int e = 0; e < 3; ++e) {
      const auto vv = edge_vertices(m, c, e);
      edges[edge_key(vv[0], vv[1])].push_back({c, e});
    }
  }
  return edges;
}

int classify_side(Point2 a, Point2 b, double x0, double x1, double y0, double y1, double tol) {
  if (std::abs(a.x - x0) < tol && std::abs(b.x - x0) < tol) return side_left;
  if (std::abs(a.x - x1) < tol && std::abs(b.x - x1) < tol) return side_right;
  if (std::abs(a.y - y0) < tol && std::abs(b.y - y0) < tol) return side_bottom;
  if (std::abs(a.y - y1) < tol && std::abs(b.y - y1) < tol) return side_top;
  return -1;
}

void rebuild_boundary(Mesh& m) {
  double x0 = m.vertices[0].x, x1 = m.vertices[0].x;
  double y0 = m.vertices[0].y, y1 = m.vertices[0].y;
  for (const Point2& p : m.vertices) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double tol = 1e-12 * std::max({x1 - x0, y1 - y0, 1.0});
  m.boundary_edges.clear();
  for (const auto& [key, carriers] : collect_edges(m)) {
    if (carriers.size() != 1) continue;
    const Point2 a = m.vertices[key.first];
    const Point2 b = m.vertices[key.second];
    BoundaryEdge be;
    be.cell = carriers[0].first;
    be.local_edge = carriers[0].second;
    be.side = classify_side(a, b, x0, x1, y0, y1, tol);
    m.boundary_edges.push_back(be);
  }
}

double update_h_max(Mesh& m) {
  double h = 0.0;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c)
    h = std::max(h, cell_diameter(m, c));
  m.h_max = h;
  return h;
}

}  // namespace

std::array<int, 2> edge_vertices(const Mesh& mesh, int cell, int local_edge) {
  const auto& v = mesh.cells[cell];
  return {v[(local_edge + 1) % 3], v[(local_edge + 2) % 3]};
}

double cell_area(const Mesh& mesh, int cell) { return 0.5 * signed_area2(mesh, cell); }

double cell_diameter(const Mesh& mesh, int cell) {
  const auto& v = mesh.cells[cell];
  double h = 0.0;
  for (int e = 0; e < 3; ++e)
    h = std::max(h, norm(mesh.vertices[v[(e + 1) % 3]] - mesh.vertices[v[(e + 2) % 3]]));
  return h;
}

double mesh_size(const Mesh& mesh) {
  double h = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
    h = std::max(h, cell_diameter(mesh, c));
  return h;
}

Mesh build_rectangle_mesh(double x0, double y0, double x1, double y1, int nx, int ny) {
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("rectangle mesh: empty extents");
  if (nx < 1 || ny < 1) throw std::invalid_argument("rectangle mesh: nx, ny must be positive");

  Mesh m;
  const double hx = (x1 - x0) / nx;
  const double hy = (y1 - y0) / ny;
  m.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.push_back({x0 + i * hx, y0 + j * hy});

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  m.cells.reserve(static_cast<size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      // Square split along the bottom-left to top-right diagonal.
      const int bl = vid(i, j), br = vid(i + 1, j);
      const int tl = vid(i, j + 1), tr = vid(i + 1, j + 1);
      m.cells.push_back({bl, br, tr});
      m.cells.push_back({bl, tr, tl});
    }
  }
  m.level = 0;
  update_h_max(m);
  rebuild_boundary(m);
  return m;
}

std::pair<Mesh, RefinementMap> refine_regular(const Mesh& mesh) {
  Mesh fine;
  fine.vertices = mesh.vertices;
  fine.level = mesh.level + 1;

  // One midpoint vertex per parent edge, numbered after the parent vertices
  // in the order the (sorted) edges first appear.
  std::map<EdgeKey, int> midpoint;
  for (const auto& [key, carriers] : collect_edges(mesh)) {
    const Point2 a = mesh.vertices[key.first];
    const Point2 b = mesh.vertices[key.second];
    midpoint[key] = static_cast<int>(fine.vertices.size());
    fine.vertices.push_back(0.5 * (a + b));
  }

  RefinementMap map;
  fine.cells.reserve(4 * mesh.cells.size());
  map.parent.reserve(4 * mesh.cells.size());
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const auto& v = mesh.cells[c];
    const int m0 = midpoint.at(edge_key(v[1], v[2]));
    const int m1 = midpoint.at(edge_key(v[2], v[0]));
    const int m2 = midpoint.at(edge_key(v[0], v[1]));
    fine.cells.push_back({v[0], m2, m1});
    fine.cells.push_back({v[1], m0, m2});
    fine.cells.push_back({v[2], m1, m0});
    fine.cells.push_back({m0, m1, m2});
    for (int child = 0; child < 4; ++child) map.parent.push_back(c);
  }
  update_h_max(fine);
  rebuild_boundary(fine);
  return {std::move(fine), std::move(map)};
}

std::vector<std::string> validate(const Mesh& mesh) {
  std::vector<std::string> defects;
  const int nv = static_cast<int>(mesh.vertices.size());
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const auto& v = mesh.cells[c];
    for (int i = 0; i < 3; ++i) {
      if (v[i] < 0 || v[i] >= nv) {
        defects.push_back("cell " + std::to_string(c) + ": vertex index out of range");
        break;
      }
    }
    if (!defects.empty() && defects.back().starts_with("cell " + std::to_string(c))) continue;
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
      defects.push_back("cell " + std::to_string(c) + ": repeated vertex");
    else if (signed_area2(mesh, c) <= 0.0)
      defects.push_back("cell " + std::to_string(c) + ": non-positive orientation");
  }
  if (!defects.empty()) return defects;

  const auto edges = collect_edges(mesh);
  for (const auto& [key, carriers] : edges) {
    if (carriers.size() > 2)
      defects.push_back("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                        "): shared by " + std::to_string(carriers.size()) + " cells");
  }

  // A vertex lying strictly inside another cell's edge is a hanging node.
  std::map<std::pair<long long, long long>, int> snapped;
  double scale = 1.0;
  for (const Point2& p : mesh.vertices) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double q = 1e12 / scale;
  for (int i = 0; i < nv; ++i)
    snapped[{llround(mesh.vertices[i].x * q), llround(mesh.vertices[i].y * q)}] = i;
  for (const auto& [key, carriers] : edges) {
    const Point2 mid = 0.5 * (mesh.vertices[key.first] + mesh.vertices[key.second]);
    auto it = snapped.find({llround(mid.x * q), llround(mid.y * q)});
    if (it != snapped.end())
      defects.push_back("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                        "): vertex " + std::to_string(it->second) + " hangs at its midpoint");
  }
  return defects;
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "triangles 2d\n";
  out.precision(17);
  out << mesh.vertices.size() << "\n";
  for (const Point2& p : mesh.vertices) out << p.x << " " << p.y << "\n";
  out << mesh.cells.size() << "\n";
  for (const auto& c : mesh.cells) out << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << mesh.boundary_edges.size() << "\n";
  for (const BoundaryEdge& b : mesh.boundary_edges)
    out << b.cell << " " << b.local_edge << " " << b.side << "\n";
}

Mesh read_mesh(std::istream& in) {
  std::string tag, dim;
  in >> tag >> dim;
  if (!in || tag != "triangles" || dim != "2d")
    throw std::runtime_error("mesh read: bad header, expected 'triangles 2d'");
  size_t nv = 0;
  in >> nv;
  if (!in) throw std::runtime_error("mesh read: bad vertex count");
  Mesh m;  // the refinement level is runtime metadata, not serialized
  m.vertices.resize(nv);
  for (size_t i = 0; i < nv; ++i) in >> m.vertices[i].x >> m.vertices[i].y;
  size_t nc = 0;
  in >> nc;
  if (!in) throw std::runtime_error("mesh read: bad cell count");
  m.cells.resize(nc);
  for (size_t c = 0; c < nc; ++c) in >> m.cells[c][0] >> m.cells[c][1] >> m.cells[c][2];
  size_t nb = 0;
  in >> nb;
  if (!in) throw std::runtime_error("mesh read: bad boundary count");
  m.boundary_edges.resize(nb);
  for (BoundaryEdge& b : m.boundary_edges) in >> b.cell >> b.local_edge >> b.side;
  if (!in) throw std::runtime_error("mesh read: truncated data");
  update_h_max(m);
  return m;
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_mesh(mesh, out);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_mesh(in);
}

}  // namespace pnsfem

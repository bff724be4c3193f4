#include "pnsfem/elements.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace pnsfem {

ElementFamily family_from_string(const std::string& name) {
  if (name == "mini") return ElementFamily::Mini;
  if (name == "taylor_hood" || name == "taylor-hood" || name == "th")
    return ElementFamily::TaylorHood;
  if (name == "crouzeix_raviart" || name == "crouzeix-raviart" || name == "cr")
    return ElementFamily::CrouzeixRaviart;
  throw std::invalid_argument("unknown element family '" + name + "'");
}

std::string family_to_string(ElementFamily family) {
  switch (family) {
    case ElementFamily::Mini: return "mini";
    case ElementFamily::TaylorHood: return "taylor_hood";
    case ElementFamily::CrouzeixRaviart: return "crouzeix_raviart";
  }
  return "?";
}

int velocity_poly_degree(ElementFamily family) {
  switch (family) {
    case ElementFamily::Mini: return 3;
    case ElementFamily::TaylorHood: return 2;
    case ElementFamily::CrouzeixRaviart: return 3;
  }
  return 0;
}

int local_velocity_dofs(ElementFamily family) {
  switch (family) {
    case ElementFamily::Mini: return 4;
    case ElementFamily::TaylorHood: return 6;
    case ElementFamily::CrouzeixRaviart: return 7;
  }
  return 0;
}

MixedSpace build_space(const Mesh& mesh, ElementFamily family) {
  MixedSpace sp;
  sp.mesh = &mesh;
  sp.family = family;
  const int nv = static_cast<int>(mesh.vertices.size());
  const int nc = static_cast<int>(mesh.cells.size());
  const bool has_edges = family != ElementFamily::Mini;
  const bool has_bubble = family != ElementFamily::TaylorHood;

  // Edge numbering: sorted vertex pairs in lexicographic order.
  std::map<std::pair<int, int>, int> edge_id;
  if (has_edges) {
    for (int c = 0; c < nc; ++c)
      for (int e = 0; e < 3; ++e) {
        auto vv = edge_vertices(mesh, c, e);
        edge_id.emplace(std::minmax(vv[0], vv[1]), 0);
      }
    int next = 0;
    for (auto& [key, id] : edge_id) id = next++;
  }
  const int ne = static_cast<int>(edge_id.size());

  sp.n_scalar = nv + (has_edges ? ne : 0) + (has_bubble ? nc : 0);
  sp.n_u = 2 * sp.n_scalar;

  sp.u_nodes.resize(sp.n_scalar);
  sp.u_kind.assign(sp.n_scalar, dof_vertex);
  for (int v = 0; v < nv; ++v) sp.u_nodes[v] = mesh.vertices[v];
  if (has_edges) {
    for (const auto& [key, id] : edge_id) {
      sp.u_nodes[nv + id] = 0.5 * (mesh.vertices[key.first] + mesh.vertices[key.second]);
      sp.u_kind[nv + id] = dof_edge;
    }
  }

  sp.cell_udofs.resize(nc);
  for (int c = 0; c < nc; ++c) {
    auto& dofs = sp.cell_udofs[c];
    const auto& v = mesh.cells[c];
    dofs = {v[0], v[1], v[2]};
    if (has_edges)
      for (int e = 0; e < 3; ++e) {
        auto vv = edge_vertices(mesh, c, e);
        dofs.push_back(nv + edge_id.at(std::minmax(vv[0], vv[1])));
      }
    if (has_bubble) {
      const int cd = nv + (has_edges ? ne : 0) + c;
      dofs.push_back(cd);
      sp.u_kind[cd] = dof_cell;
      sp.u_nodes[cd] = (1.0 / 3.0) * (mesh.vertices[v[0]] + mesh.vertices[v[1]] + mesh.vertices[v[2]]);
    }
  }

  // Pressure: shared vertex P1, or three private dofs per cell.
  sp.cell_pdofs.resize(nc);
  if (family == ElementFamily::CrouzeixRaviart) {
    sp.n_p = 3 * nc;
    for (int c = 0; c < nc; ++c) sp.cell_pdofs[c] = {3 * c, 3 * c + 1, 3 * c + 2};
  } else {
    sp.n_p = nv;
    for (int c = 0; c < nc; ++c) {
      const auto& v = mesh.cells[c];
      sp.cell_pdofs[c] = {v[0], v[1], v[2]};
    }
  }

  // Boundary velocity dofs: endpoints and midpoints of boundary edges.
  sp.u_on_boundary.assign(sp.n_scalar, 0);
  for (const BoundaryEdge& be : mesh.boundary_edges) {
    auto vv = edge_vertices(mesh, be.cell, be.local_edge);
    sp.u_on_boundary[vv[0]] = 1;
    sp.u_on_boundary[vv[1]] = 1;
    if (has_edges) sp.u_on_boundary[nv + edge_id.at(std::minmax(vv[0], vv[1]))] = 1;
  }
  for (int g = 0; g < sp.n_scalar; ++g)
    if (sp.u_on_boundary[g]) sp.boundary_scalar.push_back(g);
  return sp;
}

BasisEval eval_basis_ref(ElementFamily family, double l1, double l2) {
  const double l0 = 1.0 - l1 - l2;
  // Barycentric gradients with respect to (x,y) = (l1,l2).
  static const double gl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  const double l[3] = {l0, l1, l2};

  BasisEval b;
  b.n_u_loc = local_velocity_dofs(family);
  const bool p2 = family != ElementFamily::Mini;

  if (!p2) {
    for (int i = 0; i < 3; ++i) {
      b.u_val[i] = l[i];
      b.u_grad[i][0] = gl[i][0];
      b.u_grad[i][1] = gl[i][1];
    }
  } else {
    for (int i = 0; i < 3; ++i) {
      b.u_val[i] = l[i] * (2.0 * l[i] - 1.0);
      b.u_grad[i][0] = (4.0 * l[i] - 1.0) * gl[i][0];
      b.u_grad[i][1] = (4.0 * l[i] - 1.0) * gl[i][1];
    }
    for (int e = 0; e < 3; ++e) {
      const int i = (e + 1) % 3, j = (e + 2) % 3;
      b.u_val[3 + e] = 4.0 * l[i] * l[j];
      b.u_grad[3 + e][0] = 4.0 * (l[i] * gl[j][0] + l[j] * gl[i][0]);
      b.u_grad[3 + e][1] = 4.0 * (l[i] * gl[j][1] + l[j] * gl[i][1]);
    }
  }
  if (family != ElementFamily::TaylorHood) {
    const int k = b.n_u_loc - 1;
    b.u_val[k] = 27.0 * l0 * l1 * l2;
    for (int d = 0; d < 2; ++d)
      b.u_grad[k][d] =
          27.0 * (l1 * l2 * gl[0][d] + l0 * l2 * gl[1][d] + l0 * l1 * gl[2][d]);
  }
  for (int i = 0; i < 3; ++i) {
    b.p_val[i] = l[i];
    b.p_grad[i][0] = gl[i][0];
    b.p_grad[i][1] = gl[i][1];
  }
  return b;
}

BasisEval eval_basis(const MixedSpace& space, int cell, double l1, double l2) {
  if (cell < 0 || cell >= static_cast<int>(space.cell_udofs.size()))
    throw std::out_of_range("eval_basis: cell index out of range");
  return eval_basis_ref(space.family, l1, l2);
}

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
  const auto& v = mesh.cells[cell];
  const Point2 a = mesh.vertices[v[0]];
  const Point2 e1 = mesh.vertices[v[1]] - a;
  const Point2 e2 = mesh.vertices[v[2]] - a;
  CellGeometry g;
  g.origin = a;
  g.jac[0][0] = e1.x;
  g.jac[0][1] = e2.x;
  g.jac[1][0] = e1.y;
  g.jac[1][1] = e2.y;
  g.det = e1.x * e2.y - e1.y * e2.x;
  if (g.det <= 0.0) throw std::runtime_error("cell_geometry: non-positive Jacobian");
  const double inv = 1.0 / g.det;
  // inv(J) = [e2.y -e2.x; -e1.y e1.x]/det; transpose it.
  g.inv_t[0][0] = e2.y * inv;
  g.inv_t[0][1] = -e1.y * inv;
  g.inv_t[1][0] = -e2.x * inv;
  g.inv_t[1][1] = e1.x * inv;
  return g;
}

Point2 map_to_cell(const CellGeometry& g, double l1, double l2) {
  return {g.origin.x + g.jac[0][0] * l1 + g.jac[0][1] * l2,
          g.origin.y + g.jac[1][0] * l1 + g.jac[1][1] * l2};
}

Point2 map_to_reference(const CellGeometry& g, Point2 x) {
  const double rx = x.x - g.origin.x, ry = x.y - g.origin.y;
  const double inv = 1.0 / g.det;
  return {(g.jac[1][1] * rx - g.jac[0][1] * ry) * inv,
          (-g.jac[1][0] * rx + g.jac[0][0] * ry) * inv};
}

std::vector<double> interpolate_velocity(const MixedSpace& space,
                                         const std::function<Vec2(Point2)>& field) {
  std::vector<double> u(static_cast<size_t>(space.n_u), 0.0);
  for (int g = 0; g < space.n_scalar; ++g) {
    if (space.u_kind[g] == dof_cell) continue;
    const Vec2 v = field(space.u_nodes[g]);
    u[2 * g] = v.x;
    u[2 * g + 1] = v.y;
  }
  return u;
}

std::vector<double> interpolate_pressure(const MixedSpace& space,
                                         const std::function<double(Point2)>& field) {
  std::vector<double> p(static_cast<size_t>(space.n_p), 0.0);
  if (space.family == ElementFamily::CrouzeixRaviart) {
    const Mesh& m = *space.mesh;
    for (int c = 0; c < static_cast<int>(m.cells.size()); ++c)
      for (int i = 0; i < 3; ++i)
        p[space.cell_pdofs[c][i]] = field(m.vertices[m.cells[c][i]]);
  } else {
    for (int v = 0; v < space.n_p; ++v) p[v] = field(space.mesh->vertices[v]);
  }
  return p;
}

Vec2 eval_velocity(const MixedSpace& space, const std::vector<double>& u, int cell, double l1,
                   double l2) {
  const BasisEval b = eval_basis_ref(space.family, l1, l2);
  Vec2 val;
  const auto& dofs = space.cell_udofs[cell];
  for (int a = 0; a < b.n_u_loc; ++a) {
    val.x += u[2 * dofs[a]] * b.u_val[a];
    val.y += u[2 * dofs[a] + 1] * b.u_val[a];
  }
  return val;
}

Mat2 eval_velocity_gradient(const MixedSpace& space, const std::vector<double>& u, int cell,
                            double l1, double l2) {
  const BasisEval b = eval_basis_ref(space.family, l1, l2);
  const CellGeometry g = cell_geometry(*space.mesh, cell);
  Mat2 grad;
  const auto& dofs = space.cell_udofs[cell];
  for (int a = 0; a < b.n_u_loc; ++a) {
    const double gx = g.inv_t[0][0] * b.u_grad[a][0] + g.inv_t[0][1] * b.u_grad[a][1];
    const double gy = g.inv_t[1][0] * b.u_grad[a][0] + g.inv_t[1][1] * b.u_grad[a][1];
    grad.a11 += u[2 * dofs[a]] * gx;
    grad.a12 += u[2 * dofs[a]] * gy;
    grad.a21 += u[2 * dofs[a] + 1] * gx;
    grad.a22 += u[2 * dofs[a] + 1] * gy;
  }
  return grad;
}

double eval_pressure(const MixedSpace& space, const std::vector<double>& p, int cell, double l1,
                     double l2) {
  const BasisEval b = eval_basis_ref(space.family, l1, l2);
  double val = 0.0;
  for (int j = 0; j < 3; ++j) val += p[space.cell_pdofs[cell][j]] * b.p_val[j];
  return val;
}

}  // namespace pnsfem
